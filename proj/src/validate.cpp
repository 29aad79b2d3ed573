#include "knotfield/validate.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "knotfield/parallel.hpp"

namespace knotfield {

std::vector<Event> random_events(std::size_t n, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<Event> out(n);
  for (auto& e : out) {
    e.t = dist(rng);
    e.x = dist(rng);
    e.y = dist(rng);
    e.z = dist(rng);
  }
  return out;
}

namespace {

Event shifted(Event e, int axis, double h) {
  switch (axis) {
    case kT: e.t += h; break;
    case kX: e.x += h; break;
    case kY: e.y += h; break;
    case kZ: e.z += h; break;
  }
  return e;
}

// Pairwise summation in fixed order.
double tree_sum(std::vector<double> v) {
  if (v.empty()) return 0.0;
  while (v.size() > 1) {
    std::vector<double> next((v.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = v[2 * i] + (2 * i + 1 < v.size() ? v[2 * i + 1] : 0.0);
    v.swap(next);
  }
  return v[0];
}

// Max of u over a Fibonacci lattice on the sphere |x - centre| = r.
double shell_max(const DensityFn& density, double t, const Vec3& centre, double r) {
  constexpr int kPoints = 256;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double umax = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    const double zc = 1.0 - 2.0 * (k + 0.5) / kPoints;
    const double rho = std::sqrt(1.0 - zc * zc);
    const double phi = golden * k;
    umax = std::max(umax, density({t, centre.x() + r * rho * std::cos(phi),
                                   centre.y() + r * rho * std::sin(phi), centre.z() + r * zc}));
  }
  return umax;
}

}  // namespace

ResidualReport maxwell_residuals(const EBField& field, const std::vector<Event>& events, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("maxwell_residuals: step must be positive");
  ResidualReport rep;
  rep.step = step;
  for (const auto& e : events) {
    EBSample plus[4], minus[4];
    for (int a = 0; a < 4; ++a) {
      plus[a] = field(shifted(e, a, step));
      minus[a] = field(shifted(e, a, -step));
    }
    auto dE = [&](int a) -> Vec3 { return (plus[a].E - minus[a].E) / (2.0 * step); };
    auto dB = [&](int a) -> Vec3 { return (plus[a].B - minus[a].B) / (2.0 * step); };
    const Vec3 dEx = dE(kX), dEy = dE(kY), dEz = dE(kZ);
    const Vec3 dBx = dB(kX), dBy = dB(kY), dBz = dB(kZ);
    const double div_e = dEx.x() + dEy.y() + dEz.z();
    const double div_b = dBx.x() + dBy.y() + dBz.z();
    const Vec3 curl_e(dEy.z() - dEz.y(), dEz.x() - dEx.z(), dEx.y() - dEy.x());
    const Vec3 curl_b(dBy.z() - dBz.y(), dBz.x() - dBx.z(), dBx.y() - dBy.x());
    const EBSample c = field(e);
    const double scale = std::max(std::sqrt(c.E.squaredNorm() + c.B.squaredNorm()), 1e-300);
    rep.div_e = std::max(rep.div_e, std::abs(div_e) / scale);
    rep.div_b = std::max(rep.div_b, std::abs(div_b) / scale);
    rep.faraday = std::max(rep.faraday, (dB(kT) + curl_e).norm() / scale);
    rep.ampere = std::max(rep.ampere, (dE(kT) - curl_b).norm() / scale);
  }
  return rep;
}

ResidualReport maxwell_residuals(const KnottedFieldSpec& spec, const std::vector<Event>& events,
                                 double step) {
  return maxwell_residuals(
      [&](const Event& e) {
        const auto s = knotted_field(spec, e);
        return EBSample{s.E, s.B};
      },
      events, step);
}

ResidualReport hopf_maxwell_residuals(const std::vector<Event>& events, double step) {
  return maxwell_residuals(
      [](const Event& e) {
        const auto s = hopf_field(e);
        return EBSample{s.E, s.B};
      },
      events, step);
}

double fit_decay_exponent(const DensityFn& density, double t, double r_min, double r_max) {
  constexpr int kShells = 6;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int s = 0; s < kShells; ++s) {
    const double r = r_min * std::pow(r_max / r_min, double(s) / (kShells - 1));
    const double lx = std::log(r);
    const double ly = std::log(std::max(shell_max(density, t, Vec3::Zero(), r), 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return -(kShells * sxy - sx * sy) / (kShells * sxx - sx * sx);
}

QuadratureResult integrate_density(const DensityFn& density, const GridSpec& grid, double t,
                                   double expected_decay) {
  grid.validate();
  const int nx = grid.resolution[0], ny = grid.resolution[1], nz = grid.resolution[2];
  const Vec3 h = (grid.bounds.hi - grid.bounds.lo).cwiseQuotient(Vec3(nx, ny, nz));
  const double cell = h.x() * h.y() * h.z();
  std::vector<double> slab(nx, 0.0), slab_min(nx, std::numeric_limits<double>::infinity());
  parallel_for(std::size_t(nx), [&](std::size_t ii) {
    const double x = grid.bounds.lo.x() + (double(ii) + 0.5) * h.x();
    std::vector<double> row(ny, 0.0);
    for (int j = 0; j < ny; ++j) {
      const double y = grid.bounds.lo.y() + (j + 0.5) * h.y();
      double acc = 0.0;
      for (int k = 0; k < nz; ++k) {
        const double z = grid.bounds.lo.z() + (k + 0.5) * h.z();
        const double u = density({t, x, y, z});
        slab_min[ii] = std::min(slab_min[ii], u);
        acc += u;
      }
      row[j] = acc;
    }
    slab[ii] = tree_sum(std::move(row));
  });

  QuadratureResult q;
  q.value = tree_sum(slab) * cell;
  q.resolution = nx;
  q.min_density = *std::min_element(slab_min.begin(), slab_min.end());
  const Vec3 half = 0.5 * (grid.bounds.hi - grid.bounds.lo);
  const Vec3 centre = 0.5 * (grid.bounds.hi + grid.bounds.lo);
  q.box_radius = half.minCoeff() - centre.cwiseAbs().maxCoeff();
  if (q.box_radius <= 0.0) return q;

  const double R = q.box_radius;
  q.decay_exponent = fit_decay_exponent(density, t, 0.5 * R, R);
  q.tail_trusted = std::abs(q.decay_exponent - expected_decay) <= 0.5;
  const double k = q.decay_exponent;
  if (k > 3.0) {
    // u <= C r^-k outside the inscribed ball, C pinned by the outermost shell.
    q.tail_estimate = 4.0 * std::numbers::pi * shell_max(density, t, centre, R) * R * R * R / (k - 3.0);
  } else {
    q.tail_estimate = std::numeric_limits<double>::infinity();
    q.tail_trusted = false;
  }
  return q;
}

QuadratureResult total_energy(const KnottedFieldSpec& spec, const GridSpec& grid, double t) {
  return integrate_density([&](const Event& e) { return energy_density(spec, e); }, grid, t);
}

QuadratureResult hopf_total_energy(const GridSpec& grid, double t) {
  return integrate_density([](const Event& e) { return hopf_field(e).energy_density; }, grid, t);
}

Helicity helicity(const KnottedFieldSpec& spec, const GridSpec& grid, double t) {
  grid.validate();
  const int nx = grid.resolution[0], ny = grid.resolution[1], nz = grid.resolution[2];
  const Vec3 h = (grid.bounds.hi - grid.bounds.lo).cwiseQuotient(Vec3(nx, ny, nz));
  const double cell = h.x() * h.y() * h.z();
  std::vector<double> mag(nx, 0.0), ele(nx, 0.0);
  parallel_for(std::size_t(nx), [&](std::size_t ii) {
    const double x = grid.bounds.lo.x() + (double(ii) + 0.5) * h.x();
    std::vector<double> rm(ny, 0.0), re(ny, 0.0);
    for (int j = 0; j < ny; ++j) {
      const double y = grid.bounds.lo.y() + (j + 0.5) * h.y();
      for (int k = 0; k < nz; ++k) {
        const double z = grid.bounds.lo.z() + (k + 0.5) * h.z();
        const auto d = helicity_densities(spec, {t, x, y, z});
        rm[j] += d.magnetic;
        re[j] += d.electric;
      }
    }
    mag[ii] = tree_sum(std::move(rm));
    ele[ii] = tree_sum(std::move(re));
  });
  return {tree_sum(mag) * cell, tree_sum(ele) * cell};
}

EpsilonScan epsilon_scan(const BivariatePolynomial& h, const std::vector<double>& epsilons,
                         const GridSpec& grid, double t, const TraceParams& params) {
  if (epsilons.empty()) throw std::invalid_argument("epsilon_scan: empty epsilon list");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1]))
      throw std::invalid_argument("epsilon_scan: epsilons must be strictly descending");
  EpsilonScan scan;
  for (double eps : epsilons) {
    const KnottedFieldSpec spec(h, eps);
    const VortexSet vs = extract_vortices(spec, grid, t, params);
    ScanRow row;
    row.epsilon = eps;
    row.report = topology_report(spec, vs);
    row.open_curves = row.report.open_curves.size();
    row.diagnostics = vs.diagnostics;
    scan.rows.push_back(std::move(row));
  }
  const std::size_t n = scan.rows.size();
  if (n >= 2) {
    const auto last = signature(scan.rows.back().report);
    std::size_t first = n - 1;
    while (first > 0 && signature(scan.rows[first - 1].report) == last) --first;
    if (first < n - 1) scan.stable_from = first;
  }
  return scan;
}

}  // namespace knotfield

namespace knotfield {

namespace {

CheckResult below(std::string name, double measured, double threshold, std::string detail = {}) {
  return {std::move(name), measured, threshold, measured < threshold, std::move(detail)};
}

double jet_fd_mismatch(const std::function<Jet(const Event&)>& f, const Event& e, double step) {
  const Jet j = f(e);
  double err2 = 0.0, ref2 = 0.0;
  for (int a = 0; a < 4; ++a) {
    const cplx fd = (f(shifted(e, a, step)).value - f(shifted(e, a, -step)).value) / (2.0 * step);
    err2 += std::norm(fd - j.d[a]);
    ref2 += std::norm(j.d[a]);
  }
  return std::sqrt(err2 / std::max(ref2, 1e-300));
}

}  // namespace

std::vector<CheckResult> verification_suite(const KnottedFieldSpec& spec,
                                            const VerificationOptions& options) {
  std::vector<CheckResult> out;
  const auto wide = random_events(options.identity_events, options.seed, -5.0, 5.0);
  const auto near = random_events(options.fd_events, options.seed + 1, -3.0, 3.0);
  const auto maxwell_events = random_events(options.maxwell_events, options.seed + 2, -3.0, 3.0);

  const cplx c00 = spec.h().coefficient(0, 0);
  out.push_back({"link polynomial has vanishing constant term", std::abs(c00), 0.0,
                 !spec.h().has_constant_term(),
                 spec.h().has_constant_term() ? "constant term present" : ""});

  double sphere = 0.0, hopf_null = 0.0, field_null = 0.0, energy = 0.0, poynting = 0.0,
         bateman = 0.0, wrong_sign = std::numeric_limits<double>::infinity(), tilde = 0.0;
  for (const auto& e : wide) {
    cplx a, b;
    bateman_values(e, a, b);
    sphere = std::max(sphere, std::abs(std::norm(a) + std::norm(b) - 1.0));
    const auto hs = hopf_field(e);
    hopf_null = std::max(hopf_null, std::abs(bilinear_dot(hs.F, hs.F)) / hs.F.squaredNorm());
    const auto fs = knotted_field(spec, e);
    field_null = std::max(field_null, std::abs(bilinear_dot(fs.F, fs.F)) /
                                          std::max(fs.F.squaredNorm(), kResidualFloor));
    energy = std::max(energy, energy_ratio(spec, e));
    poynting = std::max(poynting, poynting_alignment(spec, e));
    bateman = std::max(bateman, bateman_condition_residual(e));
    wrong_sign = std::min(wrong_sign, bateman_condition_residual(e, -bateman_sign()));
    tilde = std::max(tilde, tilde_conversion_check(e));
  }
  out.push_back(below("sphere identity |alpha|^2+|beta|^2 = 1", sphere, 1e-12));
  out.push_back(below("Hopf field nullness |F.F|/|F.conj(F)|", hopf_null, 1e-10));
  out.push_back(below("knotted field nullness |F.F|/|F.conj(F)|", field_null, 1e-10));
  out.push_back(below("Bateman condition residual", bateman, 1e-8,
                      "sign = " + std::string(bateman_sign() > 0 ? "+1" : "-1")));
  out.push_back({"Bateman condition wrong-sign control", wrong_sign, 0.1, wrong_sign > 0.1,
                 "smallest residual with the opposite sign"});
  const auto tc = tilde_conversion();
  out.push_back(below("tilde conversion residual", tilde, 1e-10,
                      "alpha = 1 " + std::string(tc.alpha_sign > 0 ? "+" : "-") +
                          " i alpha~, beta = " + (tc.beta_sign > 0 ? "" : "-") + "i beta~"));
  out.push_back(below("energy factorization u_L = |psi|^2 u_H", energy, 1e-12));
  out.push_back(below("Poynting factorization S_L = |psi|^2 S_H", poynting, 1e-10));

  double jet_fd = 0.0, psi_fd = 0.0, rank = std::numeric_limits<double>::infinity(), wave = 0.0,
         lorenz = 0.0, curl_v = 0.0;
  const double h1 = 1e-5, h2 = 1e-3;
  for (const auto& e : near) {
    jet_fd = std::max({jet_fd, jet_fd_mismatch([](const Event& p) { return eval_bateman(p).alpha; }, e, h1),
                       jet_fd_mismatch([](const Event& p) { return eval_bateman(p).beta; }, e, h1)});
    psi_fd = std::max(psi_fd, jet_fd_mismatch([&](const Event& p) { return psi_jet(spec, p); }, e, h1));
    const Vec3 sv = spatial_jacobian_singular_values(e);
    rank = std::min(rank, sv[2] / sv[0]);
    wave = std::max(wave, wave_residual(e, h2));
    lorenz = std::max(lorenz, lorenz_residual(e, h2));
    // curl V by central differences against F_L.
    auto V = [&](double dx, double dy, double dz) {
      return vector_potential(spec, {e.t, e.x + dx, e.y + dy, e.z + dz}).V;
    };
    const CVec3 dVx = (V(h2, 0, 0) - V(-h2, 0, 0)) / (2 * h2);
    const CVec3 dVy = (V(0, h2, 0) - V(0, -h2, 0)) / (2 * h2);
    const CVec3 dVz = (V(0, 0, h2) - V(0, 0, -h2)) / (2 * h2);
    const CVec3 curl(dVy[2] - dVz[1], dVz[0] - dVx[2], dVx[1] - dVy[0]);
    const CVec3 F = knotted_field(spec, e).F;
    curl_v = std::max(curl_v, (curl - F).norm() / std::max(F.norm(), kResidualFloor));
  }
  out.push_back(below("alpha, beta jet partials vs finite differences", jet_fd, 1e-6));
  out.push_back(below("psi jet partials vs finite differences", psi_fd, 1e-6));
  out.push_back({"spatial Jacobian rank 3 (min sigma3/sigma1)", rank, 1e-8, rank > 1e-8, ""});
  out.push_back(below("wave equation residual of W", wave, 1e-5));
  out.push_back(below("Lorenz gauge residual of A", lorenz, 1e-4));
  out.push_back(below("curl V = F_L", curl_v, 1e-4));

  try {
    const auto pf = potential_field_factor(near, h2);
    out.push_back(below("curl A proportional to F_H", pf.max_deviation, 1e-3,
                        "lambda = " + std::to_string(pf.lambda.real()) + " + " +
                            std::to_string(pf.lambda.imag()) + "i"));
  } catch (const InconsistencyError& err) {
    out.push_back({"curl A proportional to F_H", 1.0, 1e-3, false, err.what()});
  }

  const auto rep = maxwell_residuals(spec, maxwell_events, h2);
  const auto rep_half = maxwell_residuals(spec, maxwell_events, 0.5 * h2);
  out.push_back(below("Maxwell residuals (max of div E, div B, Faraday, Ampere)", rep.max(), 1e-4));
  const double ratio = rep.max() / std::max(rep_half.max(), 1e-300);
  out.push_back({"Maxwell residuals second-order convergence (step halving ratio)", ratio, 4.0,
                 ratio > 3.0 && ratio < 5.0, "expected ratio in (3, 5)"});
  return out;
}

}  // namespace knotfield
