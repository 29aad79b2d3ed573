#include "knotfield/bateman.hpp"

#include <cstdio>
#include <limits>

#include <Eigen/SVD>

namespace knotfield {

std::string to_string(const Event& e) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "(t=%.17g, x=%.17g, y=%.17g, z=%.17g)", e.t, e.x, e.y, e.z);
  return buf;
}

namespace {

constexpr cplx kI{0.0, 1.0};

Event shifted(const Event& e, int axis, double h) {
  Event s = e;
  switch (axis) {
    case kT: s.t += h; break;
    case kX: s.x += h; break;
    case kY: s.y += h; break;
    case kZ: s.z += h; break;
  }
  return s;
}

template <class F>
auto central_difference(const Event& e, int axis, double h, const F& f) {
  return (f(shifted(e, axis, h)) - f(shifted(e, axis, -h))) / (2.0 * h);
}

const Event kReferenceEvent{0.3, 0.7, -0.2, 0.5};

}  // namespace

Jet bateman_denominator(const Event& e) {
  const auto c = coordinate_jets(e);
  const Jet tmi = c.t - Jet(kI);
  return c.x * c.x + c.y * c.y + c.z * c.z - tmi * tmi;
}

BatemanJets eval_bateman(const Event& e) {
  const auto c = coordinate_jets(e);
  const Jet r2 = c.x * c.x + c.y * c.y + c.z * c.z;
  const Jet tmi = c.t - Jet(kI);
  const Jet den = r2 - tmi * tmi;
  try {
    Jet alpha = (r2 - c.t * c.t - Jet(1.0) + 2.0 * kI * c.z) / den;
    Jet beta = 2.0 * (c.x - kI * c.y) / den;
    return {alpha, beta};
  } catch (const JetDomainError&) {
    throw JetDomainError("Bateman denominator vanishes at " + to_string(e));
  }
}

void bateman_values(const Event& e, cplx& alpha, cplx& beta) {
  const double r2 = e.r2();
  const cplx den = r2 - (e.t - kI) * (e.t - kI);
  alpha = cplx(r2 - e.t * e.t - 1.0, 2.0 * e.z) / den;
  beta = 2.0 * cplx(e.x, -e.y) / den;
}

HopfSample hopf_field(const Event& e) {
  const auto bj = eval_bateman(e);
  HopfSample s;
  s.F = bilinear_cross(bj.alpha.grad(), bj.beta.grad());
  s.E = s.F.real();
  s.B = s.F.imag();
  s.energy_density = s.E.squaredNorm() + s.B.squaredNorm();
  return s;
}

double bateman_condition_residual(const Event& e, int sign) {
  const auto bj = eval_bateman(e);
  const CVec3 ga = bj.alpha.grad();
  const CVec3 gb = bj.beta.grad();
  const CVec3 lhs = bilinear_cross(ga, gb);
  const CVec3 rhs = kI * double(sign) * (bj.alpha.dt() * gb - bj.beta.dt() * ga);
  return (lhs - rhs).norm() / lhs.norm();
}

int bateman_sign() {
  static const int sign = [] {
    const double plus = bateman_condition_residual(kReferenceEvent, +1);
    const double minus = bateman_condition_residual(kReferenceEvent, -1);
    return plus <= minus ? +1 : -1;
  }();
  return sign;
}

double bateman_condition_residual(const Event& e) {
  return bateman_condition_residual(e, bateman_sign());
}

Jet superpotential(const Event& e) {
  try {
    return Jet(1.0) / bateman_denominator(e);
  } catch (const JetDomainError&) {
    throw JetDomainError("superpotential singular at " + to_string(e));
  }
}

double wave_residual(const Event& e, double step) {
  return wave_residual(e, step, [](const Event& p) { return superpotential(p).value; });
}

double wave_residual(const Event& e, double step, const ScalarField& w) {
  if (!(step > 0.0)) throw std::invalid_argument("wave_residual: step must be positive");
  const cplx w0 = w(e);
  auto second = [&](int axis) {
    return (w(shifted(e, axis, step)) - 2.0 * w0 + w(shifted(e, axis, -step))) / (step * step);
  };
  const cplx box = second(kT) - second(kX) - second(kY) - second(kZ);
  return std::abs(box) / std::abs(w0);
}

Covector hopf_potential(const Event& e) {
  const double r2 = e.r2();
  const cplx den = r2 - (e.t - kI) * (e.t - kI);
  const cplx den2 = den * den;
  const cplx ypix(e.y, e.x);  // y + ix
  Covector a;
  a.dz = -2.0 * ypix / den2;
  a.dt = 2.0 * ypix / den2;
  a.dx = (-2.0 * kI * e.t + 2.0 * kI * e.z - 2.0) / den2;
  a.dy = (-2.0 * e.t + 2.0 * e.z + 2.0 * kI) / den2;
  return a;
}

double lorenz_residual(const Event& e, double step) {
  return lorenz_residual(e, step, hopf_potential);
}

double lorenz_residual(const Event& e, double step, const PotentialField& a) {
  if (!(step > 0.0)) throw std::invalid_argument("lorenz_residual: step must be positive");
  const cplx div = central_difference(e, kT, step, [&](const Event& p) { return a(p).dt; }) -
                   central_difference(e, kX, step, [&](const Event& p) { return a(p).dx; }) -
                   central_difference(e, kY, step, [&](const Event& p) { return a(p).dy; }) -
                   central_difference(e, kZ, step, [&](const Event& p) { return a(p).dz; });
  const Covector a0 = a(e);
  const double scale = std::sqrt(std::norm(a0.dt) + std::norm(a0.dx) + std::norm(a0.dy) +
                                 std::norm(a0.dz));
  return std::abs(div) / std::max(scale, 1e-300);
}

namespace {

CVec3 potential_curl(const Event& e, double step, const PotentialField& a) {
  auto d = [&](int axis, cplx Covector::*comp) {
    return central_difference(e, axis, step, [&](const Event& p) { return a(p).*comp; });
  };
  return {d(kY, &Covector::dz) - d(kZ, &Covector::dy), d(kZ, &Covector::dx) - d(kX, &Covector::dz),
          d(kX, &Covector::dy) - d(kY, &Covector::dx)};
}

}  // namespace

CVec3 potential_electric_part(const Event& e, double step, const PotentialField& a) {
  auto d = [&](int axis, cplx Covector::*comp) {
    return central_difference(e, axis, step, [&](const Event& p) { return a(p).*comp; });
  };
  return {d(kT, &Covector::dx) - d(kX, &Covector::dt), d(kT, &Covector::dy) - d(kY, &Covector::dt),
          d(kT, &Covector::dz) - d(kZ, &Covector::dt)};
}

PotentialFactor potential_field_factor(const std::vector<Event>& events, double step) {
  return potential_field_factor(events, step, hopf_potential);
}

PotentialFactor potential_field_factor(const std::vector<Event>& events, double step,
                                       const PotentialField& a) {
  if (events.size() < 2)
    throw std::invalid_argument("potential_field_factor: need at least two events");
  if (!(step > 0.0)) throw std::invalid_argument("potential_field_factor: step must be positive");

  std::vector<CVec3> curls, hopf;
  curls.reserve(events.size());
  hopf.reserve(events.size());
  cplx num = 0.0;
  double den = 0.0;
  for (const auto& e : events) {
    curls.push_back(potential_curl(e, step, a));
    hopf.push_back(hopf_field(e).F);
    num += hopf.back().dot(curls.back());  // conj(F_H) . curl A
    den += hopf.back().squaredNorm();
  }
  PotentialFactor out;
  out.lambda = num / den;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const CVec3 fit = out.lambda * hopf[i];
    out.max_deviation = std::max(out.max_deviation, (curls[i] - fit).norm() / fit.norm());
  }
  if (out.max_deviation > 1e-3) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "curl(A) is not proportional to the Hopf field: max deviation %.3e", out.max_deviation);
    throw InconsistencyError(buf);
  }
  return out;
}

TildeVariables tilde_variables(const Event& e) {
  const double r2 = e.r2();
  const cplx den = r2 - (e.t - kI) * (e.t - kI);
  return {(2.0 * kI - 2.0 * e.t + 2.0 * e.z) / den, 2.0 * cplx(e.y, e.x) / den};
}

double tilde_conversion_residual(const Event& e, TildeConversion c) {
  cplx alpha, beta;
  bateman_values(e, alpha, beta);
  const auto tv = tilde_variables(e);
  return std::max(std::abs(alpha - (1.0 + double(c.alpha_sign) * kI * tv.alpha)),
                  std::abs(beta - double(c.beta_sign) * kI * tv.beta));
}

TildeConversion tilde_conversion() {
  static const TildeConversion frozen = [] {
    TildeConversion best;
    double best_res = std::numeric_limits<double>::infinity();
    for (int sa : {1, -1})
      for (int sb : {1, -1}) {
        const double res = tilde_conversion_residual(kReferenceEvent, {sa, sb});
        if (res < best_res) {
          best_res = res;
          best = {sa, sb};
        }
      }
    return best;
  }();
  return frozen;
}

double tilde_conversion_check(const Event& e) {
  return tilde_conversion_residual(e, tilde_conversion());
}

Vec3 spatial_jacobian_singular_values(const Event& e) {
  const auto bj = eval_bateman(e);
  Eigen::Matrix<double, 4, 3> jac;
  for (int k = 0; k < 3; ++k) {
    const cplx da = bj.alpha.d[kX + k];
    const cplx db = bj.beta.d[kX + k];
    jac(0, k) = da.real();
    jac(1, k) = da.imag();
    jac(2, k) = db.real();
    jac(3, k) = db.imag();
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(jac);
  return svd.singularValues();
}

}  // namespace knotfield
