#include "knotfield/vortex.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_map>

#include <Eigen/LU>

#include "knotfield/parallel.hpp"

namespace knotfield {

void GridSpec::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (!(bounds.lo[a] < bounds.hi[a]))
      throw std::invalid_argument("grid bounds must satisfy min < max on every axis");
    if (resolution[a] < 8) throw std::invalid_argument("grid resolution must be at least 8");
  }
}

void TraceParams::validate() const {
  if (!(step > 0.0) || !(tol_seed > 0.0) || !(tol_curve > 0.0) || !(dedupe_factor > 0.0))
    throw std::invalid_argument("trace step and tolerances must be positive");
  if (tol_seed > tol_curve) throw std::invalid_argument("tol_seed must not exceed tol_curve");
}

namespace {

Event at(const Vec3& p, double t) { return {t, p.x(), p.y(), p.z()}; }

struct PsiLocal {
  cplx value;
  Vec3 grad_re;
  Vec3 grad_im;
};

PsiLocal psi_local(const KnottedFieldSpec& spec, const Vec3& p, double t) {
  const Jet j = psi_jet(spec, at(p, t));
  const CVec3 g = j.grad();
  return {j.value, g.real(), g.imag()};
}

std::string fmt_point(const Vec3& p) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g)", p.x(), p.y(), p.z());
  return buf;
}

}  // namespace

std::vector<Vec3> scan_cells(const KnottedFieldSpec& spec, const GridSpec& grid, double t) {
  grid.validate();
  const int nx = grid.resolution[0], ny = grid.resolution[1], nz = grid.resolution[2];
  const Vec3 lo = grid.bounds.lo;
  const Vec3 h = (grid.bounds.hi - grid.bounds.lo).cwiseQuotient(
      Vec3(nx - 1, ny - 1, nz - 1));
  auto node = [&](int i, int j, int k) { return Vec3(lo.x() + i * h.x(), lo.y() + j * h.y(), lo.z() + k * h.z()); };

  std::vector<cplx> psi(std::size_t(nx) * ny * nz);
  auto idx = [&](int i, int j, int k) { return (std::size_t(i) * ny + j) * nz + k; };
  parallel_for(std::size_t(nx), [&](std::size_t i) {
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) psi[idx(int(i), j, k)] = psi_value(spec, at(node(int(i), j, k), t));
  });

  // Per-slab candidate lists, merged in slab order.
  std::vector<std::vector<Vec3>> slabs(std::size_t(nx - 1));
  parallel_for(std::size_t(nx - 1), [&](std::size_t ii) {
    const int i = int(ii);
    for (int j = 0; j + 1 < ny; ++j)
      for (int k = 0; k + 1 < nz; ++k) {
        bool re_pos = false, re_neg = false, im_pos = false, im_neg = false;
        for (int c = 0; c < 8; ++c) {
          const cplx v = psi[idx(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))];
          re_pos |= v.real() > 0.0;
          re_neg |= v.real() <= 0.0;
          im_pos |= v.imag() > 0.0;
          im_neg |= v.imag() <= 0.0;
        }
        if (re_pos && re_neg && im_pos && im_neg)
          slabs[ii].push_back(node(i, j, k) + 0.5 * h);
      }
  });
  std::vector<Vec3> out;
  for (auto& s : slabs) out.insert(out.end(), s.begin(), s.end());
  return out;
}

RefineResult refine_seed(const KnottedFieldSpec& spec, const Vec3& point, double t,
                         const TraceParams& params) {
  RefineResult r;
  r.point = point;
  for (int it = 0;; ++it) {
    const PsiLocal p = psi_local(spec, r.point, t);
    r.residual = std::abs(p.value);
    r.iterations = it;
    if (!std::isfinite(r.residual)) return r;
    if (r.residual < params.tol_seed) {
      r.converged = true;
      return r;
    }
    if (it >= params.max_refine_iterations) return r;
    Eigen::Matrix<double, 2, 3> jac;
    jac.row(0) = p.grad_re.transpose();
    jac.row(1) = p.grad_im.transpose();
    const Eigen::Matrix2d jjt = jac * jac.transpose();
    if (!(std::abs(jjt.determinant()) > 0.0)) return r;
    const Eigen::Vector2d res(p.value.real(), p.value.imag());
    r.point -= jac.transpose() * jjt.inverse() * res;
  }
}

Vec3 vortex_tangent(const KnottedFieldSpec& spec, const Vec3& point, double t) {
  const PsiLocal p = psi_local(spec, point, t);
  const Vec3 tau = p.grad_re.cross(p.grad_im);
  const double n = tau.norm();
  if (!(n >= 1e-12 * p.grad_re.norm() * p.grad_im.norm()) || n == 0.0)
    throw TraceError("degenerate vortex tangent at " + fmt_point(point) +
                     ": grad(Re psi) and grad(Im psi) are parallel");
  return tau / n;
}

namespace {

struct Correction {
  Vec3 point;
  int iterations = 0;
  bool converged = false;
};

// Newton on (Re psi, Im psi, tau . (x - anchor)) = 0.
Correction correct(const KnottedFieldSpec& spec, const Vec3& anchor, const Vec3& tau, double t,
                   const TraceParams& params) {
  Correction c;
  c.point = anchor;
  for (int it = 0; it <= params.max_corrector_iterations; ++it) {
    const PsiLocal p = psi_local(spec, c.point, t);
    const double plane = tau.dot(c.point - anchor);
    c.iterations = it;
    if (!std::isfinite(std::abs(p.value))) return c;
    if (std::abs(p.value) < params.tol_seed && std::abs(plane) < 1e-12) {
      c.converged = true;
      return c;
    }
    Eigen::Matrix3d jac;
    jac.row(0) = p.grad_re.transpose();
    jac.row(1) = p.grad_im.transpose();
    jac.row(2) = tau.transpose();
    const Eigen::Vector3d res(p.value.real(), p.value.imag(), plane);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(jac);
    if (!lu.isInvertible()) return c;
    c.point -= lu.solve(res);
  }
  return c;
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b, double& s) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  s = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + s * ab - p).norm();
}

enum class Stop { kClosed, kExited, kTruncated };

struct HalfTrace {
  std::vector<Vec3> vertices;  // begins with the seed
  Stop stop = Stop::kTruncated;
};

HalfTrace trace_direction(const KnottedFieldSpec& spec, const Vec3& seed, double t, const Box& box,
                          const TraceParams& params, double direction) {
  HalfTrace out;
  out.vertices.push_back(seed);
  const Vec3 tau0 = direction * vortex_tangent(spec, seed, t);
  const double min_step = params.step * params.min_step_factor;
  Vec3 x = seed;
  Vec3 tau = tau0;
  double h = params.step;
  double arc = 0.0;

  while (out.vertices.size() < params.max_vertices) {
    const Correction c = correct(spec, x + h * tau, tau, t, params);
    bool accept = c.converged && c.iterations <= params.slow_corrector_iterations;
    Vec3 tau_next;
    if (accept) {
      tau_next = direction * vortex_tangent(spec, c.point, t);
      const double chord = (c.point - x).norm();
      accept = tau_next.dot(tau) > params.max_turn_cos && chord <= 2.0 * params.step &&
               (c.point - x).dot(tau) > 0.0;
    }
    if (!accept) {
      h *= 0.5;
      if (h < min_step)
        throw TraceError("trace step underflow near " + fmt_point(x) +
                         " (corrector failed to converge)");
      continue;
    }
    const Vec3 xn = c.point;
    if (!box.contains(xn)) {
      out.stop = Stop::kExited;
      return out;
    }
    const double seg = (xn - x).norm();
    if (arc + seg > 3.0 * params.step && tau_next.dot(tau0) > 0.5) {
      double s = 0.0;
      if (point_segment_distance(seed, x, xn, s) < params.step) {
        // Skip xn when the segment overshoots the seed.
        if (s >= 1.0 && (xn - seed).norm() > 1e-3 * params.step) out.vertices.push_back(xn);
        out.stop = Stop::kClosed;
        return out;
      }
    }
    out.vertices.push_back(xn);
    arc += seg;
    x = xn;
    tau = tau_next;
    if (c.iterations <= 2) h = std::min(params.step, 2.0 * h);
  }
  out.stop = Stop::kTruncated;
  return out;
}

double polyline_length(const std::vector<Vec3>& v, bool closed) {
  double len = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) len += (v[i] - v[i - 1]).norm();
  if (closed && v.size() > 1) len += (v.front() - v.back()).norm();
  return len;
}

}  // namespace

VortexCurve trace_curve(const KnottedFieldSpec& spec, const Vec3& seed, double t, const Box& box,
                        const TraceParams& params) {
  params.validate();
  VortexCurve curve;
  HalfTrace fwd = trace_direction(spec, seed, t, box, params, +1.0);
  if (fwd.stop == Stop::kClosed) {
    curve.vertices = std::move(fwd.vertices);
    curve.closed = true;
  } else {
    HalfTrace bwd = trace_direction(spec, seed, t, box, params, -1.0);
    curve.vertices.assign(bwd.vertices.rbegin(), bwd.vertices.rend());
    curve.vertices.insert(curve.vertices.end(), fwd.vertices.begin() + 1, fwd.vertices.end());
    curve.closed = false;
    if (fwd.stop == Stop::kTruncated || bwd.stop == Stop::kTruncated)
      throw TraceError("trace exceeded the vertex budget from seed " + fmt_point(seed));
  }
  curve.arc_length = polyline_length(curve.vertices, curve.closed);
  return curve;
}

namespace {

// Uniform hash of curve vertices for dedupe queries.
class VertexIndex {
 public:
  explicit VertexIndex(double cell) : cell_(cell) {}

  void insert(const std::vector<Vec3>& pts) {
    for (const auto& p : pts) buckets_[key(cell_of(p))].push_back(p);
  }

  double nearest(const Vec3& p, double radius) const {
    const Eigen::Vector3i c = cell_of(p);
    const int reach = int(std::ceil(radius / cell_));
    double best = std::numeric_limits<double>::infinity();
    for (int dx = -reach; dx <= reach; ++dx)
      for (int dy = -reach; dy <= reach; ++dy)
        for (int dz = -reach; dz <= reach; ++dz) {
          auto it = buckets_.find(key(c + Eigen::Vector3i(dx, dy, dz)));
          if (it == buckets_.end()) continue;
          for (const auto& q : it->second) best = std::min(best, (q - p).norm());
        }
    return best;
  }

 private:
  Eigen::Vector3i cell_of(const Vec3& p) const {
    return {int(std::floor(p.x() / cell_)), int(std::floor(p.y() / cell_)),
            int(std::floor(p.z() / cell_))};
  }
  static long long key(const Eigen::Vector3i& c) {
    return (static_cast<long long>(c.x() & 0x1FFFFF) << 42) |
           (static_cast<long long>(c.y() & 0x1FFFFF) << 21) | static_cast<long long>(c.z() & 0x1FFFFF);
  }

  double cell_;
  std::unordered_map<long long, std::vector<Vec3>> buckets_;
};

}  // namespace

VortexSet extract_vortices(const KnottedFieldSpec& spec, const GridSpec& grid, double t,
                           const TraceParams& params) {
  params.validate();
  VortexSet vs;
  vs.time = t;
  vs.epsilon = spec.epsilon();
  const auto candidates = scan_cells(spec, grid, t);
  const double radius = params.dedupe_radius();
  VertexIndex index(radius);

  for (std::size_t n = 0; n < candidates.size(); ++n) {
    const Vec3& cand = candidates[n];
    const RefineResult seed = refine_seed(spec, cand, t, params);
    if (!seed.converged) {
      vs.diagnostics.push_back("seed " + std::to_string(n) + " at " + fmt_point(cand) +
                               " did not converge (|psi| = " + std::to_string(seed.residual) + ")");
      continue;
    }
    if (!grid.bounds.contains(seed.point)) continue;
    if (index.nearest(seed.point, radius) < radius) continue;
    try {
      VortexCurve curve = trace_curve(spec, seed.point, t, grid.bounds, params);
      index.insert(curve.vertices);
      vs.curves.push_back(std::move(curve));
    } catch (const TraceError& err) {
      vs.diagnostics.push_back("seed " + std::to_string(n) + ": " + err.what());
      // Keep later seeds on the same curve from retrying.
      index.insert({seed.point});
    }
  }
  return vs;
}

std::vector<Vec3> plane_crossings(const KnottedFieldSpec& spec, const VortexSet& vs, int axis,
                                  double offset) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("plane axis must be 0, 1 or 2");
  const int a = (axis + 1) % 3, b = (axis + 2) % 3;
  std::vector<Vec3> out;
  for (const auto& c : vs.curves) {
    const std::size_t n = c.vertices.size();
    const std::size_t segs = c.closed ? n : (n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < segs; ++i) {
      const Vec3& p = c.vertices[i];
      const Vec3& q = c.vertices[(i + 1) % n];
      const double dp = p[axis] - offset, dq = q[axis] - offset;
      if (!((dp < 0.0 && dq >= 0.0) || (dp >= 0.0 && dq < 0.0))) continue;
      Vec3 x = p + (dp / (dp - dq)) * (q - p);
      x[axis] = offset;
      for (int it = 0; it < 30; ++it) {
        const PsiLocal pl = psi_local(spec, x, vs.time);
        if (std::abs(pl.value) < 1e-14) break;
        Eigen::Matrix2d jac;
        jac << pl.grad_re[a], pl.grad_re[b], pl.grad_im[a], pl.grad_im[b];
        if (!(std::abs(jac.determinant()) > 0.0)) break;
        const Eigen::Vector2d d = jac.inverse() * Eigen::Vector2d(pl.value.real(), pl.value.imag());
        x[a] -= d[0];
        x[b] -= d[1];
      }
      out.push_back(x);
    }
  }
  return out;
}

double distance_to_curves(const VortexSet& vs, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : vs.curves)
    for (const auto& v : c.vertices) best = std::min(best, (v - p).norm());
  return best;
}

}  // namespace knotfield
