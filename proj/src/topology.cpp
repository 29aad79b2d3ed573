#include "knotfield/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace knotfield {

namespace {

double clamped_asin(double x) { return std::asin(std::clamp(x, -1.0, 1.0)); }

// Signed solid angle of segment p1->p2 seen against p3->p4, divided by 4 pi.
double segment_pair_linking(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4) {
  const Vec3 r13 = p3 - p1, r14 = p4 - p1, r23 = p3 - p2, r24 = p4 - p2;
  const Vec3 r12 = p2 - p1, r34 = p4 - p3;
  Vec3 n[4] = {r13.cross(r14), r14.cross(r24), r24.cross(r23), r23.cross(r13)};
  for (auto& v : n) {
    const double len = v.norm();
    if (len == 0.0) return 0.0;  // coplanar configuration
    v /= len;
  }
  const double omega = clamped_asin(n[0].dot(n[1])) + clamped_asin(n[1].dot(n[2])) +
                       clamped_asin(n[2].dot(n[3])) + clamped_asin(n[3].dot(n[0]));
  const double orient = r34.cross(r12).dot(r13);
  if (orient == 0.0) return 0.0;
  return std::copysign(omega, orient) / (4.0 * std::numbers::pi);
}

}  // namespace

LinkingResult linking_number_checked(const VortexCurve& a, const VortexCurve& b) {
  if (!a.closed || !b.closed) throw std::invalid_argument("linking number requires closed curves");
  if (a.vertices.size() < 3 || b.vertices.size() < 3)
    throw std::invalid_argument("linking number requires at least three vertices per curve");
  LinkingResult out;
  out.min_distance = std::numeric_limits<double>::infinity();
  const std::size_t na = a.vertices.size(), nb = b.vertices.size();
  // Row sums first, then a fixed-order total, for reproducible rounding.
  std::vector<double> rows(na, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    const Vec3& p1 = a.vertices[i];
    const Vec3& p2 = a.vertices[(i + 1) % na];
    double row = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const Vec3& p3 = b.vertices[j];
      const Vec3& p4 = b.vertices[(j + 1) % nb];
      row += segment_pair_linking(p1, p2, p3, p4);
      out.min_distance = std::min(out.min_distance, (p1 - p3).norm());
    }
    rows[i] = row;
  }
  for (double r : rows) out.value += r;
  out.ill_conditioned = out.min_distance < 1e-6;
  return out;
}

double linking_number(const VortexCurve& a, const VortexCurve& b) {
  return linking_number_checked(a, b).value;
}

Windings phase_windings(const KnottedFieldSpec& spec, const VortexCurve& curve, double t) {
  if (!curve.closed) throw std::invalid_argument("phase windings require a closed curve");
  const std::size_t n = curve.vertices.size();
  if (n < 3) throw std::invalid_argument("phase windings require at least three vertices");
  std::vector<cplx> alpha(n), beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = curve.vertices[i];
    bateman_values({t, p.x(), p.y(), p.z()}, alpha[i], beta[i]);
    alpha[i] *= spec.epsilon();
    beta[i] *= spec.epsilon();
    if (std::abs(alpha[i]) <= 1e-9 || std::abs(beta[i]) <= 1e-9)
      throw std::invalid_argument("phase undefined: alpha or beta vanishes on the curve");
  }
  double turn_a = 0.0, turn_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + 1) % n;
    const double da = std::arg(alpha[k] / alpha[i]);
    const double db = std::arg(beta[k] / beta[i]);
    if (std::abs(da) > std::numbers::pi / 2 || std::abs(db) > std::numbers::pi / 2)
      throw CurveTooCoarse("phase jump too large between consecutive vertices; re-trace with a smaller step");
    turn_a += da;
    turn_b += db;
  }
  Windings w;
  w.raw_alpha = turn_a / (2.0 * std::numbers::pi);
  w.raw_beta = turn_b / (2.0 * std::numbers::pi);
  w.alpha = std::lround(w.raw_alpha);
  w.beta = std::lround(w.raw_beta);
  return w;
}

TopologyReport topology_report(const KnottedFieldSpec& spec, const VortexSet& vs) {
  TopologyReport r;
  r.time = vs.time;
  r.epsilon = vs.epsilon;
  for (std::size_t i = 0; i < vs.curves.size(); ++i)
    (vs.curves[i].closed ? r.closed_curves : r.open_curves).push_back(i);
  r.component_count = int(r.closed_curves.size());
  if (!r.open_curves.empty())
    r.warnings.push_back(std::to_string(r.open_curves.size()) +
                         " open curve(s) leave the box and are excluded from the invariants");

  const std::size_t n = r.closed_curves.size();
  r.linking.assign(n, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
  r.linking_rounded.assign(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto lk = linking_number_checked(vs.curves[r.closed_curves[i]], vs.curves[r.closed_curves[j]]);
      if (lk.ill_conditioned)
        r.warnings.push_back("curves " + std::to_string(i) + " and " + std::to_string(j) +
                             " nearly intersect; linking number ill-conditioned");
      r.linking[i][j] = r.linking[j][i] = lk.value;
      r.linking_rounded[i][j] = r.linking_rounded[j][i] = std::lround(lk.value);
      r.max_rounding_deviation =
          std::max(r.max_rounding_deviation, std::abs(lk.value - double(std::lround(lk.value))));
    }

  for (std::size_t i = 0; i < n; ++i) {
    try {
      const Windings w = phase_windings(spec, vs.curves[r.closed_curves[i]], vs.time);
      r.max_rounding_deviation =
          std::max({r.max_rounding_deviation, w.residual_alpha(), w.residual_beta()});
      r.windings.emplace_back(w);
    } catch (const std::exception& err) {
      r.windings.emplace_back(std::nullopt);
      r.warnings.push_back("windings of component " + std::to_string(i) + ": " + err.what());
    }
  }
  if (!r.integers_reliable())
    r.warnings.push_back("an invariant deviates from the nearest integer by more than 0.05");
  return r;
}

TopologySignature signature(const TopologyReport& r) {
  TopologySignature s;
  s.component_count = r.component_count;
  const std::size_t n = r.linking_rounded.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s.abs_linking.push_back(std::labs(r.linking_rounded[i][j]));
  std::sort(s.abs_linking.begin(), s.abs_linking.end());
  for (const auto& w : r.windings)
    s.abs_windings.emplace_back(w ? std::labs(w->alpha) : -1, w ? std::labs(w->beta) : -1);
  std::sort(s.abs_windings.begin(), s.abs_windings.end());
  return s;
}

std::string to_string(const TopologySignature& s) {
  std::string out = "components=" + std::to_string(s.component_count) + " |linking|=[";
  for (std::size_t i = 0; i < s.abs_linking.size(); ++i)
    out += (i ? "," : "") + std::to_string(s.abs_linking[i]);
  out += "] |windings|=[";
  for (std::size_t i = 0; i < s.abs_windings.size(); ++i)
    out += (i ? " " : "") + (s.abs_windings[i].first < 0
                                 ? std::string("n/a")
                                 : "(" + std::to_string(s.abs_windings[i].first) + "," +
                                       std::to_string(s.abs_windings[i].second) + ")");
  return out + "]";
}

}  // namespace knotfield
