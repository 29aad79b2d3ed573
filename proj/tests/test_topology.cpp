#include <doctest.h>

#include <algorithm>

#include "knotfield/topology.hpp"
#include "oracles.hpp"

using namespace knotfield;

namespace {

using oracle::cplx;

VortexCurve polygon(const std::function<Vec3(double)>& c, int n) {
  VortexCurve out;
  out.closed = true;
  for (int i = 0; i < n; ++i) out.vertices.push_back(c(2.0 * M_PI * i / n));
  return out;
}

Vec3 circle_xy(double s) { return {std::cos(s), std::sin(s), 0.0}; }
Vec3 circle_xz_shifted(double s) { return {1.0 + std::cos(s), 0.0, std::sin(s)}; }
Vec3 circle_far(double s) { return {5.0 + std::cos(s), 0.0, std::sin(s)}; }

VortexCurve reversed(VortexCurve c) {
  std::reverse(c.vertices.begin(), c.vertices.end());
  return c;
}

VortexCurve rotated(VortexCurve c, std::size_t k) {
  std::rotate(c.vertices.begin(), c.vertices.begin() + k, c.vertices.end());
  return c;
}

KnottedFieldSpec spec_of(const std::string& name, double eps = 1.0) { return {preset(name).polynomial, eps}; }

}  // namespace

TEST_CASE("round circles in Hopf position link once") {
  const double ref = oracle::gauss_linking(circle_xy, circle_xz_shifted, 2000);
  CHECK(std::abs(std::abs(ref) - 1.0) < 1e-4);

  const VortexCurve a = polygon(circle_xy, 400), b = polygon(circle_xz_shifted, 400);
  const double lk = linking_number(a, b);
  CHECK(std::abs(std::abs(lk) - 1.0) < 1e-6);
  CHECK(std::abs(lk - ref) < 1e-4);  // same sign as the smooth double integral
  CHECK(linking_number(b, a) == doctest::Approx(lk).epsilon(1e-12));
}

TEST_CASE("distant circles do not link") {
  const VortexCurve a = polygon(circle_xy, 300), b = polygon(circle_far, 300);
  CHECK(std::abs(linking_number(a, b)) < 1e-6);
  CHECK(std::abs(oracle::gauss_linking(circle_xy, circle_far, 400)) < 1e-6);
}

TEST_CASE("linking is invariant under rotation and flips under one reversal") {
  const VortexCurve a = polygon(circle_xy, 250), b = polygon(circle_xz_shifted, 170);
  const double lk = linking_number(a, b);
  for (std::size_t k : {1u, 17u, 99u}) {
    CHECK(linking_number(rotated(a, k), b) == doctest::Approx(lk).epsilon(1e-10));
    CHECK(linking_number(a, rotated(b, k)) == doctest::Approx(lk).epsilon(1e-10));
  }
  CHECK(linking_number(reversed(a), b) == doctest::Approx(-lk).epsilon(1e-10));
  CHECK(linking_number(a, reversed(b)) == doctest::Approx(-lk).epsilon(1e-10));
  CHECK(linking_number(reversed(a), reversed(b)) == doctest::Approx(lk).epsilon(1e-10));
}

TEST_CASE("linking preconditions") {
  VortexCurve a = polygon(circle_xy, 100), b = polygon(circle_xz_shifted, 100);
  VortexCurve open = b;
  open.closed = false;
  CHECK_THROWS_AS(linking_number(a, open), std::invalid_argument);
  VortexCurve tiny;
  tiny.closed = true;
  tiny.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0)};
  CHECK_THROWS_AS(linking_number(a, tiny), std::invalid_argument);

  // Second circle passes through a vertex of the first.
  VortexCurve touching = polygon([](double s) { return Vec3(2.0 + std::cos(s), 0.0, std::sin(s)); }, 100);
  const LinkingResult r = linking_number_checked(a, touching);
  CHECK(r.ill_conditioned);
  CHECK(r.min_distance < 1e-6);
  CHECK_FALSE(linking_number_checked(a, b).ill_conditioned);
}

TEST_CASE("phase winding oracles") {
  // Torus knot (p, q): v = e^{i p s}/sqrt2, w = e^{i q s}/sqrt2 winds p and q times.
  for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 3}, {3, 4}}) {
    std::vector<cplx> vs, ws;
    for (int i = 0; i < 1000; ++i) {
      const double s = 2.0 * M_PI * i / 1000;
      vs.push_back(std::polar(M_SQRT1_2, p * s));
      ws.push_back(std::polar(M_SQRT1_2, q * s));
    }
    CHECK(oracle::winding(vs) == doctest::Approx(p));
    CHECK(oracle::winding(ws) == doctest::Approx(q));
  }
  // Hopf link components v = +-i w on the unit sphere wind (1, 1).
  for (double sign : {1.0, -1.0}) {
    std::vector<cplx> vs, ws;
    for (int i = 0; i < 1000; ++i) {
      const cplx w = std::polar(M_SQRT1_2, 2.0 * M_PI * i / 1000);
      ws.push_back(w);
      vs.push_back(sign * cplx(0, 1) * w);
      CHECK(std::abs(eval_poly(preset("hopf-link").polynomial, vs.back(), w)) < 1e-15);
    }
    CHECK(oracle::winding(vs) == doctest::Approx(1.0));
    CHECK(oracle::winding(ws) == doctest::Approx(1.0));
  }
}

TEST_CASE("cable oracle: Puiseux parametrization winds (6, 9)") {
  // v = rho e^{6 i s}, w = v^{3/2} (1 + v^{2/3}) on the branch chosen continuously.
  const auto h = preset("cable-2-3-3-2").polynomial;
  for (double rho : {1e-2, 1e-3, 1e-4}) {
    std::vector<cplx> vs, ws;
    double worst = 0.0;
    for (int i = 0; i < 4000; ++i) {
      const double s = 2.0 * M_PI * i / 4000;
      const cplx v = std::polar(rho, 6.0 * s);
      const cplx w = std::polar(std::pow(rho, 1.5), 9.0 * s) * (1.0 + std::polar(std::pow(rho, 2.0 / 3.0), 4.0 * s));
      vs.push_back(v);
      ws.push_back(w);
      worst = std::max(worst, std::abs(h(v, w)) / std::pow(rho, 9.0));
    }
    // The parametrization is an exact root: only rounding remains relative to the leading terms.
    CHECK(worst < 1e-10);
    CHECK(oracle::winding(vs) == doctest::Approx(6.0));
    CHECK(oracle::winding(ws) == doctest::Approx(9.0));
  }
}

TEST_CASE("extracted windings match the parametrization oracles") {
  const GridSpec g = GridSpec::cube(3.0, 81);
  {
    const auto spec = spec_of("trefoil");
    const TopologyReport r = topology_report(spec, extract_vortices(spec, g, 0.0));
    REQUIRE(r.component_count == 1);
    REQUIRE(r.windings[0].has_value());
    CHECK(std::labs(r.windings[0]->alpha) == 2);
    CHECK(std::labs(r.windings[0]->beta) == 3);
    CHECK(r.windings[0]->alpha * r.windings[0]->beta > 0);
  }
  {
    const auto spec = spec_of("hopf-link");
    const TopologyReport r = topology_report(spec, extract_vortices(spec, g, 0.0));
    REQUIRE(r.component_count == 2);
    for (const auto& w : r.windings) {
      REQUIRE(w.has_value());
      CHECK(std::labs(w->alpha) == 1);
      CHECK(std::labs(w->beta) == 1);
    }
  }
  {
    const auto spec = spec_of("cable-2-3-3-2", 0.8);
    const TopologyReport r = topology_report(spec, extract_vortices(spec, g, 0.0));
    REQUIRE(r.component_count == 1);
    REQUIRE(r.windings[0].has_value());
    CHECK(std::labs(r.windings[0]->alpha) == 6);
    CHECK(std::labs(r.windings[0]->beta) == 9);
  }
}

TEST_CASE("torus presets with p, q <= 5 wind (p, q) up to one global sign") {
  for (int p = 1; p <= 5; ++p)
    for (int q = 1; q <= 5; ++q) {
      if (std::gcd(p, q) != 1) continue;
      CAPTURE(p);
      CAPTURE(q);
      const KnottedFieldSpec spec(torus_polynomial({p, q}), 1.0);
      const TopologyReport r = topology_report(spec, extract_vortices(spec, GridSpec::cube(3.0, 81), 0.0));
      REQUIRE(r.component_count == 1);
      REQUIRE(r.windings[0].has_value());
      const auto& w = *r.windings[0];
      const long s = w.alpha > 0 ? 1 : -1;
      CHECK(w.alpha == s * p);
      CHECK(w.beta == s * q);
      CHECK(w.residual_alpha() < kIntegerTolerance);
      CHECK(w.residual_beta() < kIntegerTolerance);
    }
}

TEST_CASE("windings: start vertex invariance and orientation reversal") {
  const auto spec = spec_of("trefoil");
  const VortexSet vs = extract_vortices(spec, GridSpec::cube(3.0, 81), 0.0);
  REQUIRE(vs.curves.size() == 1);
  const Windings w = phase_windings(spec, vs.curves[0], 0.0);
  for (std::size_t k : {1u, 100u, 333u}) {
    const Windings r = phase_windings(spec, rotated(vs.curves[0], k), 0.0);
    CHECK(r.alpha == w.alpha);
    CHECK(r.beta == w.beta);
  }
  const Windings rev = phase_windings(spec, reversed(vs.curves[0]), 0.0);
  CHECK(rev.alpha == -w.alpha);
  CHECK(rev.beta == -w.beta);
}

TEST_CASE("windings reject coarse or undefined curves") {
  const auto spec = spec_of("trefoil");
  const VortexSet vs = extract_vortices(spec, GridSpec::cube(3.0, 81), 0.0);
  REQUIRE(vs.curves.size() == 1);
  VortexCurve coarse;
  coarse.closed = true;
  for (std::size_t i = 0; i < vs.curves[0].vertices.size(); i += 40) coarse.vertices.push_back(vs.curves[0].vertices[i]);
  CHECK_THROWS_AS(phase_windings(spec, coarse, 0.0), CurveTooCoarse);

  // beta vanishes on the z axis.
  VortexCurve axis;
  axis.closed = true;
  axis.vertices = {Vec3(0, 0, 0), Vec3(0.1, 0, 0), Vec3(0.1, 0.1, 0), Vec3(0, 0.1, 0)};
  CHECK_THROWS_AS(phase_windings(spec, axis, 0.0), std::invalid_argument);

  VortexCurve open = vs.curves[0];
  open.closed = false;
  CHECK_THROWS_AS(phase_windings(spec, open, 0.0), std::invalid_argument);
}

TEST_CASE("Hopf link report at t = 0 and t = 3") {
  const auto spec = spec_of("hopf-link");
  const TopologyReport a = topology_report(spec, extract_vortices(spec, GridSpec::cube(3.0, 81), 0.0));
  CHECK(a.component_count == 2);
  REQUIRE(a.linking.size() == 2);
  CHECK(std::isnan(a.linking[0][0]));
  CHECK(std::isnan(a.linking[1][1]));
  CHECK(a.linking[0][1] == a.linking[1][0]);
  CHECK(std::abs(std::abs(a.linking[0][1]) - 1.0) < 0.01);
  CHECK(std::labs(a.linking_rounded[0][1]) == 1);
  CHECK(a.integers_reliable());
  CHECK(a.warnings.empty());

  const TopologyReport b = topology_report(spec, extract_vortices(spec, GridSpec::cube(8.0, 81), 3.0));
  CHECK(signature(a) == signature(b));
  CHECK(b.time == 3.0);
  CHECK(to_string(signature(a)) == "components=2 |linking|=[1] |windings|=[(1,1) (1,1)]");
}

TEST_CASE("open curves are listed and warned about") {
  const auto spec = spec_of("unknot-line");
  const TopologyReport r = topology_report(spec, extract_vortices(spec, GridSpec::cube(2.0, 40), 0.0));
  CHECK(r.component_count == 0);
  CHECK(r.open_curves.size() == 1);
  REQUIRE_FALSE(r.warnings.empty());
  CHECK(r.warnings[0].find("open") != std::string::npos);
}
