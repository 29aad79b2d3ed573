#include <doctest.h>

#include "knotfield/validate.hpp"
#include "oracles.hpp"

using namespace knotfield;

namespace {

KnottedFieldSpec spec_of(const std::string& name, double eps = 1.0) { return {preset(name).polynomial, eps}; }

GridSpec cube(double r, int n) { return GridSpec::cube(r, n); }

}  // namespace

TEST_CASE("random events are reproducible and in range") {
  const auto a = random_events(500, 42, -2.0, 3.0);
  const auto b = random_events(500, 42, -2.0, 3.0);
  const auto c = random_events(500, 43, -2.0, 3.0);
  REQUIRE(a.size() == 500);
  bool same = true, differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i].t == b[i].t && a[i].x == b[i].x && a[i].y == b[i].y && a[i].z == b[i].z;
    differs = differs || a[i].x != c[i].x;
    for (double v : {a[i].t, a[i].x, a[i].y, a[i].z}) CHECK((v >= -2.0 && v <= 3.0));
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("Maxwell residuals of the Hopf and Hopf-link fields") {
  const auto evs = random_events(200, 5, -3.0, 3.0);
  const ResidualReport h1 = hopf_maxwell_residuals(evs, 1e-3);
  const ResidualReport h2 = hopf_maxwell_residuals(evs, 5e-4);
  CHECK(h1.max() < 1e-4);
  CHECK(h1.step == 1e-3);
  CHECK(h1.max() / h2.max() == doctest::Approx(4.0).epsilon(0.25));

  const auto spec = spec_of("hopf-link");
  const ResidualReport k1 = maxwell_residuals(spec, evs, 1e-3);
  const ResidualReport k2 = maxwell_residuals(spec, evs, 5e-4);
  CHECK(k1.max() < 1e-4);
  CHECK(k1.max() / k2.max() == doctest::Approx(4.0).epsilon(0.25));
  for (double r : {k1.div_e, k1.div_b, k1.faraday, k1.ampere}) CHECK(r >= 0.0);
}

TEST_CASE("Maxwell residuals detect a non-solution") {
  const EBField bogus = [](const Event& e) { return EBSample{Vec3(e.x, 0, 0), Vec3(0, 0, 1.0)}; };
  CHECK(maxwell_residuals(bogus, random_events(20, 1, -1.0, 1.0), 1e-3).max() > 0.1);
  // E and B swapped with the wrong sign: E' = B, B' = E is not a Maxwell field.
  const EBField swapped = [](const Event& e) {
    const auto s = hopf_field(e);
    return EBSample{s.B, s.E};
  };
  CHECK(maxwell_residuals(swapped, random_events(20, 2, -1.0, 1.0), 1e-3).max() > 0.1);
  CHECK_THROWS_AS(hopf_maxwell_residuals(random_events(2, 1, 0, 1), 0.0), std::invalid_argument);
}

TEST_CASE("Hopf energy matches its closed-form total") {
  const QuadratureResult q = hopf_total_energy(cube(10.0, 81), 0.0);
  CHECK(q.value == doctest::Approx(oracle::hopf_total_energy()).epsilon(1e-3));
  CHECK(q.box_radius == 10.0);
  CHECK(q.resolution == 81);
  CHECK(q.min_density >= 0.0);
  CHECK(q.tail_estimate >= 0.0);
  CHECK(q.tail_trusted);
  // Mass of 32/(1+r^2)^4 outside radius R is about 128 pi / (5 R^5).
  CHECK(q.tail_estimate == doctest::Approx(128.0 * M_PI / 5e5).epsilon(0.2));
}

TEST_CASE("energy converges as the box grows") {
  const double e5 = hopf_total_energy(cube(5.0, 41), 0.0).value;
  const double e10 = hopf_total_energy(cube(10.0, 81), 0.0).value;
  const double e20 = hopf_total_energy(cube(20.0, 162), 0.0).value;
  CHECK(e5 < e10);
  CHECK(e10 < e20);
  CHECK(std::abs(e20 - e10) / e20 < 0.01);

  const auto spec = spec_of("hopf-link");
  const double l10 = total_energy(spec, cube(10.0, 81), 0.0).value;
  const double l20 = total_energy(spec, cube(20.0, 162), 0.0).value;
  CHECK(std::abs(l20 - l10) / l20 < 0.01);
}

TEST_CASE("far-field decay exponent") {
  const DensityFn hopf = [](const Event& e) { return hopf_field(e).energy_density; };
  CHECK(fit_decay_exponent(hopf, 0.0, 20.0, 40.0) == doctest::Approx(8.0).epsilon(0.01));
  const DensityFn model = [](const Event& e) { return oracle::hopf_energy_density_t0(e.r2()); };
  // The local log-slope of the model, 8 r^2 / (1 + r^2), bounds the fit on [5, 10].
  const double k = fit_decay_exponent(model, 0.0, 5.0, 10.0);
  CHECK(k > 8.0 * 25.0 / 26.0);
  CHECK(k < 8.0 * 100.0 / 101.0);
  // Trusting the tail requires the measured exponent to match the expected one.
  CHECK_FALSE(integrate_density(hopf, cube(10.0, 41), 0.0, 6.0).tail_trusted);
  CHECK(integrate_density(hopf, cube(10.0, 41), 0.0, 8.0).tail_trusted);
}

TEST_CASE("knotted energy is bounded by the Hopf energy times max |psi|^2") {
  for (const auto& name : {"hopf-link", "trefoil"}) {
    const auto spec = spec_of(name);
    const GridSpec g = cube(6.0, 41);
    double psi_max = 0.0;
    const int n = 41;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double x = -6.0 + 12.0 * (i + 0.5) / n, y = -6.0 + 12.0 * (j + 0.5) / n, z = -6.0 + 12.0 * (k + 0.5) / n;
          psi_max = std::max(psi_max, std::norm(psi_value(spec, Event{0, x, y, z})));
        }
    CHECK(total_energy(spec, g, 0.0).value <= psi_max * hopf_total_energy(g, 0.0).value);
  }
}

TEST_CASE("helicity is conserved and resolution independent") {
  const auto spec = spec_of("hopf-link");
  const Helicity a = helicity(spec, cube(10.0, 81), 0.0);
  const Helicity b = helicity(spec, cube(10.0, 81), 3.0);
  CHECK(std::abs(a.magnetic - b.magnetic) / std::abs(a.magnetic) < 0.02);
  CHECK(std::abs(a.electric - b.electric) / std::abs(a.electric) < 0.02);
  const Helicity c = helicity(spec, cube(10.0, 161), 0.0);
  CHECK(std::abs(a.magnetic - c.magnetic) / std::abs(c.magnetic) < 0.005);
  CHECK(std::abs(a.electric - c.electric) / std::abs(c.electric) < 0.005);
}

TEST_CASE("epsilon scans") {
  const GridSpec g = cube(3.0, 81);
  const EpsilonScan hopf = epsilon_scan(preset("hopf-link").polynomial, {1.0, 0.5}, g, 0.0);
  REQUIRE(hopf.rows.size() == 2);
  CHECK(signature(hopf.rows[0].report) == signature(hopf.rows[1].report));
  CHECK(hopf.rows[0].report.component_count == 2);
  REQUIRE(hopf.stable_from.has_value());
  CHECK(*hopf.stable_from == 0);

  const EpsilonScan tre = epsilon_scan(preset("trefoil").polynomial, {1.0}, g, 0.0);
  CHECK(tre.rows[0].report.component_count == 1);
  CHECK_FALSE(tre.stable_from.has_value());

  CHECK_THROWS_AS(epsilon_scan(preset("trefoil").polynomial, {}, g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_scan(preset("trefoil").polynomial, {0.5, 1.0}, g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_scan(preset("trefoil").polynomial, {1.0, 1.0}, g, 0.0), std::invalid_argument);
}

TEST_CASE("verification suite passes for every preset") {
  VerificationOptions opts;
  opts.identity_events = 300;
  opts.fd_events = 40;
  opts.maxwell_events = 60;
  for (const auto& p : list_presets()) {
    CAPTURE(p.name);
    for (const auto& c : verification_suite(KnottedFieldSpec(p.polynomial, 1.0), opts)) {
      CAPTURE(c.name);
      CAPTURE(c.measured);
      CHECK(c.passed);
    }
  }
}

TEST_CASE("verification suite flags a constant term") {
  BivariatePolynomial h = preset("hopf-link").polynomial;
  h.add_term(0, 0, 0.5);
  VerificationOptions opts;
  opts.identity_events = 50;
  opts.fd_events = 10;
  opts.maxwell_events = 10;
  const auto checks = verification_suite(KnottedFieldSpec(h, 1.0, KnottedFieldSpec::Unchecked{}), opts);
  bool any_failed = false;
  for (const auto& c : checks) any_failed = any_failed || !c.passed;
  CHECK(any_failed);
  CHECK_FALSE(checks.front().passed);
}
