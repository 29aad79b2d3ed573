#include <doctest.h>

#include <map>

#include "knotfield/field.hpp"
#include "oracles.hpp"

using namespace knotfield;

namespace {

std::vector<KnottedFieldSpec> all_specs() {
  std::vector<KnottedFieldSpec> out;
  for (const auto& p : list_presets()) out.emplace_back(p.polynomial, 1.0);
  out.emplace_back(preset("cable-2-3-3-2").polynomial, 0.8);
  return out;
}

CVec3 fd_curl(const std::function<CVec3(const Event&)>& f, const Event& e, double h) {
  auto d = [&](int axis, int comp) {
    return (f(oracle::shift(e, axis, h))[comp] - f(oracle::shift(e, axis, -h))[comp]) / (2.0 * h);
  };
  return {d(2, 2) - d(3, 1), d(3, 0) - d(1, 2), d(1, 1) - d(2, 0)};
}

}  // namespace

TEST_CASE("spec validation") {
  const auto h = preset("hopf-link").polynomial;
  CHECK_THROWS_AS(KnottedFieldSpec(h, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(KnottedFieldSpec(h, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(KnottedFieldSpec(h, std::nan("")), std::invalid_argument);
  BivariatePolynomial c = h;
  c.add_term(0, 0, 0.25);
  CHECK_THROWS_AS(KnottedFieldSpec(c, 1.0), ValidationError);
  CHECK_THROWS_AS(KnottedFieldSpec(BivariatePolynomial{}, 1.0), ValidationError);
  CHECK_NOTHROW(KnottedFieldSpec(c, 1.0, KnottedFieldSpec::Unchecked{}));
  const KnottedFieldSpec s(h, 0.5);
  CHECK(s.f() == antiderivative_v(h));
  CHECK(s.epsilon() == 0.5);
}

TEST_CASE("knotted field agrees with an independent finite-difference assembly") {
  for (const auto& spec : all_specs()) {
    for (const auto& e : oracle::events(50, 21, -2.0, 2.0)) {
      const double eps = spec.epsilon();
      auto a = [&](const Event& p) { return eps * oracle::alpha(p); };
      auto b = [&](const Event& p) { return eps * oracle::beta(p); };
      const cplx psi = eval_poly(spec.h(), a(e), b(e));
      const CVec3 F = psi * oracle::cross(oracle::gradient(a, e), oracle::gradient(b, e));
      const FieldSample s = knotted_field(spec, e);
      CHECK(std::abs(s.psi - psi) <= 1e-12 * std::max(1.0, std::abs(psi)));
      CHECK((s.F - F).norm() <= 1e-6 * std::max(1e-6, F.norm()));
    }
  }
}

TEST_CASE("Hopf-link field at the origin") {
  const KnottedFieldSpec spec(preset("hopf-link").polynomial, 1.0);
  const Event o{0, 0, 0, 0};
  const FieldSample s = knotted_field(spec, o);
  CHECK(std::abs(s.psi - 1.0) < 1e-15);
  CHECK(s.u == doctest::Approx(hopf_field(o).energy_density).epsilon(1e-14));
  CHECK(energy_ratio(spec, o) < 1e-14);
}

TEST_CASE("unit circle is dark") {
  const KnottedFieldSpec spec(preset("unknot-circle").polynomial, 1.0);
  const FieldSample s = knotted_field(spec, Event{0, 1, 0, 0});
  CHECK(std::abs(s.psi) == 0.0);
  CHECK(s.u == 0.0);
  CHECK(s.S.norm() == 0.0);
  CHECK(energy_density(spec, Event{0, 1, 0, 0}) == 0.0);
  const HelicityDensity hd = helicity_densities(spec, Event{0, 1, 0, 0});
  CHECK(hd.magnetic == 0.0);
  CHECK(hd.electric == 0.0);
}

TEST_CASE("sample observables are consistent") {
  const KnottedFieldSpec spec(preset("trefoil").polynomial, 1.0);
  for (const auto& e : oracle::events(200, 22, -3.0, 3.0)) {
    const FieldSample s = knotted_field(spec, e);
    CHECK((s.E - s.F.real()).norm() == 0.0);
    CHECK((s.B - s.F.imag()).norm() == 0.0);
    CHECK((s.S - s.E.cross(s.B)).norm() == 0.0);
    CHECK(s.u == s.E.squaredNorm() + s.B.squaredNorm());
    CHECK(energy_density(spec, e) == doctest::Approx(s.u).epsilon(1e-12));
    CHECK(std::abs(psi_value(spec, e) - s.psi) <= 1e-14 * std::max(1.0, std::abs(s.psi)));
  }
}

TEST_CASE("scaled Bateman variables lie on the sphere of radius epsilon") {
  const KnottedFieldSpec spec(preset("hopf-link").polynomial, 0.6);
  for (const auto& e : oracle::events(500, 23, -5.0, 5.0)) {
    const auto bj = scaled_bateman(spec, e);
    CHECK(std::norm(bj.alpha.value) + std::norm(bj.beta.value) == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(scaled_hopf_field(spec, e).energy_density ==
          doctest::Approx(std::pow(0.6, 4) * hopf_field(e).energy_density).epsilon(1e-12));
  }
}

TEST_CASE("nullness of every preset field") {
  for (const auto& spec : all_specs()) {
    double worst = 0.0;
    for (const auto& e : oracle::events(2000, 24, -5.0, 5.0)) {
      const FieldSample s = knotted_field(spec, e);
      const double n = s.F.squaredNorm();
      if (n > 0.0) worst = std::max(worst, std::abs(bilinear_dot(s.F, s.F)) / n);
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("energy and Poynting factorization") {
  for (const auto& spec : all_specs()) {
    double e_worst = 0.0, p_worst = 0.0, cos_worst = 1.0;
    for (const auto& e : oracle::events(2000, 25, -5.0, 5.0)) {
      e_worst = std::max(e_worst, energy_ratio(spec, e));
      p_worst = std::max(p_worst, poynting_alignment(spec, e));
      const FieldSample s = knotted_field(spec, e);
      const HopfSample h = scaled_hopf_field(spec, e);
      const Vec3 sh = h.E.cross(h.B);
      if (std::abs(s.psi) > 0.0) cos_worst = std::min(cos_worst, s.S.dot(sh) / (s.S.norm() * sh.norm()));
    }
    CHECK(e_worst < 1e-12);
    CHECK(p_worst < 1e-10);
    CHECK(cos_worst > 1.0 - 1e-10);
  }
}

TEST_CASE("psi jet matches finite differences") {
  for (const auto& spec : all_specs()) {
    double worst = 0.0;
    for (const auto& e : oracle::events(200, 26, -3.0, 3.0)) {
      const Jet j = psi_jet(spec, e);
      const double eps = spec.epsilon();
      auto psi = [&](const Event& p) { return eval_poly(spec.h(), eps * oracle::alpha(p), eps * oracle::beta(p)); };
      for (int a = 0; a < 4; ++a) {
        const cplx fd = oracle::partial(psi, e, a);
        worst = std::max(worst, std::abs(j.d[a] - fd) / std::max(1.0, std::abs(fd)));
      }
      const CVec3 g = knotted_field(spec, e).grad_psi;
      CHECK((g - j.grad()).norm() <= 1e-14 * std::max(1.0, g.norm()));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("curl of the vector potential is the knotted field") {
  for (const auto& spec : all_specs()) {
    double worst = 0.0;
    for (const auto& e : oracle::events(100, 27, -3.0, 3.0)) {
      const CVec3 curl = fd_curl([&](const Event& p) { return vector_potential(spec, p).V; }, e, 1e-3);
      const CVec3 F = knotted_field(spec, e).F;
      worst = std::max(worst, (curl - F).norm() / std::max(F.norm(), 1e-12));
    }
    CAPTURE(to_string(spec.h()));
    CAPTURE(spec.epsilon());
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("vector potential special values") {
  const KnottedFieldSpec hopf(preset("hopf-link").polynomial, 1.0);
  const Event o{0, 0, 0, 0};
  const CVec3 gb = scaled_bateman(hopf, o).beta.grad();
  const VectorPotential vp = vector_potential(hopf, o);
  CHECK((vp.V - (-1.0 / 3.0) * gb).norm() < 1e-15);
  CHECK((vp.C - vp.V.real()).norm() == 0.0);
  CHECK((vp.A - vp.V.imag()).norm() == 0.0);

  const KnottedFieldSpec line(preset("unknot-line").polynomial, 1.0);
  for (double z : {-1.5, 0.0, 0.7}) {
    const Event e{0.3, 0.0, 0.0, z};
    CHECK(vector_potential(line, e).V.norm() == 0.0);
  }
  const Event e{0.2, 0.4, -0.1, 0.3};
  const auto bj = scaled_bateman(line, e);
  CHECK((vector_potential(line, e).V - bj.alpha.value * bj.beta.value * bj.beta.grad()).norm() < 1e-14);
}

TEST_CASE("helicity densities are finite reals") {
  const KnottedFieldSpec spec(preset("hopf-link").polynomial, 1.0);
  for (const auto& e : oracle::events(500, 28, -5.0, 5.0)) {
    const HelicityDensity h = helicity_densities(spec, e);
    CHECK(std::isfinite(h.magnetic));
    CHECK(std::isfinite(h.electric));
    const VectorPotential vp = vector_potential(spec, e);
    const FieldSample s = knotted_field(spec, e);
    CHECK(h.magnetic == doctest::Approx(vp.A.dot(s.B)));
    CHECK(h.electric == doctest::Approx(vp.C.dot(s.E)));
  }
}

TEST_CASE("energy density decays beyond r = 5") {
  const KnottedFieldSpec spec(preset("hopf-link").polynomial, 1.0);
  std::map<int, double> shell_max;
  bool all_finite = true;
  const int n = 61;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double x = -10.0 + 20.0 * i / (n - 1), y = -10.0 + 20.0 * j / (n - 1), z = -10.0 + 20.0 * k / (n - 1);
        const double r = std::sqrt(x * x + y * y + z * z);
        const double u = energy_density(spec, Event{0, x, y, z});
        all_finite = all_finite && std::isfinite(u);
        if (r >= 5.0 && r < 10.0) {
          double& m = shell_max[int(r)];
          m = std::max(m, u);
        }
      }
  CHECK(all_finite);
  REQUIRE(shell_max.size() == 5);
  for (auto it = std::next(shell_max.begin()); it != shell_max.end(); ++it)
    CHECK(it->second < std::prev(it)->second);
}
