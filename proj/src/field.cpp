#include "knotfield/field.hpp"

namespace knotfield {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw ValidationError("epsilon must be a finite positive number");
}

}  // namespace

KnottedFieldSpec::KnottedFieldSpec(BivariatePolynomial h, double epsilon)
    : h_(std::move(h)), f_(antiderivative_v(h_)), epsilon_(epsilon) {
  validate_link_polynomial(h_);
  check_epsilon(epsilon_);
}

KnottedFieldSpec::KnottedFieldSpec(BivariatePolynomial h, double epsilon, Unchecked)
    : h_(std::move(h)), f_(antiderivative_v(h_)), epsilon_(epsilon) {
  if (h_.empty()) throw ValidationError("zero polynomial does not define a link");
  check_epsilon(epsilon_);
}

BatemanJets scaled_bateman(const KnottedFieldSpec& spec, const Event& e) {
  auto bj = eval_bateman(e);
  const cplx eps(spec.epsilon());
  bj.alpha *= eps;
  bj.beta *= eps;
  return bj;
}

HopfSample scaled_hopf_field(const KnottedFieldSpec& spec, const Event& e) {
  HopfSample s = hopf_field(e);
  const double eps2 = spec.epsilon() * spec.epsilon();
  s.F *= eps2;
  s.E *= eps2;
  s.B *= eps2;
  s.energy_density *= eps2 * eps2;
  return s;
}

FieldSample knotted_field(const KnottedFieldSpec& spec, const Event& e) {
  const auto bj = scaled_bateman(spec, e);
  const Jet psi = eval_poly(spec.h(), bj.alpha, bj.beta);
  FieldSample s;
  s.psi = psi.value;
  s.grad_psi = psi.grad();
  s.F = psi.value * bilinear_cross(bj.alpha.grad(), bj.beta.grad());
  s.E = s.F.real();
  s.B = s.F.imag();
  s.S = s.E.cross(s.B);
  s.u = s.E.squaredNorm() + s.B.squaredNorm();
  return s;
}

Jet psi_jet(const KnottedFieldSpec& spec, const Event& e) {
  const auto bj = scaled_bateman(spec, e);
  return eval_poly(spec.h(), bj.alpha, bj.beta);
}

cplx psi_value(const KnottedFieldSpec& spec, const Event& e) {
  cplx alpha, beta;
  bateman_values(e, alpha, beta);
  return eval_poly(spec.h(), spec.epsilon() * alpha, spec.epsilon() * beta);
}

double energy_density(const KnottedFieldSpec& spec, const Event& e) {
  const auto bj = scaled_bateman(spec, e);
  const cplx psi = eval_poly(spec.h(), bj.alpha.value, bj.beta.value);
  const CVec3 F = psi * bilinear_cross(bj.alpha.grad(), bj.beta.grad());
  return F.squaredNorm();
}

double energy_ratio(const KnottedFieldSpec& spec, const Event& e) {
  const FieldSample l = knotted_field(spec, e);
  const HopfSample hs = scaled_hopf_field(spec, e);
  const double expected = std::norm(l.psi) * hs.energy_density;
  return std::abs(l.u - expected) / std::max(expected, kResidualFloor);
}

double poynting_alignment(const KnottedFieldSpec& spec, const Event& e) {
  const FieldSample l = knotted_field(spec, e);
  const HopfSample hs = scaled_hopf_field(spec, e);
  const Vec3 sh = hs.E.cross(hs.B);
  const Vec3 expected = std::norm(l.psi) * sh;
  return (l.S - expected).norm() / std::max(expected.norm(), kResidualFloor);
}

VectorPotential vector_potential(const KnottedFieldSpec& spec, const Event& e) {
  const auto bj = scaled_bateman(spec, e);
  const cplx f = eval_poly(spec.f(), bj.alpha.value, bj.beta.value);
  VectorPotential out;
  out.V = f * bj.beta.grad();
  out.C = out.V.real();
  out.A = out.V.imag();
  return out;
}

HelicityDensity helicity_densities(const KnottedFieldSpec& spec, const Event& e) {
  const auto bj = scaled_bateman(spec, e);
  const cplx psi = eval_poly(spec.h(), bj.alpha.value, bj.beta.value);
  const cplx f = eval_poly(spec.f(), bj.alpha.value, bj.beta.value);
  const CVec3 gb = bj.beta.grad();
  const CVec3 F = psi * bilinear_cross(bj.alpha.grad(), gb);
  const CVec3 V = f * gb;
  return {V.imag().dot(F.imag()), V.real().dot(F.real())};
}

}  // namespace knotfield
