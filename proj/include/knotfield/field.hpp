#pragma once

// The knotted null field F_L = h(alpha_e, beta_e) grad(alpha_e) x grad(beta_e)
// with alpha_e = eps * alpha and beta_e = eps * beta, so that
// |alpha_e|^2 + |beta_e|^2 = eps^2.

#include "knotfield/bateman.hpp"
#include "knotfield/linkpoly.hpp"

namespace knotfield {

class KnottedFieldSpec {
 public:
  KnottedFieldSpec(BivariatePolynomial h, double epsilon);

  /// Skips the link-polynomial check (constant terms allowed). Only for
  /// diagnosing corrupted inputs.
  struct Unchecked {};
  KnottedFieldSpec(BivariatePolynomial h, double epsilon, Unchecked);

  const BivariatePolynomial& h() const { return h_; }
  /// f = antiderivative of h in v, zero integration constant.
  const BivariatePolynomial& f() const { return f_; }
  double epsilon() const { return epsilon_; }

 private:
  BivariatePolynomial h_;
  BivariatePolynomial f_;
  double epsilon_;
};

struct FieldSample {
  CVec3 F;
  Vec3 E;
  Vec3 B;
  Vec3 S;           // E x B
  double u = 0.0;   // |E|^2 + |B|^2
  cplx psi;         // h(alpha_e, beta_e)
  CVec3 grad_psi;   // spatial gradient of psi
};

/// Scaled Bateman jets (eps * alpha, eps * beta).
BatemanJets scaled_bateman(const KnottedFieldSpec& spec, const Event& e);

/// The Hopf field built from the scaled variables: grad(alpha_e) x grad(beta_e).
HopfSample scaled_hopf_field(const KnottedFieldSpec& spec, const Event& e);

FieldSample knotted_field(const KnottedFieldSpec& spec, const Event& e);

/// psi as a jet (value and all four partials).
Jet psi_jet(const KnottedFieldSpec& spec, const Event& e);

/// psi value only.
cplx psi_value(const KnottedFieldSpec& spec, const Event& e);

/// Energy density only, without jets of h. Used by quadrature and slices.
double energy_density(const KnottedFieldSpec& spec, const Event& e);

constexpr double kResidualFloor = 1e-300;

/// |u_L - |psi|^2 u_H| / max(|psi|^2 u_H, floor), u_H from the scaled Hopf field.
double energy_ratio(const KnottedFieldSpec& spec, const Event& e);

/// ||S_L - |psi|^2 S_H|| / max(|psi|^2 ||S_H||, floor).
double poynting_alignment(const KnottedFieldSpec& spec, const Event& e);

struct VectorPotential {
  CVec3 V;  // f(alpha_e, beta_e) grad(beta_e)
  Vec3 C;   // Re V, curl C = E
  Vec3 A;   // Im V, curl A = B
};

VectorPotential vector_potential(const KnottedFieldSpec& spec, const Event& e);

struct HelicityDensity {
  double magnetic = 0.0;  // A . B
  double electric = 0.0;  // C . E
};

HelicityDensity helicity_densities(const KnottedFieldSpec& spec, const Event& e);

}  // namespace knotfield
