#pragma once

// Bateman variables of the electromagnetic Hopf field and the superpotential
// chain that produces them.
//
//   alpha = (r^2 - t^2 - 1 + 2iz) / (r^2 - (t - i)^2)
//   beta  = 2 (x - iy)            / (r^2 - (t - i)^2)
//
// |alpha|^2 + |beta|^2 = 1 at every real event, so (alpha, beta) maps each
// time slice into the unit 3-sphere. The Riemann-Silberstein vector of the
// Hopf field is F = grad(alpha) x grad(beta) = E + iB.

#include <functional>
#include <stdexcept>
#include <vector>

#include "knotfield/jet.hpp"

namespace knotfield {

struct BatemanJets {
  Jet alpha;
  Jet beta;
};

/// Common denominator r^2 - (t - i)^2. Never zero for real events.
Jet bateman_denominator(const Event& e);

BatemanJets eval_bateman(const Event& e);

/// Values only, no partials. Used by the grid scans.
void bateman_values(const Event& e, cplx& alpha, cplx& beta);

struct HopfSample {
  CVec3 F;
  Vec3 E;
  Vec3 B;
  double energy_density = 0.0;  // |E|^2 + |B|^2, i.e. F . conj(F); no factor 1/2
};

HopfSample hopf_field(const Event& e);

/// Sign sigma in grad(a) x grad(b) = i sigma (d_t a grad(b) - d_t b grad(a)).
/// Chosen once by evaluating both signs at a reference event and keeping the
/// smaller residual.
int bateman_sign();

/// Relative residual of the null (Bateman) condition for a given sign.
double bateman_condition_residual(const Event& e, int sign);
double bateman_condition_residual(const Event& e);

/// W = 1 / (r^2 - (t - i)^2), a singularity-free solution of the wave equation.
Jet superpotential(const Event& e);

using ScalarField = std::function<cplx(const Event&)>;

/// Central-difference d'Alembertian (d_tt - d_xx - d_yy - d_zz) of W divided by |W|.
double wave_residual(const Event& e, double step);
double wave_residual(const Event& e, double step, const ScalarField& w);

/// Covector components of the potential A = *(dW ^ K) as printed, with
/// K = -dz^dx - i dy^dz - dx^dt + i dy^dt.
struct Covector {
  cplx dt, dx, dy, dz;
};

Covector hopf_potential(const Event& e);

using PotentialField = std::function<Covector(const Event&)>;

/// Four-divergence d_t A_t - d_x A_x - d_y A_y - d_z A_z (signature + - - -,
/// components read off the covector as printed) by central differences,
/// divided by |A|. Vanishes for the Hopf potential.
double lorenz_residual(const Event& e, double step);
double lorenz_residual(const Event& e, double step, const PotentialField& a);

class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PotentialFactor {
  cplx lambda;
  double max_deviation = 0.0;
};

/// Compares curl(A) (central differences) with grad(alpha) x grad(beta) over the
/// sampled events, fitting curl(A) = lambda * F_H by least squares. Throws
/// InconsistencyError if any event deviates from the fit by more than 1e-3.
PotentialFactor potential_field_factor(const std::vector<Event>& events, double step);
PotentialFactor potential_field_factor(const std::vector<Event>& events, double step,
                                       const PotentialField& a);

/// The electric part d_t A_i - d_i A_t of the same 2-form, by central differences.
CVec3 potential_electric_part(const Event& e, double step, const PotentialField& a);

struct TildeVariables {
  cplx alpha;
  cplx beta;
};

/// alpha~ = (2i - 2t + 2z) / D,  beta~ = 2(ix + y) / D.
TildeVariables tilde_variables(const Event& e);

/// Conversion alpha = 1 + s_a * i * alpha~,  beta = s_b * i * beta~.
struct TildeConversion {
  int alpha_sign = 1;
  int beta_sign = 1;
};

double tilde_conversion_residual(const Event& e, TildeConversion c);

/// The conversion with the smallest residual among the four sign choices at a
/// reference event. Frozen at first use.
TildeConversion tilde_conversion();

/// max(|alpha - (1 + s_a i alpha~)|, |beta - s_b i beta~|) for the frozen conversion.
double tilde_conversion_check(const Event& e);

/// Singular values (descending) of the real 4x3 Jacobian of
/// (Re alpha, Im alpha, Re beta, Im beta) with respect to (x, y, z).
Vec3 spatial_jacobian_singular_values(const Event& e);

}  // namespace knotfield
