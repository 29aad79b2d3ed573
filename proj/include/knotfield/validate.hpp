#pragma once

// Global numerical checks: Maxwell residuals by finite differences, total
// energy and helicity by midpoint quadrature, and epsilon scans of the vortex
// topology.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "knotfield/topology.hpp"

namespace knotfield {

/// Uniform random events in [lo, hi]^4 from a seeded Mersenne twister.
std::vector<Event> random_events(std::size_t n, std::uint64_t seed, double lo, double hi);

struct ResidualReport {
  double div_e = 0.0;
  double div_b = 0.0;
  double faraday = 0.0;  // |d_t B + curl E|
  double ampere = 0.0;   // |d_t E - curl B|
  double step = 0.0;

  double max() const { return std::max({div_e, div_b, faraday, ampere}); }
};

struct EBSample {
  Vec3 E;
  Vec3 B;
};
using EBField = std::function<EBSample(const Event&)>;

/// Central-difference Maxwell residuals, each divided by the local field
/// magnitude sqrt(|E|^2 + |B|^2) and maximized over the events.
ResidualReport maxwell_residuals(const EBField& field, const std::vector<Event>& events, double step);
ResidualReport maxwell_residuals(const KnottedFieldSpec& spec, const std::vector<Event>& events,
                                 double step);
ResidualReport hopf_maxwell_residuals(const std::vector<Event>& events, double step);

using DensityFn = std::function<double(const Event&)>;

struct QuadratureResult {
  double value = 0.0;
  double box_radius = 0.0;  // smallest half-width of the box
  int resolution = 0;       // midpoint nodes along the first axis
  double tail_estimate = 0.0;
  double decay_exponent = 0.0;  // fitted k in max_shell u ~ r^-k
  bool tail_trusted = false;
  double min_density = 0.0;
};

/// Far-field decay exponent expected for the energy density of these fields.
constexpr double kExpectedEnergyDecay = 8.0;

/// Midpoint rule over `grid` (resolution = nodes per axis) with a tail
/// estimate from shell maxima. `expected_decay` gates tail trust (+-0.5).
QuadratureResult integrate_density(const DensityFn& density, const GridSpec& grid, double t,
                                   double expected_decay = kExpectedEnergyDecay);

QuadratureResult total_energy(const KnottedFieldSpec& spec, const GridSpec& grid, double t);
QuadratureResult hopf_total_energy(const GridSpec& grid, double t);

/// Fitted exponent k of max-over-shell u ~ r^-k for radii in [r_min, r_max].
double fit_decay_exponent(const DensityFn& density, double t, double r_min, double r_max);

struct Helicity {
  double magnetic = 0.0;  // integral of A . B
  double electric = 0.0;  // integral of C . E
};

Helicity helicity(const KnottedFieldSpec& spec, const GridSpec& grid, double t);

struct ScanRow {
  double epsilon = 0.0;
  TopologyReport report;
  std::size_t open_curves = 0;
  std::vector<std::string> diagnostics;
};

struct EpsilonScan {
  std::vector<ScanRow> rows;
  /// Index of the first row from which every later row has the same topology
  /// signature (requires at least two agreeing rows).
  std::optional<std::size_t> stable_from;
};

EpsilonScan epsilon_scan(const BivariatePolynomial& h, const std::vector<double>& epsilons,
                         const GridSpec& grid, double t, const TraceParams& params = {});

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerificationOptions {
  std::uint64_t seed = 20170601;
  std::size_t identity_events = 1000;  // algebraic identities, events in [-5, 5]^4
  std::size_t fd_events = 100;         // finite-difference checks, events in [-3, 3]^4
  std::size_t maxwell_events = 200;
};

/// Pointwise identities of the Bateman variables, the superpotential chain and
/// the knotted field, each with its pass threshold.
std::vector<CheckResult> verification_suite(const KnottedFieldSpec& spec,
                                            const VerificationOptions& options = {});

}  // namespace knotfield
