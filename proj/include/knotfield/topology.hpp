#pragma once

// Numerical link invariants of extracted vortex sets: component count,
// pairwise Gauss linking numbers and phase windings of alpha_e, beta_e.

#include <optional>
#include <string>
#include <vector>

#include "knotfield/vortex.hpp"

namespace knotfield {

/// Integers are accepted when their pre-rounding deviation is below this.
constexpr double kIntegerTolerance = 0.05;

struct LinkingResult {
  double value = 0.0;
  double min_distance = 0.0;
  bool ill_conditioned = false;  // curves closer than 1e-6
};

/// Gauss linking number of two closed polylines, summed exactly over segment
/// pairs with the signed solid-angle formula. Throws std::invalid_argument for
/// open curves.
LinkingResult linking_number_checked(const VortexCurve& a, const VortexCurve& b);
double linking_number(const VortexCurve& a, const VortexCurve& b);

class CurveTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Windings {
  long alpha = 0;
  long beta = 0;
  double raw_alpha = 0.0;  // accumulated phase / 2 pi before rounding
  double raw_beta = 0.0;

  double residual_alpha() const { return std::abs(raw_alpha - double(alpha)); }
  double residual_beta() const { return std::abs(raw_beta - double(beta)); }
};

/// Net turns of arg(alpha_e) and arg(beta_e) along a closed curve at time t.
/// Throws CurveTooCoarse when consecutive vertices differ in phase by more than
/// pi/2, and std::invalid_argument if a phase is undefined (|.| <= 1e-9).
Windings phase_windings(const KnottedFieldSpec& spec, const VortexCurve& curve, double t);

struct TopologyReport {
  int component_count = 0;  // closed curves only
  std::vector<std::size_t> closed_curves;  // indices into the VortexSet
  std::vector<std::size_t> open_curves;
  std::vector<std::vector<double>> linking;  // NaN on the diagonal
  std::vector<std::vector<long>> linking_rounded;
  std::vector<std::optional<Windings>> windings;
  double time = 0.0;
  double epsilon = 1.0;
  double max_rounding_deviation = 0.0;
  std::vector<std::string> warnings;

  bool integers_reliable() const { return max_rounding_deviation < kIntegerTolerance; }
};

TopologyReport topology_report(const KnottedFieldSpec& spec, const VortexSet& vs);

/// Orientation-free invariants: count, sorted |linking| values and sorted
/// (|w_alpha|, |w_beta|) pairs. Two reports describing the same link agree.
struct TopologySignature {
  int component_count = 0;
  std::vector<long> abs_linking;
  std::vector<std::pair<long, long>> abs_windings;
  bool operator==(const TopologySignature&) const = default;
};

TopologySignature signature(const TopologyReport& r);
std::string to_string(const TopologySignature& s);

}  // namespace knotfield
