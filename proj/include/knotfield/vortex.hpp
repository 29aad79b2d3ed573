#pragma once

// Extraction of optical vortex lines, the curves where psi = h(alpha_e, beta_e)
// vanishes, at a fixed time.
//
// Pipeline: scan_cells finds grid cells where both Re psi and Im psi change
// sign, refine_seed pulls a cell center onto the zero set by Gauss-Newton, and
// trace_curve follows the curve with a predictor-corrector along the tangent
// grad(Re psi) x grad(Im psi).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "knotfield/field.hpp"

namespace knotfield {

struct Box {
  Vec3 lo{-3.0, -3.0, -3.0};
  Vec3 hi{3.0, 3.0, 3.0};

  static Box cube(double half_width) {
    return {Vec3::Constant(-half_width), Vec3::Constant(half_width)};
  }
  bool contains(const Vec3& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
};

/// Regular grid over a box. For scans `resolution` counts vertices per axis
/// (boundary included); for quadrature it counts midpoint nodes per axis.
struct GridSpec {
  Box bounds;
  std::array<int, 3> resolution{81, 81, 81};

  static GridSpec cube(double half_width, int res) { return {Box::cube(half_width), {res, res, res}}; }
  void validate() const;  // min < max on each axis, resolution >= 8
};

struct TraceParams {
  double step = 0.02;            // nominal predictor step, box units
  double tol_seed = 1e-10;       // |psi| for a converged seed or corrector
  double tol_curve = 1e-8;       // |psi| bound every reported vertex satisfies
  int max_refine_iterations = 50;
  int max_corrector_iterations = 12;
  int slow_corrector_iterations = 5;  // more than this halves the step
  double dedupe_factor = 2.0;         // dedupe radius = dedupe_factor * step
  double min_step_factor = 1.0 / 4096.0;
  double max_turn_cos = 0.9;  // consecutive tangents must satisfy t0 . t1 > this
  std::size_t max_vertices = 4'000'000;

  double dedupe_radius() const { return dedupe_factor * step; }
  void validate() const;
};

struct VortexCurve {
  std::vector<Vec3> vertices;
  bool closed = false;
  double arc_length = 0.0;  // includes the closing segment for closed curves
};

struct VortexSet {
  std::vector<VortexCurve> curves;
  double time = 0.0;
  double epsilon = 1.0;
  std::vector<std::string> diagnostics;
};

/// Cell centers of cells whose 8 corners show sign changes in both Re psi and
/// Im psi, in lexicographic (i, j, k) cell order.
std::vector<Vec3> scan_cells(const KnottedFieldSpec& spec, const GridSpec& grid, double t);

struct RefineResult {
  Vec3 point;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // |psi| at the returned point
};

/// Minimum-norm Gauss-Newton on (Re psi, Im psi) = 0.
RefineResult refine_seed(const KnottedFieldSpec& spec, const Vec3& point, double t,
                         const TraceParams& params = {});

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unit tangent grad(Re psi) x grad(Im psi) normalized. Throws TraceError when
/// the two gradients are (nearly) parallel.
Vec3 vortex_tangent(const KnottedFieldSpec& spec, const Vec3& point, double t);

/// Traces the curve through `seed`. Closed curves return to the seed; curves
/// that leave `box` are traced in both directions and marked open.
VortexCurve trace_curve(const KnottedFieldSpec& spec, const Vec3& seed, double t, const Box& box,
                        const TraceParams& params = {});

VortexSet extract_vortices(const KnottedFieldSpec& spec, const GridSpec& grid, double t,
                           const TraceParams& params = {});

/// Points where the curves cross the plane {coord[axis] = offset}, refined onto
/// the zero set within that plane.
std::vector<Vec3> plane_crossings(const KnottedFieldSpec& spec, const VortexSet& vs, int axis,
                                  double offset);

/// Distance from p to the nearest vertex of any curve in the set.
double distance_to_curves(const VortexSet& vs, const Vec3& p);

}  // namespace knotfield
