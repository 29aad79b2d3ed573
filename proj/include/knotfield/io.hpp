#pragma once

// File formats written by the command-line tool.
//
//   curves.csv   header `component_id,vertex_index,x,y,z`, vertices in trace order
//   curves.obj   `v x y z` records followed by one `l i j k ...` polyline per curve;
//                closed curves repeat their first index at the end
//   slice PGM    binary P5, 16-bit big-endian, log10(u) mapped linearly onto [0, 65535]
//   slice CSV    header `i,j,x1,x2,u`
//
// Floats in CSV and text outputs use 17 significant digits.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "knotfield/topology.hpp"
#include "knotfield/validate.hpp"

namespace knotfield {

std::string format_double(double x);

void write_curves_csv(std::ostream& out, const VortexSet& vs);
void write_curves_obj(std::ostream& out, const VortexSet& vs);

nlohmann::json curves_json(const VortexSet& vs);
nlohmann::json report_json(const TopologyReport& r);
nlohmann::json quadrature_json(const QuadratureResult& q);
nlohmann::json residual_json(const ResidualReport& r);

/// Plane through the box: `xy`, `xz` or `yz`.
struct SlicePlane {
  int axis_a = 0;  // first in-plane axis
  int axis_b = 1;  // second in-plane axis
  int normal = 2;
  std::string name = "xy";
};

SlicePlane parse_plane(const std::string& name);

struct Slice {
  SlicePlane plane;
  double offset = 0.0;
  int width = 0;   // samples along axis_a (index i)
  int height = 0;  // samples along axis_b (index j)
  std::vector<double> x1, x2;  // sample coordinates along axis_a, axis_b
  std::vector<double> u;       // row-major, u[j * width + i]
};

/// Samples the energy density on a `res` x `res` lattice spanning the box's
/// extent in the plane's two axes (boundary included).
Slice sample_slice(const KnottedFieldSpec& spec, const Box& box, const SlicePlane& plane,
                   double offset, double t, int res);
Slice sample_hopf_slice(const Box& box, const SlicePlane& plane, double offset, double t, int res);

struct PgmMapping {
  double log_min = 0.0;  // log10(u) mapped to 0
  double log_max = 0.0;  // log10(u) mapped to 65535
  std::size_t zero_pixels = 0;  // u == 0, written as 0
};

/// Writes the P5 image; image row 0 is the largest axis_b coordinate.
PgmMapping write_slice_pgm(std::ostream& out, const Slice& s);
void write_slice_csv(std::ostream& out, const Slice& s);

struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::vector<std::uint16_t> pixels;
};

PgmImage read_pgm16(std::istream& in);

}  // namespace knotfield
