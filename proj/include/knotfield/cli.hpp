#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "knotfield/field.hpp"
#include "knotfield/vortex.hpp"

namespace knotfield::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsageError = 2 };

/// Effective configuration of one run; embedded in every output sidecar.
struct RunConfig {
  std::string preset;
  std::string poly_file;
  bool allow_constant = false;
  double epsilon = 1.0;
  double time = 0.0;
  Box box = Box::cube(3.0);
  int resolution = 81;
  double step = 0.02;
  double tol_seed = 1e-10;
  double tol_curve = 1e-8;
  std::string out_dir = ".";
  std::vector<std::string> formats;

  KnottedFieldSpec field_spec() const;
  GridSpec grid() const;
  TraceParams trace_params() const;
  nlohmann::json to_json() const;
};

std::array<double, 6> parse_box(const std::string& text);
Event parse_event(const std::string& text);
std::vector<double> parse_list(const std::string& text);

/// Entry point of the `knotfield` tool. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace knotfield::cli
