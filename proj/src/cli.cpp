#include "knotfield/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "knotfield/io.hpp"
#include "knotfield/topology.hpp"
#include "knotfield/validate.hpp"

namespace knotfield::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (!text.empty() && text.back() == ',') throw UsageError("trailing comma in list '" + text + "'");
  return out;
}

std::array<double, 6> parse_box(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 6) throw UsageError("--box expects XMIN,XMAX,YMIN,YMAX,ZMIN,ZMAX");
  for (int a = 0; a < 3; ++a)
    if (!(v[2 * a] < v[2 * a + 1])) throw UsageError("--box requires min < max on every axis");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

Event parse_event(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 4) throw UsageError("--event expects T,X,Y,Z");
  return {v[0], v[1], v[2], v[3]};
}

KnottedFieldSpec RunConfig::field_spec() const {
  if (preset.empty() == poly_file.empty())
    throw UsageError("exactly one of --preset or --poly-file is required");
  if (!preset.empty()) return KnottedFieldSpec(knotfield::preset(preset).polynomial, epsilon);
  auto h = load_poly_file(poly_file, allow_constant);
  if (h.has_constant_term()) return KnottedFieldSpec(std::move(h), epsilon, KnottedFieldSpec::Unchecked{});
  return KnottedFieldSpec(std::move(h), epsilon);
}

GridSpec RunConfig::grid() const {
  GridSpec g{box, {resolution, resolution, resolution}};
  g.validate();
  return g;
}

TraceParams RunConfig::trace_params() const {
  TraceParams p;
  p.step = step;
  p.tol_seed = tol_seed;
  p.tol_curve = tol_curve;
  p.validate();
  return p;
}

json RunConfig::to_json() const {
  json j;
  j["preset"] = preset;
  j["polyFile"] = poly_file;
  j["allowConstant"] = allow_constant;
  j["epsilon"] = epsilon;
  j["time"] = time;
  j["box"] = {box.lo.x(), box.hi.x(), box.lo.y(), box.hi.y(), box.lo.z(), box.hi.z()};
  j["resolution"] = resolution;
  j["step"] = step;
  j["tolSeed"] = tol_seed;
  j["tolCurve"] = tol_curve;
  j["formats"] = formats;
  try {
    const auto spec = field_spec();
    json terms = json::array();
    for (const auto& [e, c] : spec.h().terms()) terms.push_back({e.first, e.second, c.real(), c.imag()});
    j["polynomial"] = terms;
    j["polynomialText"] = to_string(spec.h());
  } catch (const std::exception&) {
  }
  j["partialOrder"] = "(d/dt, d/dx, d/dy, d/dz)";
  j["energyDensity"] = "|E|^2 + |B|^2";
  return j;
}

namespace {

struct Options {
  RunConfig cfg;
  std::string box_text;
  std::string event_text;
  std::string plane = "xy";
  double offset = 0.0;
  bool hopf_only = false;
  std::optional<double> compare_time;
  std::string epsilons_text = "1,0.8,0.6,0.4";
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--preset", o.cfg.preset, "Preset link polynomial (see `presets`)");
  sub->add_option("--poly-file", o.cfg.poly_file, "Polynomial file with `j k re im` lines");
  sub->add_flag("--allow-constant", o.cfg.allow_constant,
                "Accept a constant term in --poly-file (diagnostics only)");
  sub->add_option("--epsilon", o.cfg.epsilon, "Sphere radius epsilon > 0");
  sub->add_option("--time", o.cfg.time, "Time slice t");
  sub->add_option("--box", o.box_text, "XMIN,XMAX,YMIN,YMAX,ZMIN,ZMAX");
  sub->add_option("--res", o.cfg.resolution, "Grid resolution per axis");
  sub->add_option("--step", o.cfg.step, "Trace step");
  sub->add_option("--tol-seed", o.cfg.tol_seed, "Seed/corrector tolerance on |psi|");
  sub->add_option("--tol-curve", o.cfg.tol_curve, "Vertex tolerance on |psi|");
  sub->add_option("--out", o.cfg.out_dir, "Output directory");
  sub->add_option("--format", o.cfg.formats, "Output formats: csv, obj, json, pgm")->delimiter(',');
}

void finalize(Options& o) {
  if (!o.box_text.empty()) {
    const auto b = parse_box(o.box_text);
    o.cfg.box = {Vec3(b[0], b[2], b[4]), Vec3(b[1], b[3], b[5])};
  }
  if (!(o.cfg.epsilon > 0.0) || !std::isfinite(o.cfg.epsilon)) throw UsageError("--epsilon must be > 0");
  if (!std::isfinite(o.cfg.time)) throw UsageError("--time must be finite");
  if (o.cfg.resolution < 8) throw UsageError("--res must be at least 8");
  if (!(o.cfg.step > 0.0) || !(o.cfg.tol_seed > 0.0) || !(o.cfg.tol_curve > 0.0))
    throw UsageError("--step and tolerances must be > 0");
  for (const auto& f : o.cfg.formats)
    if (f != "csv" && f != "obj" && f != "json" && f != "pgm") throw UsageError("unknown format '" + f + "'");
}

bool wants(const RunConfig& cfg, const std::string& fmt, bool by_default) {
  if (cfg.formats.empty()) return by_default;
  return std::find(cfg.formats.begin(), cfg.formats.end(), fmt) != cfg.formats.end();
}

fs::path out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("failed to write " + path.string());
}

template <class Writer>
void write_file(const fs::path& path, Writer&& w) {
  std::ofstream f(path, std::ios::binary);
  w(f);
  if (!f) throw std::runtime_error("failed to write " + path.string());
}

std::string vec_text(const Vec3& v) {
  return format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z());
}

std::string cvec_text(const CVec3& v) {
  std::string s;
  for (int i = 0; i < 3; ++i)
    s += (i ? " " : "") + format_double(v[i].real()) + " " + format_double(v[i].imag());
  return s;
}

int cmd_presets(std::ostream& out) {
  for (const auto& p : list_presets()) {
    out << p.name << "\n  h(v,w) = " << to_string(p.polynomial) << "\n  " << p.description
        << "\n  source: " << p.provenance << "\n";
  }
  out << "torus-P-Q\n  h(v,w) = sqrt(2)^Q v^Q - sqrt(2)^P w^P for coprime P, Q\n";
  return kOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
  if (o.event_text.empty()) throw UsageError("sample requires --event T,X,Y,Z");
  const Event e = parse_event(o.event_text);
  const auto spec = o.cfg.field_spec();
  const auto s = knotted_field(spec, e);
  out << "event " << format_double(e.t) << ' ' << format_double(e.x) << ' ' << format_double(e.y) << ' '
      << format_double(e.z) << '\n';
  out << "epsilon " << format_double(spec.epsilon()) << '\n';
  out << "psi " << format_double(s.psi.real()) << ' ' << format_double(s.psi.imag()) << '\n';
  out << "grad_psi " << cvec_text(s.grad_psi) << '\n';
  out << "E " << vec_text(s.E) << '\n';
  out << "B " << vec_text(s.B) << '\n';
  out << "S " << vec_text(s.S) << '\n';
  out << "u " << format_double(s.u) << '\n';
  return kOk;
}

VortexSet run_extraction(const Options& o, const KnottedFieldSpec& spec, std::ostream& err) {
  const VortexSet vs = extract_vortices(spec, o.cfg.grid(), o.cfg.time, o.cfg.trace_params());
  for (const auto& d : vs.diagnostics) err << "diagnostic: " << d << '\n';
  return vs;
}

int cmd_vortex(const Options& o, std::ostream& out, std::ostream& err) {
  const auto spec = o.cfg.field_spec();
  const VortexSet vs = run_extraction(o, spec, err);
  write_file(out_path(o.cfg, "curves.csv"), [&](std::ostream& f) { write_curves_csv(f, vs); });
  if (wants(o.cfg, "obj", false))
    write_file(out_path(o.cfg, "curves.obj"), [&](std::ostream& f) { write_curves_obj(f, vs); });
  json side = curves_json(vs);
  side["config"] = o.cfg.to_json();
  write_json(out_path(o.cfg, "curves.json"), side);
  std::size_t closed = 0;
  for (const auto& c : vs.curves) closed += c.closed;
  out << vs.curves.size() << " curve(s), " << closed << " closed\n";
  return kOk;
}

int cmd_topology(const Options& o, std::ostream& out, std::ostream& err) {
  const auto spec = o.cfg.field_spec();
  const VortexSet vs = run_extraction(o, spec, err);
  const TopologyReport r = topology_report(spec, vs);
  json j = report_json(r);
  j["config"] = o.cfg.to_json();
  j["diagnostics"] = vs.diagnostics;
  write_json(out_path(o.cfg, "report.json"), j);
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';
  out << to_string(signature(r)) << '\n';
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto spec = o.cfg.field_spec();
  const auto checks = verification_suite(spec);
  json j;
  j["config"] = o.cfg.to_json();
  j["batemanSign"] = bateman_sign();
  j["checks"] = json::array();
  bool all = true;
  out << "Bateman sign: " << (bateman_sign() > 0 ? "+1" : "-1") << '\n';
  for (const auto& c : checks) {
    all &= c.passed;
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.measured)
        << " (threshold " << format_double(c.threshold) << ")" << (c.detail.empty() ? "" : "; " + c.detail)
        << '\n';
    j["checks"].push_back({{"name", c.name},
                           {"measured", c.measured},
                           {"threshold", c.threshold},
                           {"passed", c.passed},
                           {"detail", c.detail}});
  }
  j["passed"] = all;
  write_json(out_path(o.cfg, "verify.json"), j);
  return all ? kOk : kVerificationFailed;
}

int cmd_slice(const Options& o, std::ostream& out) {
  const SlicePlane plane = parse_plane(o.plane);
  const Slice s = o.hopf_only ? sample_hopf_slice(o.cfg.box, plane, o.offset, o.cfg.time, o.cfg.resolution)
                              : sample_slice(o.cfg.field_spec(), o.cfg.box, plane, o.offset, o.cfg.time,
                                             o.cfg.resolution);
  const std::string stem = "slice_" + plane.name;
  PgmMapping m;
  if (wants(o.cfg, "pgm", true))
    write_file(out_path(o.cfg, stem + ".pgm"), [&](std::ostream& f) { m = write_slice_pgm(f, s); });
  if (wants(o.cfg, "csv", true))
    write_file(out_path(o.cfg, stem + ".csv"), [&](std::ostream& f) { write_slice_csv(f, s); });
  json j;
  j["config"] = o.cfg.to_json();
  j["plane"] = plane.name;
  j["offset"] = o.offset;
  j["hopfOnly"] = o.hopf_only;
  j["width"] = s.width;
  j["height"] = s.height;
  j["mapping"] = {{"quantity", "log10(u)"},
                  {"logMin", m.log_min},
                  {"logMax", m.log_max},
                  {"pixelMin", 0},
                  {"pixelMax", 65535},
                  {"zeroPixels", m.zero_pixels},
                  {"rowOrder", "first image row is the largest second-axis coordinate"}};
  write_json(out_path(o.cfg, stem + ".json"), j);
  out << "wrote " << stem << " (" << s.width << "x" << s.height << ")\n";
  return kOk;
}

int cmd_energy(const Options& o, std::ostream& out) {
  GridSpec g = o.cfg.grid();
  GridSpec doubled = g;
  doubled.bounds.lo *= 2.0;
  doubled.bounds.hi *= 2.0;
  doubled.resolution = {2 * g.resolution[0], 2 * g.resolution[1], 2 * g.resolution[2]};
  QuadratureResult q1, q2;
  if (o.hopf_only) {
    q1 = hopf_total_energy(g, o.cfg.time);
    q2 = hopf_total_energy(doubled, o.cfg.time);
  } else {
    const auto spec = o.cfg.field_spec();
    q1 = total_energy(spec, g, o.cfg.time);
    q2 = total_energy(spec, doubled, o.cfg.time);
  }
  const double change = std::abs(q2.value - q1.value) / q2.value;
  json j;
  j["config"] = o.cfg.to_json();
  j["hopfOnly"] = o.hopf_only;
  j["energy"] = quadrature_json(q1);
  j["doubledBox"] = quadrature_json(q2);
  j["relativeChange"] = change;
  j["tailTrusted"] = q1.tail_trusted && q2.tail_trusted;
  write_json(out_path(o.cfg, "energy.json"), j);
  out << "energy " << format_double(q1.value) << " (R=" << format_double(q1.box_radius) << "), "
      << format_double(q2.value) << " (R=" << format_double(q2.box_radius) << "), relative change "
      << format_double(change) << (j["tailTrusted"].get<bool>() ? "" : " [tail estimate untrusted]") << '\n';
  return kOk;
}

int cmd_helicity(const Options& o, std::ostream& out) {
  const auto spec = o.cfg.field_spec();
  const auto g = o.cfg.grid();
  const Helicity h0 = helicity(spec, g, o.cfg.time);
  json j;
  j["config"] = o.cfg.to_json();
  j["magnetic"] = h0.magnetic;
  j["electric"] = h0.electric;
  out << "t=" << format_double(o.cfg.time) << " Hm " << format_double(h0.magnetic) << " He "
      << format_double(h0.electric) << '\n';
  if (o.compare_time) {
    const Helicity h1 = helicity(spec, g, *o.compare_time);
    j["compareTime"] = *o.compare_time;
    j["compareMagnetic"] = h1.magnetic;
    j["compareElectric"] = h1.electric;
    j["relativeChangeMagnetic"] = std::abs(h1.magnetic - h0.magnetic) / std::abs(h0.magnetic);
    j["relativeChangeElectric"] = std::abs(h1.electric - h0.electric) / std::abs(h0.electric);
    out << "t=" << format_double(*o.compare_time) << " Hm " << format_double(h1.magnetic) << " He "
        << format_double(h1.electric) << '\n';
  }
  write_json(out_path(o.cfg, "helicity.json"), j);
  return kOk;
}

int cmd_scan(const Options& o, std::ostream& out, std::ostream& err) {
  const auto spec = o.cfg.field_spec();
  const auto eps = parse_list(o.epsilons_text);
  const auto scan = epsilon_scan(spec.h(), eps, o.cfg.grid(), o.cfg.time, o.cfg.trace_params());
  json j;
  j["config"] = o.cfg.to_json();
  j["rows"] = json::array();
  for (const auto& row : scan.rows) {
    for (const auto& d : row.diagnostics) err << "diagnostic (eps=" << row.epsilon << "): " << d << '\n';
    json r = report_json(row.report);
    r["epsilon"] = row.epsilon;
    j["rows"].push_back(r);
    out << "epsilon " << format_double(row.epsilon) << ": " << to_string(signature(row.report))
        << (row.open_curves ? " (+" + std::to_string(row.open_curves) + " open)" : "") << '\n';
  }
  j["stableFrom"] = scan.stable_from ? json(scan.rows[*scan.stable_from].epsilon) : json();
  write_json(out_path(o.cfg, "scan.json"), j);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knotted optical vortices in null Maxwell fields"};
  app.name(args.empty() ? "knotfield" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  Options o;

  auto* presets = app.add_subcommand("presets", "List built-in link polynomials");
  auto* sample = app.add_subcommand("sample", "Evaluate the field at one event");
  auto* vortex = app.add_subcommand("vortex", "Extract vortex curves (curves.csv, curves.json, curves.obj)");
  auto* topology = app.add_subcommand("topology", "Extract curves and report link invariants (report.json)");
  auto* verify = app.add_subcommand("verify", "Run pointwise identity and residual checks (verify.json)");
  auto* slice = app.add_subcommand("slice", "Energy-density slice as PGM + CSV");
  auto* energy = app.add_subcommand("energy", "Total energy at the box and the doubled box (energy.json)");
  auto* heli = app.add_subcommand("helicity", "Magnetic and electric helicity (helicity.json)");
  auto* scan = app.add_subcommand("scan", "Topology over a descending list of epsilons (scan.json)");
  for (auto* s : {sample, vortex, topology, verify, slice, energy, heli, scan}) add_common(s, o);
  sample->add_option("--event", o.event_text, "T,X,Y,Z")->required();
  slice->add_option("--plane", o.plane, "xy, xz or yz");
  slice->add_option("--offset", o.offset, "Plane offset along the normal axis");
  slice->add_flag("--hopf", o.hopf_only, "Slice the unmodified Hopf field");
  energy->add_flag("--hopf", o.hopf_only, "Integrate the unmodified Hopf field");
  heli->add_option("--compare-time", o.compare_time, "Second time for a conservation comparison");
  scan->add_option("--epsilons", o.epsilons_text, "Descending comma-separated epsilons");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("knotfield");
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsageError;
  }

  try {
    if (*presets) return cmd_presets(out);
    finalize(o);
    if (*sample) return cmd_sample(o, out);
    if (*vortex) return cmd_vortex(o, out, err);
    if (*topology) return cmd_topology(o, out, err);
    if (*verify) return cmd_verify(o, out);
    if (*slice) return cmd_slice(o, out);
    if (*energy) return cmd_energy(o, out);
    if (*heli) return cmd_helicity(o, out);
    if (*scan) return cmd_scan(o, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  }
  return kUsageError;
}

}  // namespace knotfield::cli
