#include "knotfield/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>

namespace knotfield {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_curves_csv(std::ostream& out, const VortexSet& vs) {
  out << "component_id,vertex_index,x,y,z\n";
  for (std::size_t c = 0; c < vs.curves.size(); ++c) {
    const auto& v = vs.curves[c].vertices;
    for (std::size_t i = 0; i < v.size(); ++i)
      out << c << ',' << i << ',' << format_double(v[i].x()) << ',' << format_double(v[i].y()) << ','
          << format_double(v[i].z()) << '\n';
  }
}

void write_curves_obj(std::ostream& out, const VortexSet& vs) {
  out << "# vortex curves, t = " << format_double(vs.time) << "\n";
  for (const auto& c : vs.curves)
    for (const auto& p : c.vertices)
      out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z())
          << '\n';
  std::size_t base = 1;
  for (const auto& c : vs.curves) {
    if (c.vertices.size() < 2) {
      base += c.vertices.size();
      continue;
    }
    out << 'l';
    for (std::size_t i = 0; i < c.vertices.size(); ++i) out << ' ' << base + i;
    if (c.closed) out << ' ' << base;
    out << '\n';
    base += c.vertices.size();
  }
}

nlohmann::json curves_json(const VortexSet& vs) {
  nlohmann::json j;
  j["time"] = vs.time;
  j["epsilon"] = vs.epsilon;
  j["curves"] = nlohmann::json::array();
  for (std::size_t c = 0; c < vs.curves.size(); ++c)
    j["curves"].push_back({{"component_id", c},
                           {"closed", vs.curves[c].closed},
                           {"vertices", vs.curves[c].vertices.size()},
                           {"arc_length", vs.curves[c].arc_length}});
  j["diagnostics"] = vs.diagnostics;
  return j;
}

namespace {

nlohmann::json nullable(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

}  // namespace

nlohmann::json report_json(const TopologyReport& r) {
  nlohmann::json j;
  j["componentCount"] = r.component_count;
  j["time"] = r.time;
  j["epsilon"] = r.epsilon;
  j["closedCurves"] = r.closed_curves;
  j["openCurves"] = r.open_curves;
  nlohmann::json lk = nlohmann::json::array(), lkr = nlohmann::json::array();
  for (std::size_t i = 0; i < r.linking.size(); ++i) {
    nlohmann::json row = nlohmann::json::array(), rrow = nlohmann::json::array();
    for (std::size_t k = 0; k < r.linking[i].size(); ++k) {
      row.push_back(nullable(r.linking[i][k]));
      rrow.push_back(i == k ? nlohmann::json() : nlohmann::json(r.linking_rounded[i][k]));
    }
    lk.push_back(row);
    lkr.push_back(rrow);
  }
  j["linkingMatrix"] = lkr;
  j["linkingMatrixRaw"] = lk;
  j["windings"] = nlohmann::json::array();
  for (const auto& w : r.windings) {
    if (!w) {
      j["windings"].push_back(nullptr);
      continue;
    }
    j["windings"].push_back({{"alpha", w->alpha},
                             {"beta", w->beta},
                             {"alphaRaw", w->raw_alpha},
                             {"betaRaw", w->raw_beta},
                             {"alphaResidual", w->residual_alpha()},
                             {"betaResidual", w->residual_beta()}});
  }
  j["maxRoundingDeviation"] = r.max_rounding_deviation;
  j["integersReliable"] = r.integers_reliable();
  j["warnings"] = r.warnings;
  return j;
}

nlohmann::json quadrature_json(const QuadratureResult& q) {
  return {{"value", q.value},
          {"boxRadius", q.box_radius},
          {"resolution", q.resolution},
          {"tailEstimate", nullable(q.tail_estimate)},
          {"decayExponent", q.decay_exponent},
          {"tailTrusted", q.tail_trusted},
          {"minDensity", q.min_density}};
}

nlohmann::json residual_json(const ResidualReport& r) {
  return {{"divE", r.div_e}, {"divB", r.div_b}, {"faraday", r.faraday}, {"ampere", r.ampere}, {"step", r.step}};
}

SlicePlane parse_plane(const std::string& name) {
  if (name == "xy") return {0, 1, 2, name};
  if (name == "xz") return {0, 2, 1, name};
  if (name == "yz") return {1, 2, 0, name};
  throw std::invalid_argument("plane must be one of xy, xz, yz (got '" + name + "')");
}

namespace {

template <class Density>
Slice sample_plane(const Box& box, const SlicePlane& plane, double offset, double t, int res,
                   const Density& density) {
  if (res < 2) throw std::invalid_argument("slice resolution must be at least 2");
  Slice s;
  s.plane = plane;
  s.offset = offset;
  s.width = s.height = res;
  for (int i = 0; i < res; ++i) {
    const double f = double(i) / (res - 1);
    s.x1.push_back(box.lo[plane.axis_a] + f * (box.hi[plane.axis_a] - box.lo[plane.axis_a]));
    s.x2.push_back(box.lo[plane.axis_b] + f * (box.hi[plane.axis_b] - box.lo[plane.axis_b]));
  }
  s.u.resize(std::size_t(res) * res);
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i) {
      Vec3 p;
      p[plane.axis_a] = s.x1[i];
      p[plane.axis_b] = s.x2[j];
      p[plane.normal] = offset;
      s.u[std::size_t(j) * res + i] = density(Event{t, p.x(), p.y(), p.z()});
    }
  return s;
}

}  // namespace

Slice sample_slice(const KnottedFieldSpec& spec, const Box& box, const SlicePlane& plane,
                   double offset, double t, int res) {
  return sample_plane(box, plane, offset, t, res,
                      [&](const Event& e) { return energy_density(spec, e); });
}

Slice sample_hopf_slice(const Box& box, const SlicePlane& plane, double offset, double t, int res) {
  return sample_plane(box, plane, offset, t, res,
                      [](const Event& e) { return hopf_field(e).energy_density; });
}

PgmMapping write_slice_pgm(std::ostream& out, const Slice& s) {
  PgmMapping m;
  m.log_min = std::numeric_limits<double>::infinity();
  m.log_max = -std::numeric_limits<double>::infinity();
  for (double u : s.u) {
    if (u > 0.0) {
      const double l = std::log10(u);
      m.log_min = std::min(m.log_min, l);
      m.log_max = std::max(m.log_max, l);
    } else {
      ++m.zero_pixels;
    }
  }
  if (!std::isfinite(m.log_min)) m.log_min = m.log_max = 0.0;
  const double span = m.log_max - m.log_min;
  out << "P5\n" << s.width << ' ' << s.height << "\n65535\n";
  for (int row = 0; row < s.height; ++row) {
    const int j = s.height - 1 - row;
    for (int i = 0; i < s.width; ++i) {
      const double u = s.u[std::size_t(j) * s.width + i];
      std::uint16_t px = 0;
      if (u > 0.0)
        px = span > 0.0 ? std::uint16_t(std::lround((std::log10(u) - m.log_min) / span * 65535.0)) : 65535;
      const char bytes[2] = {char(px >> 8), char(px & 0xFF)};
      out.write(bytes, 2);
    }
  }
  return m;
}

void write_slice_csv(std::ostream& out, const Slice& s) {
  out << "i,j,x1,x2,u\n";
  for (int j = 0; j < s.height; ++j)
    for (int i = 0; i < s.width; ++i)
      out << i << ',' << j << ',' << format_double(s.x1[i]) << ',' << format_double(s.x2[j]) << ','
          << format_double(s.u[std::size_t(j) * s.width + i]) << '\n';
}

PgmImage read_pgm16(std::istream& in) {
  PgmImage img;
  std::string magic;
  in >> magic >> img.width >> img.height >> img.maxval;
  if (magic != "P5" || img.width <= 0 || img.height <= 0 || img.maxval <= 255)
    throw std::runtime_error("not a 16-bit binary PGM");
  in.get();
  img.pixels.resize(std::size_t(img.width) * img.height);
  for (auto& px : img.pixels) {
    unsigned char b[2];
    if (!in.read(reinterpret_cast<char*>(b), 2)) throw std::runtime_error("truncated PGM data");
    px = std::uint16_t((b[0] << 8) | b[1]);
  }
  return img;
}

}  // namespace knotfield
