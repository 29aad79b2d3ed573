#include "knotfield/linkpoly.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace knotfield {

ParseError::ParseError(int line, const std::string& what)
    : std::invalid_argument("line " + std::to_string(line) + ": " + what), line_(line) {}

void validate(const NewtonPair& pair) {
  if (pair.p < 1 || pair.q < 1)
    throw ValidationError("Newton pair entries must be positive integers");
  if (std::gcd(pair.p, pair.q) != 1)
    throw ValidationError("Newton pair (" + std::to_string(pair.p) + "," + std::to_string(pair.q) +
                          ") is not coprime: gcd = " + std::to_string(std::gcd(pair.p, pair.q)));
}

void BivariatePolynomial::add_term(int j, int k, cplx c) {
  if (j < 0 || k < 0) throw std::invalid_argument("negative exponent in polynomial term");
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.try_emplace({j, k}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

cplx BivariatePolynomial::coefficient(int j, int k) const {
  auto it = terms_.find({j, k});
  return it == terms_.end() ? cplx(0.0) : it->second;
}

int BivariatePolynomial::max_v_degree() const {
  int m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, e.first);
  return m;
}

int BivariatePolynomial::max_w_degree() const {
  int m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, e.second);
  return m;
}

cplx BivariatePolynomial::operator()(cplx v, cplx w) const { return eval_poly(*this, v, w); }

void validate_link_polynomial(const BivariatePolynomial& h) {
  if (h.empty()) throw ValidationError("zero polynomial does not define a link");
  if (h.has_constant_term())
    throw ValidationError(
        "link polynomial must have a vanishing constant term (found a (0,0) coefficient)");
}

BivariatePolynomial torus_polynomial(const NewtonPair& pair) {
  validate(pair);
  BivariatePolynomial h;
  h.add_term(pair.q, 0, std::pow(std::sqrt(2.0), pair.q));
  h.add_term(0, pair.p, -std::pow(std::sqrt(2.0), pair.p));
  return h;
}

namespace {

// Powers 0..n of x, built by repeated multiplication.
template <class T>
std::vector<T> powers(const T& x, int n) {
  std::vector<T> p;
  p.reserve(n + 1);
  p.emplace_back(1.0);
  for (int i = 1; i <= n; ++i) p.push_back(p.back() * x);
  return p;
}

}  // namespace

Jet eval_poly(const BivariatePolynomial& h, const Jet& v, const Jet& w) {
  const auto vp = powers(v, h.max_v_degree());
  const auto wp = powers(w, h.max_w_degree());
  Jet acc(0.0);
  for (const auto& [e, c] : h.terms()) acc += c * (vp[e.first] * wp[e.second]);
  return acc;
}

cplx eval_poly(const BivariatePolynomial& h, cplx v, cplx w) {
  // Small fixed buffers cover every shipped preset; fall back to vectors beyond.
  const int nv = h.max_v_degree(), nw = h.max_w_degree();
  if (nv < 32 && nw < 32) {
    cplx vp[32], wp[32];
    vp[0] = wp[0] = 1.0;
    for (int i = 1; i <= nv; ++i) vp[i] = vp[i - 1] * v;
    for (int i = 1; i <= nw; ++i) wp[i] = wp[i - 1] * w;
    cplx acc = 0.0;
    for (const auto& [e, c] : h.terms()) acc += c * (vp[e.first] * wp[e.second]);
    return acc;
  }
  const auto vp = powers(v, nv);
  const auto wp = powers(w, nw);
  cplx acc = 0.0;
  for (const auto& [e, c] : h.terms()) acc += c * (vp[e.first] * wp[e.second]);
  return acc;
}

BivariatePolynomial d_dv(const BivariatePolynomial& h) {
  BivariatePolynomial out;
  for (const auto& [e, c] : h.terms())
    if (e.first > 0) out.add_term(e.first - 1, e.second, c * double(e.first));
  return out;
}

BivariatePolynomial d_dw(const BivariatePolynomial& h) {
  BivariatePolynomial out;
  for (const auto& [e, c] : h.terms())
    if (e.second > 0) out.add_term(e.first, e.second - 1, c * double(e.second));
  return out;
}

BivariatePolynomial antiderivative_v(const BivariatePolynomial& h) {
  BivariatePolynomial out;
  for (const auto& [e, c] : h.terms()) out.add_term(e.first + 1, e.second, c / double(e.first + 1));
  return out;
}

BivariatePolynomial parse_poly_file(const std::string& text, bool allow_constant) {
  BivariatePolynomial h;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long j = 0, k = 0;
    double re = 0.0, im = 0.0;
    std::string extra;
    if (!(fields >> j >> k >> re >> im))
      throw ParseError(lineno, "expected four fields `j k re im`: '" + line + "'");
    if (fields >> extra) throw ParseError(lineno, "unexpected trailing field '" + extra + "'");
    if (j < 0 || k < 0 || j > 1000 || k > 1000)
      throw ParseError(lineno, "exponents must be nonnegative integers no larger than 1000");
    if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError(lineno, "non-finite coefficient");
    h.add_term(int(j), int(k), cplx(re, im));
  }
  if (h.empty()) throw ValidationError("zero polynomial does not define a link");
  if (!allow_constant && h.has_constant_term())
    throw ValidationError(
        "link polynomial must have a vanishing constant term (found a (0,0) coefficient)");
  return h;
}

BivariatePolynomial load_poly_file(const std::string& path, bool allow_constant) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open polynomial file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_poly_file(ss.str(), allow_constant);
}

std::string format_poly_file(const BivariatePolynomial& h) {
  std::string out = "# j k re im\n";
  char buf[128];
  for (const auto& [e, c] : h.terms()) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g\n", e.first, e.second, c.real(), c.imag());
    out += buf;
  }
  return out;
}

namespace {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string monomial(int j, int k) {
  std::string s;
  auto var = [&](const char* name, int n) {
    if (n == 0) return;
    if (!s.empty()) s += " ";
    s += name;
    if (n > 1) s += "^" + std::to_string(n);
  };
  var("v", j);
  var("w", k);
  return s;
}

}  // namespace

std::string to_string(const BivariatePolynomial& h) {
  if (h.empty()) return "0";
  std::string out;
  // Ascending total degree, ties by falling power of v.
  std::vector<std::pair<Exponent, cplx>> terms(h.terms().begin(), h.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    const int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
    if (da != db) return da < db;
    return a.first.first > b.first.first;
  });
  bool first = true;
  for (const auto& [e, c] : terms) {
    const std::string mono = monomial(e.first, e.second);
    std::string coef;
    bool negative = false;
    if (c.imag() == 0.0) {
      negative = c.real() < 0.0;
      const double mag = std::abs(c.real());
      if (mag != 1.0 || mono.empty()) coef = format_real(mag);
    } else if (c.real() == 0.0) {
      negative = c.imag() < 0.0;
      const double mag = std::abs(c.imag());
      coef = (mag == 1.0 ? std::string() : format_real(mag)) + "i";
    } else {
      coef = "(" + format_real(c.real()) + (c.imag() < 0 ? " - " : " + ") +
             format_real(std::abs(c.imag())) + "i)";
    }
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    out += coef;
    if (!coef.empty() && !mono.empty()) out += " ";
    out += mono;
    first = false;
  }
  return out;
}

namespace {

BivariatePolynomial make(std::initializer_list<std::tuple<int, int, double>> terms) {
  BivariatePolynomial h;
  for (const auto& [j, k, c] : terms) h.add_term(j, k, c);
  return h;
}

Preset torus_preset(int p, int q) {
  return {"torus-" + std::to_string(p) + "-" + std::to_string(q), torus_polynomial({p, q}),
          "(" + std::to_string(p) + "," + std::to_string(q) + ") torus knot or link",
          "single Newton pair: sqrt(2)^q v^q - sqrt(2)^p w^p"};
}

const char* kPresetNames =
    "unknot-circle, unknot-line, trefoil, hopf-link, cable-2-3-3-2, torus-P-Q";

}  // namespace

Preset preset(const std::string& name) {
  if (name == "unknot-circle")
    return {name, make({{1, 0, 1.0}}), "unknot: the unit circle in the z = 0 plane at t = 0",
            "h(v,w) = v"};
  if (name == "unknot-line")
    return {name, make({{0, 1, 1.0}}), "unknot through the pole: the z-axis", "h(v,w) = w"};
  if (name == "trefoil") {
    auto p = torus_preset(2, 3);
    p.name = name;
    p.description = "(2,3) torus knot (trefoil)";
    return p;
  }
  if (name == "hopf-link")
    return {name, make({{2, 0, 1.0}, {0, 2, 1.0}}), "Hopf link, factors v + iw and v - iw",
            "polynomial of the Hopf link, h1 = v^2 + w^2"};
  if (name == "cable-2-3-3-2")
    return {name,
            make({{0, 6, 1.0},
                  {3, 4, -3.0},
                  {6, 2, 3.0},
                  {8, 2, -6.0},
                  {9, 0, -1.0},
                  {11, 0, -2.0},
                  {13, 0, -1.0}}),
            "cable knot with Newton pairs (2,3) and (3,2)",
            "h2 = w^6 - 3w^4v^3 + 3w^2v^6 - 6w^2v^8 - v^9 - 2v^11 - v^13"};
  if (name.rfind("torus-", 0) == 0) {
    int p = 0, q = 0;
    char tail = 0;
    if (std::sscanf(name.c_str(), "torus-%d-%d%c", &p, &q, &tail) == 2) return torus_preset(p, q);
  }
  throw std::invalid_argument("unknown preset '" + name + "'; available: " + kPresetNames);
}

std::vector<Preset> list_presets() {
  return {preset("unknot-circle"), preset("unknot-line"), preset("trefoil"),
          preset("hopf-link"),     preset("cable-2-3-3-2"), preset("torus-3-4")};
}

}  // namespace knotfield
