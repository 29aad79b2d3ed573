#pragma once

// Sparse complex polynomials h(v, w) whose zero sets, intersected with a small
// 3-sphere, are algebraic links.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "knotfield/jet.hpp"

namespace knotfield {

/// Coprime positive exponents (p, q) of one Puiseux term w ~ v^(q/p).
struct NewtonPair {
  int p = 1;
  int q = 1;
};

void validate(const NewtonPair& pair);

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

using Exponent = std::pair<int, int>;  // (power of v, power of w)

class BivariatePolynomial {
 public:
  BivariatePolynomial() = default;

  /// Adds c * v^j * w^k, merging with an existing term; zero sums are dropped.
  void add_term(int j, int k, cplx c);

  /// Terms in lexicographic (j, k) order.
  const std::map<Exponent, cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  cplx coefficient(int j, int k) const;
  bool has_constant_term() const { return terms_.count({0, 0}) > 0; }
  int max_v_degree() const;
  int max_w_degree() const;

  cplx operator()(cplx v, cplx w) const;

  bool operator==(const BivariatePolynomial&) const = default;

 private:
  std::map<Exponent, cplx> terms_;
};

/// Throws ValidationError for the zero polynomial or a nonzero constant term.
void validate_link_polynomial(const BivariatePolynomial& h);

/// sqrt(2)^q v^q - sqrt(2)^p w^p.
BivariatePolynomial torus_polynomial(const NewtonPair& pair);

/// Evaluates h at jet arguments; terms are summed in lexicographic (j, k) order.
Jet eval_poly(const BivariatePolynomial& h, const Jet& v, const Jet& w);
cplx eval_poly(const BivariatePolynomial& h, cplx v, cplx w);

BivariatePolynomial d_dv(const BivariatePolynomial& h);
BivariatePolynomial d_dw(const BivariatePolynomial& h);

/// Formal antiderivative in v with zero integration constant.
BivariatePolynomial antiderivative_v(const BivariatePolynomial& h);

/// Reads the `j k re im` text format. `#` starts a comment line.
BivariatePolynomial parse_poly_file(const std::string& text, bool allow_constant = false);
BivariatePolynomial load_poly_file(const std::string& path, bool allow_constant = false);

/// Writes the same text format with 17 significant digits.
std::string format_poly_file(const BivariatePolynomial& h);

/// Human-readable form, e.g. "v^2 + w^2".
std::string to_string(const BivariatePolynomial& h);

struct Preset {
  std::string name;
  BivariatePolynomial polynomial;
  std::string description;
  std::string provenance;
};

/// Known names: unknot-circle, unknot-line, trefoil, hopf-link, cable-2-3-3-2,
/// torus-P-Q (any coprime P, Q >= 1). Unknown names throw with the listing.
Preset preset(const std::string& name);
std::vector<Preset> list_presets();

}  // namespace knotfield
