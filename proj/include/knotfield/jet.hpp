#pragma once

// First-order forward-mode jets over complex scalars.
//
// A Jet carries a complex value together with its four first partial
// derivatives with respect to the spacetime coordinates. The partials are
// always ordered (d/dt, d/dx, d/dy, d/dz); every file format and every
// gradient extracted from a jet follows this order.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace knotfield {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

/// A spacetime point in natural units (c = 1).
struct Event {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double r2() const { return x * x + y * y + z * z; }
  Vec3 spatial() const { return {x, y, z}; }
  bool finite() const {
    return std::isfinite(t) && std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

std::string to_string(const Event& e);

enum Axis : int { kT = 0, kX = 1, kY = 2, kZ = 3 };

struct Jet {
  cplx value{};
  std::array<cplx, 4> d{};  // (d/dt, d/dx, d/dy, d/dz)

  Jet() = default;
  Jet(cplx v) : value(v) {}  // NOLINT: constants promote implicitly
  Jet(double v) : value(v) {}  // NOLINT
  Jet(cplx v, const std::array<cplx, 4>& partials) : value(v), d(partials) {}

  static Jet variable(double v, Axis axis) {
    Jet j(v);
    j.d[axis] = 1.0;
    return j;
  }

  /// Spatial gradient (d/dx, d/dy, d/dz).
  CVec3 grad() const { return {d[kX], d[kY], d[kZ]}; }
  cplx dt() const { return d[kT]; }

  Jet& operator+=(const Jet& b) {
    value += b.value;
    for (int i = 0; i < 4; ++i) d[i] += b.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& b) {
    value -= b.value;
    for (int i = 0; i < 4; ++i) d[i] -= b.d[i];
    return *this;
  }
  Jet& operator*=(const Jet& b) {
    for (int i = 0; i < 4; ++i) d[i] = d[i] * b.value + value * b.d[i];
    value *= b.value;
    return *this;
  }
  Jet& operator*=(cplx s) {
    value *= s;
    for (auto& di : d) di *= s;
    return *this;
  }
  Jet& operator/=(const Jet& b);
};

inline Jet operator-(const Jet& a) {
  Jet r = a;
  r *= cplx(-1.0);
  return r;
}
inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator*(Jet a, cplx s) { return a *= s; }
inline Jet operator*(cplx s, Jet a) { return a *= s; }
inline Jet operator*(Jet a, double s) { return a *= cplx(s); }
inline Jet operator*(double s, Jet a) { return a *= cplx(s); }

/// Thrown when a jet is divided by one whose value is exactly zero.
class JetDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline Jet& Jet::operator/=(const Jet& b) {
  if (b.value == cplx(0.0)) throw JetDomainError("jet division by zero");
  const cplx inv = 1.0 / b.value;
  const cplx q = value * inv;
  for (int i = 0; i < 4; ++i) d[i] = (d[i] - q * b.d[i]) * inv;
  value = q;
  return *this;
}
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }

/// Non-negative integer power by repeated squaring.
inline Jet pow_int(const Jet& a, int n) {
  if (n < 0) throw std::domain_error("pow_int: negative exponent");
  Jet result(1.0);
  Jet base = a;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

inline Jet conj(const Jet& a) {
  Jet r(std::conj(a.value));
  for (int i = 0; i < 4; ++i) r.d[i] = std::conj(a.d[i]);
  return r;
}

struct CoordinateJets {
  Jet t, x, y, z;
};

inline CoordinateJets coordinate_jets(const Event& e) {
  return {Jet::variable(e.t, kT), Jet::variable(e.x, kX), Jet::variable(e.y, kY),
          Jet::variable(e.z, kZ)};
}

// Bilinear (non-conjugating) dot product; Eigen's dot() conjugates its left operand.
inline cplx bilinear_dot(const CVec3& a, const CVec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Cross product without conjugation. Eigen's cross() conjugates complex operands.
inline CVec3 bilinear_cross(const CVec3& a, const CVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace knotfield
