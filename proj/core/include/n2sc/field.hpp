#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace n2sc {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Element of Q(i, sqrt(2)): c0 + c1*i + c2*sqrt(2) + c3*i*sqrt(2).
// This is the smallest exact field containing every scalar that shows up:
// i in the inversion map and the infinity normal forms, sqrt(2) in the
// homogeneous/nonhomogeneous change of odd coordinates.
class FieldScalar {
 public:
  FieldScalar() = default;
  FieldScalar(long v) : c_{Rational(v), 0, 0, 0} {}  // NOLINT(implicit)
  FieldScalar(const Rational& v) : c_{v, 0, 0, 0} {} // NOLINT(implicit)
  FieldScalar(Rational r0, Rational r1, Rational r2, Rational r3)
      : c_{std::move(r0), std::move(r1), std::move(r2), std::move(r3)} {}

  static FieldScalar i() { return FieldScalar(0, 1, 0, 0); }
  static FieldScalar sqrt2() { return FieldScalar(0, 0, 1, 0); }
  static FieldScalar half_sqrt2() { return FieldScalar(0, 0, Rational(1, 2), 0); }

  const Rational& comp(int k) const { return c_[k]; }
  Rational& comp(int k) { return c_[k]; }

  bool is_zero() const {
    return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0;
  }
  bool is_rational() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

  FieldScalar operator-() const { return {-c_[0], -c_[1], -c_[2], -c_[3]}; }
  FieldScalar operator+(const FieldScalar& o) const {
    return {c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2], c_[3] + o.c_[3]};
  }
  FieldScalar operator-(const FieldScalar& o) const {
    return {c_[0] - o.c_[0], c_[1] - o.c_[1], c_[2] - o.c_[2], c_[3] - o.c_[3]};
  }
  FieldScalar operator*(const FieldScalar& o) const;
  FieldScalar operator/(const FieldScalar& o) const { return *this * o.inverse(); }
  FieldScalar& operator+=(const FieldScalar& o) { return *this = *this + o; }
  FieldScalar& operator-=(const FieldScalar& o) { return *this = *this - o; }
  FieldScalar& operator*=(const FieldScalar& o) { return *this = *this * o; }

  bool operator==(const FieldScalar& o) const {
    return c_[0] == o.c_[0] && c_[1] == o.c_[1] && c_[2] == o.c_[2] &&
           c_[3] == o.c_[3];
  }
  bool operator!=(const FieldScalar& o) const { return !(*this == o); }

  // Throws NonInvertible on zero.
  FieldScalar inverse() const;

  // Exact sign of the real part c0 + c2*sqrt(2): -1, 0, +1.
  int real_sign() const { return sign_of_quadratic(c_[0], c_[2]); }
  int imag_sign() const { return sign_of_quadratic(c_[1], c_[3]); }

  // Square root when the value is a perfect square in Q(i, sqrt(2)).
  std::optional<FieldScalar> sqrt_perfect() const;

  std::string str() const;

 private:
  static int sign_of_quadratic(const Rational& p, const Rational& q);
  Rational c_[4]{0, 0, 0, 0};
};

inline FieldScalar operator*(const Rational& r, const FieldScalar& s) {
  return FieldScalar(r) * s;
}

}  // namespace n2sc
