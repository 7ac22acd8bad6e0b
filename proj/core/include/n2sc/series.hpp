#pragma once

#include <compare>
#include <map>
#include <string>

#include "n2sc/grassmann.hpp"

namespace n2sc {

enum class Kind { AtZero, AtInfinity };

// Exponent windows use a saturating sentinel for "exact at every degree"
// (finitely supported series known in full).
constexpr int kEntire = 1 << 20;
inline int clamp_deg(long v) {
  if (v >= kEntire) return kEntire;
  if (v <= -kEntire) return -kEntire;
  return static_cast<int>(v);
}
inline int add_deg(int a, int b) {
  if (a >= kEntire || b >= kEntire) return kEntire;
  if (a <= -kEntire || b <= -kEntire) return -kEntire;
  return clamp_deg(static_cast<long>(a) + b);
}

// Truncated element of R[[x,x^-1]][phi^+,phi^-] over a Grassmann algebra.
//
// AtZero:      support lies in [lo, +inf); coefficients with k <= hi are
//              exact, the rest unknown (not zero).
// AtInfinity:  support lies in (-inf, hi]; coefficients with k >= lo exact.
//
// Coefficients are written to the left of the phi-monomial; that convention
// fixes all signs below.
class SuperSeries {
 public:
  struct Key {
    int k;
    int fp, fm;  // phi^+ / phi^- exponents, 0 or 1
    auto operator<=>(const Key&) const = default;
  };

  SuperSeries() : kind_(Kind::AtZero), L_(4), lo_(0), hi_(kEntire) {}
  SuperSeries(Kind kind, int gens, int lo, int hi)
      : kind_(kind), L_(gens), lo_(lo), hi_(hi) {}

  static SuperSeries zero(Kind kind, int gens) {
    return SuperSeries(kind, gens,
                       kind == Kind::AtZero ? 0 : -kEntire,
                       kind == Kind::AtZero ? kEntire : 0);
  }
  static SuperSeries monomial(Kind kind, int gens, int k, int fp, int fm,
                              const GrassmannElement& coef);
  static SuperSeries constant(Kind kind, const GrassmannElement& coef) {
    return monomial(kind, coef.gens(), 0, 0, 0, coef);
  }

  Kind kind() const { return kind_; }
  int gens() const { return L_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  bool entire() const {
    return kind_ == Kind::AtZero ? hi_ >= kEntire : lo_ <= -kEntire;
  }
  const std::map<Key, GrassmannElement>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  GrassmannElement coeff(int k, int fp, int fm) const;
  void set_window(int lo, int hi);
  void add_term(int k, int fp, int fm, const GrassmannElement& c);
  // Raise the support bound to the stored support; always sound because
  // coefficients inside the exact window are stored in full.
  void tighten();

  // Parity of the full expression (coefficient parity + phi-degree).
  std::optional<Parity> parity() const;

  SuperSeries operator-() const;
  SuperSeries operator+(const SuperSeries& o) const;
  SuperSeries operator-(const SuperSeries& o) const;
  SuperSeries operator*(const SuperSeries& o) const;
  SuperSeries& operator+=(const SuperSeries& o) { return *this = *this + o; }
  SuperSeries& operator-=(const SuperSeries& o) { return *this = *this - o; }
  bool operator==(const SuperSeries& o) const {
    return kind_ == o.kind_ && L_ == o.L_ && t_ == o.t_;
  }

  // Left multiplication by a Grassmann constant.
  SuperSeries scaled_left(const GrassmannElement& c) const;
  SuperSeries scaled(const FieldScalar& s) const;

  SuperSeries ddx() const;
  SuperSeries dphi_plus() const;   // left derivative
  SuperSeries dphi_minus() const;  // left derivative

  // Agreement on the intersection of the exact windows.
  bool agrees_with(const SuperSeries& o) const;

  // Shrink the exact window (AtZero lowers hi; AtInfinity raises lo).
  SuperSeries truncated(int bound) const;

  std::string str() const;

 private:
  Kind kind_;
  int L_;
  int lo_, hi_;
  std::map<Key, GrassmannElement> t_;
};

SuperSeries ss_dplus(const SuperSeries& a);   // d/dphi+ + phi- d/dx
SuperSeries ss_dminus(const SuperSeries& a);  // d/dphi- + phi+ d/dx

// Inverse of a series whose extreme pure-x coefficient has invertible body.
SuperSeries ss_inv(const SuperSeries& a);
SuperSeries ss_pow(const SuperSeries& a, long n);

// Coordinate triple (x~, phi~+, phi~-): even, odd, odd components.
struct CoordMap {
  SuperSeries x, fp, fm;

  Kind kind() const { return x.kind(); }
  int gens() const { return x.gens(); }
  bool operator==(const CoordMap& o) const {
    return x == o.x && fp == o.fp && fm == o.fm;
  }
  bool agrees_with(const CoordMap& o) const {
    return x.agrees_with(o.x) && fp.agrees_with(o.fp) && fm.agrees_with(o.fm);
  }
  CoordMap truncated(int bound) const {
    return {x.truncated(bound), fp.truncated(bound), fm.truncated(bound)};
  }
};

// Numeric point (z, theta+, theta-).
struct Point {
  GrassmannElement z, tp, tm;
  bool operator==(const Point& o) const {
    return z == o.z && tp == o.tp && tm == o.tm;
  }
};

// The identity coordinate triple (x, phi+, phi-), exactly polynomial.
CoordMap identity_map(int gens);

// The shift s_(z,t+,t-): (x - z - phi+ t- - phi- t+, phi+ - t+, phi- - t-).
CoordMap shift_map(const Point& p);

// Substitute a series/triple into one outer component (formal composition).
SuperSeries ss_subst(const SuperSeries& outer, const CoordMap& inner);
CoordMap ss_compose(const CoordMap& outer, const CoordMap& inner);

// Evaluate at a numeric point; exact when the series is entire or the tail
// dies by nilpotency of z.
GrassmannElement ss_eval(const SuperSeries& s, const Point& p);
Point ss_eval(const CoordMap& m, const Point& p);

// x -> 1/x, phi -> i phi / x (and the inverse substitution); flips the kind.
SuperSeries ss_subst_inversion(const SuperSeries& s, bool inverse);
CoordMap ss_subst_inversion(const CoordMap& m, bool inverse);

// The map I itself, on points and as a series triple.
Point ss_inversion_I(const Point& p);
Point ss_inversion_I_inv(const Point& p);
CoordMap inversion_map(int gens);      // (1/x, i phi+/x, i phi-/x), AtInfinity
CoordMap inversion_map_inv(int gens);  // (1/x, -i phi+/x, -i phi-/x)

}  // namespace n2sc
