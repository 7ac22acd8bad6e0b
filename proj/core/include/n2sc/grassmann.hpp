#pragma once

#include <cstdint>
#include <optional>
#include <vector>
#include <string>

#include "n2sc/field.hpp"

namespace n2sc {

enum class Parity : int { Even = 0, Odd = 1 };

inline Parity operator*(Parity a, Parity b) {
  return static_cast<Parity>((static_cast<int>(a) + static_cast<int>(b)) % 2);
}

// Element of the Grassmann algebra on L generators, coefficients in Q(i,sqrt2).
// Generator subsets are bitmasks (bit j-1 <-> zeta_j); terms are kept sorted
// by mask with no zero coefficients, so structural equality is semantic
// equality.
class GrassmannElement {
 public:
  using Terms = std::vector<std::pair<std::uint32_t, FieldScalar>>;
  explicit GrassmannElement(int gens = 4) : L_(gens) {}
  GrassmannElement(int gens, const FieldScalar& scalar) : L_(gens) {
    add_term(0u, scalar);
  }

  static GrassmannElement scalar(int gens, const FieldScalar& v) {
    return GrassmannElement(gens, v);
  }
  static GrassmannElement one(int gens) { return {gens, FieldScalar(1)}; }
  static GrassmannElement zero(int gens) { return GrassmannElement(gens); }
  // zeta_{j1} zeta_{j2} ... for strictly increasing 1-based indices
  static GrassmannElement generators(int gens, std::initializer_list<int> js,
                                     const FieldScalar& coef = FieldScalar(1));

  int gens() const { return L_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  FieldScalar body() const;
  GrassmannElement soul() const;
  bool has_body() const { return !body().is_zero(); }

  // Parity if homogeneous, nullopt if mixed. Zero counts as even.
  std::optional<Parity> parity() const;
  bool is_even() const { return parity() == Parity::Even; }
  bool is_odd() const { return parity() == Parity::Odd; }
  bool is_nilpotent() const { return body().is_zero(); }

  GrassmannElement operator-() const;
  GrassmannElement operator+(const GrassmannElement& o) const;
  GrassmannElement operator-(const GrassmannElement& o) const;
  GrassmannElement operator*(const GrassmannElement& o) const;
  GrassmannElement& operator+=(const GrassmannElement& o) { return *this = *this + o; }
  GrassmannElement& operator-=(const GrassmannElement& o) { return *this = *this - o; }
  GrassmannElement& operator*=(const GrassmannElement& o) { return *this = *this * o; }
  bool operator==(const GrassmannElement& o) const {
    return L_ == o.L_ && terms_ == o.terms_;
  }
  bool operator!=(const GrassmannElement& o) const { return !(*this == o); }

  GrassmannElement scaled(const FieldScalar& s) const;

  // Smallest e with soul^e = 0 (0 for zero soul, else in [1, L+1]).
  int nilpotency_degree() const;

  void add_term(std::uint32_t mask, const FieldScalar& coef);

  std::string str() const;

 private:
  int L_;
  Terms terms_;
};

// Inverse via the finite geometric series; requires nonzero body.
GrassmannElement gr_inv(const GrassmannElement& a);

// exp of a nilpotent even element, exact by nilpotency.
GrassmannElement gr_exp_nilpotent(const GrassmannElement& a);

// Square root of a perfect square with invertible body (body must be a
// perfect square in Q(i,sqrt2)); used to split scale data off compositions.
GrassmannElement gr_sqrt_perfect(const GrassmannElement& a);

// Integer power, negative allowed when invertible.
GrassmannElement gr_pow(const GrassmannElement& a, long n);

}  // namespace n2sc
