#pragma once

#include <vector>

#include "n2sc/series.hpp"

namespace n2sc {

enum class Family { L, J, Gp, Gm };

// L_j, J_j and G^+/-_{j-1/2}; for the G families the stored integer j names
// the mode j - 1/2.
struct BasisDerivation {
  Family fam;
  int j;

  Parity parity() const {
    return (fam == Family::Gp || fam == Family::Gm) ? Parity::Odd : Parity::Even;
  }
  // weight on series: wt x = 1, wt phi = 1/2 (doubled to stay integral)
  int weight2() const {
    return (fam == Family::Gp || fam == Family::Gm) ? 2 * j - 1 : 2 * j;
  }
  auto operator<=>(const BasisDerivation&) const = default;
};

// Finite sum of basis superderivations with Grassmann coefficients acting
// from the left. Sums must be parity-homogeneous (coefficient parity plus
// basis parity constant across terms); exponentials additionally require the
// total parity to be even, the envelope condition.
class DerivationSum {
 public:
  explicit DerivationSum(int gens = 4) : L_(gens) {}

  int gens() const { return L_; }
  const std::vector<std::pair<GrassmannElement, BasisDerivation>>& terms() const {
    return terms_;
  }
  bool is_zero() const { return terms_.empty(); }

  void add(const GrassmannElement& coef, BasisDerivation b);
  DerivationSum operator+(const DerivationSum& o) const;
  DerivationSum operator-() const;
  DerivationSum scaled(const GrassmannElement& c) const;
  bool operator==(const DerivationSum& o) const {
    return L_ == o.L_ && terms_ == o.terms_;
  }

  // nullopt when terms mix total parity
  std::optional<Parity> parity() const;

 private:
  int L_;
  std::vector<std::pair<GrassmannElement, BasisDerivation>> terms_;
};

// Single basis derivation applied to a series (exact, window handled).
SuperSeries der_apply_basis(const BasisDerivation& b, const SuperSeries& s);

SuperSeries der_apply(const DerivationSum& T, const SuperSeries& s);
CoordMap der_apply(const DerivationSum& T, const CoordMap& m);

// Operator super-bracket re-expressed in the L/J/G basis; throws NotInSpan
// if the probe expansion is not reproduced (cannot happen for NS sums).
DerivationSum der_bracket(const DerivationSum& S, const DerivationSum& T);

// e^T applied to a series/triple, truncated at x-order `order`.
// Termination: body-coefficient terms must raise weight on AtZero input
// (lower it on AtInfinity); nilpotent coefficients are unrestricted.
// Entire polynomial inputs are attempted dynamically.
SuperSeries der_exp_apply(const DerivationSum& T, const SuperSeries& s, int order);
CoordMap der_exp_apply(const DerivationSum& T, const CoordMap& m, int order);

// (a0^2 x, a0 b0 phi+, a0 b0^{-1} phi-) substituted into the argument:
// the action of a0^{-2L_0} b0^{-J_0}.
SuperSeries der_scale_apply(const GrassmannElement& a0, const GrassmannElement& b0,
                            const SuperSeries& s);
CoordMap der_scale_apply(const GrassmannElement& a0, const GrassmannElement& b0,
                         const CoordMap& m);
Point der_scale_apply(const GrassmannElement& a0, const GrassmannElement& b0,
                      const Point& p);

}  // namespace n2sc
