#pragma once

#include <array>

#include "n2sc/derivations.hpp"

namespace n2sc {

// One N=2 superprojective transformation. f+- and h+- are always derived
// from the stored data; storing them invites inconsistency.
struct ProjectiveParams {
  GrassmannElement a, b, c, d, ep, em;  // even
  GrassmannElement gp, gm, dp, dm;      // odd: gamma+-, delta+-

  static ProjectiveParams identity(int gens);
  int gens() const { return a.gens(); }
  void validate() const;  // parities, ad-bc=1, e+e- = 1 - g+d- + d+g-
  GrassmannElement fplus() const;   // -e+ g+ g- d
  GrassmannElement fminus() const;  // +e- g+ g- d
  GrassmannElement hplus() const;
  GrassmannElement hminus() const;
  ProjectiveParams negated() const;  // same map: all ten entries flipped
  bool operator==(const ProjectiveParams& o) const;
};

// Equality of the underlying maps: parameter tuples agree up to the global
// sign flip.
bool pp_same_map(const ProjectiveParams& a, const ProjectiveParams& b);

// Point on the super-Riemann sphere in one of the two standard charts.
struct SpherePoint {
  bool at_infinity_chart = false;  // false: Delta/sou chart, true: Upsilon/nor
  Point p;
};

// Series form at zero (long displayed form); body(d) must be invertible.
CoordMap pp_to_map(const ProjectiveParams& t, int order);
// The short simplified form; equals pp_to_map identically.
CoordMap pp_to_map_short(const ProjectiveParams& t, int order);

// Total point action using whichever chart expression has an invertible
// denominator body.
SpherePoint pp_apply(const ProjectiveParams& t, const SpherePoint& in);

// Parameters of x -> T_{p1}(T_{p2}(x)); ExtractionFailed if the composed
// series does not match the family template (cannot happen).
ProjectiveParams pp_compose(const ProjectiveParams& p1,
                            const ProjectiveParams& p2);

// Parameters of I^{-1} o T o I (and of I o T o I^{-1}).
ProjectiveParams pp_conjugate_by_I(const ProjectiveParams& t);
ProjectiveParams pp_conjugate_by_I_inv(const ProjectiveParams& t);

ProjectiveParams pp_inverse(const ProjectiveParams& t);

// Closed-form one-parameter subgroups for the eight osp generators.
// L_0/J_0 need a nilpotent parameter: e^y is otherwise not exact in
// Q(i,sqrt2), and body scales are carried by (a0,b0) data instead.
ProjectiveParams pp_generator_exp(const BasisDerivation& gen,
                                  const GrassmannElement& param);

// Example parameters: the product e^{-A_{-1}L_{-1}} e^{-(A_1 L_1 + M+ G+_{1/2}
// + M- G-_{1/2})} in closed form, and its three factors.
ProjectiveParams example71_params(const GrassmannElement& A1,
                                  const GrassmannElement& Am1,
                                  const GrassmannElement& Mp,
                                  const GrassmannElement& Mm);
std::array<ProjectiveParams, 3> example71_factors(const GrassmannElement& A1,
                                                  const GrassmannElement& Am1,
                                                  const GrassmannElement& Mp,
                                                  const GrassmannElement& Mm);

// 4x4 matrices over the Grassmann algebra with the gl(2|2) block pattern
// (first two slots even, last two odd).
struct OspMatrix {
  int L = 4;
  std::array<std::array<GrassmannElement, 4>, 4> m;

  static OspMatrix zero(int gens);
  static OspMatrix identity(int gens);
  OspMatrix operator*(const OspMatrix& o) const;
  OspMatrix operator+(const OspMatrix& o) const;
  OspMatrix operator-() const;
  OspMatrix scaled(const FieldScalar& s) const;
  bool operator==(const OspMatrix& o) const { return m == o.m; }
};

struct OspReport {
  bool pass = true;
  bool beta_invariant = false;
  bool sdet_one = false;
  std::string detail;
};

// The displayed matrix of one of the eight generators; OutOfSpan otherwise.
OspMatrix osp_correspondence(const BasisDerivation& gen, int gens);
// e^{-y X} / e^{-xi X} for the eight generators (nilpotent y for L0/J0).
OspMatrix osp_exp(const BasisDerivation& gen, const GrassmannElement& param);
// Matrix super-commutator with the given operator parities.
OspMatrix osp_bracket(const OspMatrix& X, Parity px, const OspMatrix& Y, Parity py);
// beta-invariance for algebra elements; superdeterminant 1 for group ones.
OspReport osp_check(const OspMatrix& m, bool group_element);
GrassmannElement osp_sdet(const OspMatrix& m);

}  // namespace n2sc
