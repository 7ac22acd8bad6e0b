#pragma once

#include "n2sc/projective.hpp"

namespace n2sc {

// Nonhomogeneous frame (z, theta, theta*): series triples reuse SuperSeries
// with the phi+ slot holding theta and the phi- slot holding theta*.
struct NonhomoMap {
  SuperSeries x, th, ths;
  int gens() const { return x.gens(); }
  bool agrees_with(const NonhomoMap& o) const {
    return x.agrees_with(o.x) && th.agrees_with(o.th) && ths.agrees_with(o.ths);
  }
};

struct NonhomoPoint {
  GrassmannElement z, th, ths;
  bool operator==(const NonhomoPoint& o) const {
    return z == o.z && th == o.th && ths == o.ths;
  }
};

// theta = (t+ + t-)/sqrt2, theta* = -i(t+ - t-)/sqrt2 and back.
NonhomoPoint to_nonhomo(const Point& p);
Point to_homo(const NonhomoPoint& p);

// Bridge on series triples: conjugation by the odd coordinate change.
NonhomoMap to_nonhomo(const CoordMap& H);
CoordMap to_homo(const NonhomoMap& H);

// Coefficient-level substitutions behind the bridge: phi+- = (th +- i th*)/
// sqrt2 into a homogeneous-frame series and back.
SuperSeries nh_from_homo_series(const SuperSeries& s);
SuperSeries homo_from_nh_series(const SuperSeries& s);

// D = d/dtheta + theta d/dz and D* = -(d/dtheta* + theta* d/dz).
SuperSeries nh_D(const SuperSeries& s);
SuperSeries nh_Dstar(const SuperSeries& s);

struct NhReport {
  bool pass = true;
  std::string first_violation;
};

// The four displayed nonhomogeneous superconformal conditions.
NhReport nh_check(const NonhomoMap& H);

// Nonhomogeneous basis derivations: families L, J, G, G* with the G slot j
// naming the mode j - 1/2.
enum class NhFamily { L, J, G, Gstar };
SuperSeries nh_apply_basis(NhFamily fam, int j, const SuperSeries& s);

// Operator super-bracket in the nonhomogeneous basis via probe monomials.
struct NhTerm {
  NhFamily fam;
  int j;
  GrassmannElement coef;
};
std::vector<NhTerm> nh_bracket_basis(NhFamily fa, int a, NhFamily fb, int b,
                                     int gens);

// Expected table entry of the nonhomogeneous NS algebra at d = 0.
std::vector<NhTerm> nh_table_bracket(NhFamily fa, int a, NhFamily fb, int b,
                                     int gens);

struct NhVerifyReport {
  bool pass = true;
  long pairs_checked = 0;
  std::vector<std::string> mismatches;
};
NhVerifyReport nh_verify_representation(int window, int gens = 3);

// Converted parameter tuple of a nonhomogeneous superprojective map.
struct NhProjectiveParams {
  GrassmannElement a, b, c, d, e, es;   // even
  GrassmannElement g, gs, dl, dls;      // odd: gamma, gamma*, delta, delta*
  void validate() const;  // ad-bc = 1, e^2 + e*^2 = 1 - g dl + dl* g*
};
NhProjectiveParams nh_projective_convert(const ProjectiveParams& p);

// Short displayed nonhomogeneous rational form as a series at zero.
NonhomoMap nh_projective_map(const NhProjectiveParams& t, int order);

// The restricted block form (t-matrix rotation over a Mobius base) used as
// the closing counterexample; generally fails nh_check.
NonhomoMap nh_block_form(const GrassmannElement& a, const GrassmannElement& b,
                         const GrassmannElement& c, const GrassmannElement& d,
                         const std::array<GrassmannElement, 4>& tmat, int order);

}  // namespace n2sc
