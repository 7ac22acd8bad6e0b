#pragma once

#include <string>

#include "n2sc/series.hpp"

namespace n2sc {

// The (f, g+-, psi+-) component data of a superconformal triple; every
// series lives in x alone (no phi monomials).
struct ComponentForm {
  SuperSeries f, gp, gm, psip, psim;
};

struct ScReport {
  bool pass = true;
  bool degenerate = false;        // some D phi~ identically zero on window
  bool soul_unit_warning = false; // nondegeneracy witnessed only by soul
  std::string first_violation;    // condition name + offending key
  std::string detail;
};

// Verifies D+ phi~- = D- phi~+ = D+ x~ - phi~- D+ phi~+ =
// D- x~ - phi~+ D- phi~- = 0 within the window, plus nondegeneracy.
ScReport sc_check(const CoordMap& H);

// Unique superconformal triple vanishing at zero with the given components;
// f is integrated from f' = (psi+)' psi- - psi+ (psi-)' + g+ g-, f(0) = 0.
CoordMap sc_build_at_zero(const SuperSeries& gp, const SuperSeries& gm,
                          const SuperSeries& psip, const SuperSeries& psim);

// Components in x^{-1}, leading coefficient of g+- pinned to i/x; equals the
// at-zero build composed with I.
CoordMap sc_build_at_infinity(const SuperSeries& gp, const SuperSeries& gm,
                              const SuperSeries& psip, const SuperSeries& psim);

// Recovers (f, g+-, psi+-); requires sc_check to pass.
ComponentForm sc_extract(const CoordMap& H);

}  // namespace n2sc
