#include "n2sc/superconformal.hpp"

#include <sstream>

#include "n2sc/errors.hpp"

namespace n2sc {

namespace {

SuperSeries phi_mono(Kind kind, int L, int fp, int fm) {
  return SuperSeries::monomial(kind, L, 0, fp, fm, GrassmannElement::one(L));
}

void report_nonzero(const SuperSeries& s, const char* cond, ScReport& rep) {
  if (!rep.pass || s.is_zero()) return;
  const auto& [key, c] = *s.terms().begin();
  rep.pass = false;
  std::ostringstream os;
  os << cond << " violated at x^" << key.k << (key.fp ? " f+" : "")
     << (key.fm ? " f-" : "") << ", coefficient " << c.str();
  rep.first_violation = os.str();
}

// nondegeneracy of one D phi~ series: true body somewhere / soul-only / zero
void check_degenerate(const SuperSeries& s, ScReport& rep) {
  bool any = false, body = false;
  for (const auto& [key, c] : s.terms()) {
    any = true;
    if (c.has_body()) body = true;
  }
  if (!any)
    rep.degenerate = true;
  else if (!body)
    rep.soul_unit_warning = true;
}

}  // namespace

ScReport sc_check(const CoordMap& H) {
  ScReport rep;
  SuperSeries dppm = ss_dplus(H.fm);
  SuperSeries dmpp = ss_dminus(H.fp);
  SuperSeries dppp = ss_dplus(H.fp);
  SuperSeries dmpm = ss_dminus(H.fm);
  SuperSeries c3 = ss_dplus(H.x) - H.fm * dppp;
  SuperSeries c4 = ss_dminus(H.x) - H.fp * dmpm;
  report_nonzero(dppm, "D+ phi~-", rep);
  report_nonzero(dmpp, "D- phi~+", rep);
  report_nonzero(c3, "D+ x~ - phi~- D+ phi~+", rep);
  report_nonzero(c4, "D- x~ - phi~+ D- phi~-", rep);
  check_degenerate(dppp, rep);
  check_degenerate(dmpm, rep);
  if (rep.degenerate) {
    rep.pass = false;
    if (rep.first_violation.empty())
      rep.first_violation = "D+- phi~+- identically zero on window";
  }
  return rep;
}

CoordMap sc_build_at_zero(const SuperSeries& gp, const SuperSeries& gm,
                          const SuperSeries& psip, const SuperSeries& psim) {
  const int L = gp.gens();
  if (gp.kind() != Kind::AtZero)
    throw IncompatibleKinds("at-zero components expected");
  if (!psip.coeff(0, 0, 0).is_zero() || !psim.coeff(0, 0, 0).is_zero())
    throw DegenerateLeadingCoefficient("psi must vanish at zero");
  if (!gp.coeff(0, 0, 0).has_body() || !gm.coeff(0, 0, 0).has_body())
    throw DegenerateLeadingCoefficient("g(0) must have invertible body");

  SuperSeries rhs = psip.ddx() * psim - psip * psim.ddx() + gp * gm;
  SuperSeries f(Kind::AtZero, L, 0, add_deg(rhs.hi(), 1));
  for (const auto& [key, c] : rhs.terms()) {
    if (key.fp || key.fm) continue;
    f.add_term(key.k + 1, 0, 0, c.scaled(FieldScalar(Rational(1, key.k + 1))));
  }

  SuperSeries pp = phi_mono(Kind::AtZero, L, 1, 0);
  SuperSeries pm = phi_mono(Kind::AtZero, L, 0, 1);
  SuperSeries ppm = phi_mono(Kind::AtZero, L, 1, 1);

  CoordMap H;
  H.x = f + pp * (gp * psim) + pm * (gm * psip) + ppm * (psip * psim).ddx();
  H.fp = psip + pp * gp + ppm * psip.ddx();
  H.fm = psim + pm * gm - ppm * psim.ddx();
  return H;
}

CoordMap sc_build_at_infinity(const SuperSeries& gp, const SuperSeries& gm,
                              const SuperSeries& psip, const SuperSeries& psim) {
  const int L = gp.gens();
  if (gp.kind() != Kind::AtInfinity)
    throw IncompatibleKinds("at-infinity components expected");
  FieldScalar i = FieldScalar::i();
  GrassmannElement want = GrassmannElement::scalar(L, i);
  if (gp.coeff(-1, 0, 0) != want || gm.coeff(-1, 0, 0) != want)
    throw DegenerateLeadingCoefficient("leading coefficient of g must be i/x");
  for (const auto* g : {&gp, &gm})
    for (const auto& [key, c] : g->terms())
      if (key.k > -1 || key.fp || key.fm)
        throw DegenerateLeadingCoefficient("g must live in x^{-1} R[[x^{-1}]]");
  for (const auto* p : {&psip, &psim})
    for (const auto& [key, c] : p->terms())
      if (key.k > -1 || key.fp || key.fm)
        throw DegenerateLeadingCoefficient("psi must vanish at infinity");

  // hatted at-zero components: g^(x) = -i x^{-1} g(1/x), psi^(x) = psi(1/x)
  auto flip = [&](const SuperSeries& s, bool times_minus_i_x) {
    SuperSeries r(Kind::AtZero, L,
                  s.hi() >= kEntire ? -kEntire : -s.hi(),
                  s.lo() <= -kEntire ? kEntire : -s.lo());
    for (const auto& [key, c] : s.terms()) r.add_term(-key.k, 0, 0, c);
    if (times_minus_i_x) {
      SuperSeries shifted(Kind::AtZero, L, add_deg(r.lo(), -1), add_deg(r.hi(), -1));
      for (const auto& [key, c] : r.terms())
        shifted.add_term(key.k - 1, 0, 0, c.scaled(-FieldScalar::i()));
      return shifted;
    }
    return r;
  };
  CoordMap at0 = sc_build_at_zero(flip(gp, true), flip(gm, true),
                                  flip(psip, false), flip(psim, false));
  return ss_subst_inversion(at0, false);  // H = H_{-1} o I
}

ComponentForm sc_extract(const CoordMap& H) {
  ScReport rep = sc_check(H);
  if (!rep.pass) throw NotSuperconformal(rep.first_violation);
  const int L = H.gens();
  Kind kind = H.kind();
  auto sector = [&](const SuperSeries& s, int fp, int fm) {
    SuperSeries r(kind, L, s.lo(), s.hi());
    for (const auto& [key, c] : s.terms())
      if (key.fp == fp && key.fm == fm) r.add_term(key.k, 0, 0, c);
    return r;
  };
  ComponentForm cf{sector(H.x, 0, 0), sector(H.fp, 1, 0), sector(H.fm, 0, 1),
                   sector(H.fp, 0, 0), sector(H.fm, 0, 0)};
  return cf;
}

}  // namespace n2sc
