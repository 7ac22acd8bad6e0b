#include "n2sc/projective.hpp"

#include <cstdio>
#include <cstdlib>

#include "n2sc/errors.hpp"
#include "n2sc/moduli.hpp"

namespace n2sc {

ProjectiveParams ProjectiveParams::identity(int gens) {
  ProjectiveParams t;
  GrassmannElement one = GrassmannElement::one(gens);
  GrassmannElement zero = GrassmannElement::zero(gens);
  t.a = one; t.b = zero; t.c = zero; t.d = one;
  t.ep = one; t.em = one;
  t.gp = zero; t.gm = zero; t.dp = zero; t.dm = zero;
  return t;
}

void ProjectiveParams::validate() const {
  for (const auto* g : {&a, &b, &c, &d, &ep, &em})
    if (!g->is_zero() && !g->is_even())
      throw ParityMismatch("even parameter has odd part");
  for (const auto* g : {&gp, &gm, &dp, &dm})
    if (!g->is_zero() && !g->is_odd())
      throw ParityMismatch("odd parameter has even part");
  GrassmannElement one = GrassmannElement::one(gens());
  if (a * d - b * c != one)
    throw ExtractionFailed("ad - bc != 1");
  if (ep * em != one - gp * dm + dp * gm)
    throw ExtractionFailed("e+ e- != 1 - g+ d- + d+ g-");
}

GrassmannElement ProjectiveParams::fplus() const { return -(ep * gp * gm * d); }
GrassmannElement ProjectiveParams::fminus() const { return em * gp * gm * d; }
GrassmannElement ProjectiveParams::hplus() const {
  return ep * (dp * dm * c - (gp * dm + dp * gm) * d - dp * dm * gp * gm * d);
}
GrassmannElement ProjectiveParams::hminus() const {
  return -(em * (dp * dm * c - (gp * dm + dp * gm) * d + dp * dm * gp * gm * d));
}

ProjectiveParams ProjectiveParams::negated() const {
  ProjectiveParams t = *this;
  for (auto* g : {&t.a, &t.b, &t.c, &t.d, &t.ep, &t.em, &t.gp, &t.gm, &t.dp, &t.dm})
    *g = -*g;
  return t;
}

bool ProjectiveParams::operator==(const ProjectiveParams& o) const {
  return a == o.a && b == o.b && c == o.c && d == o.d && ep == o.ep &&
         em == o.em && gp == o.gp && gm == o.gm && dp == o.dp && dm == o.dm;
}

bool pp_same_map(const ProjectiveParams& a, const ProjectiveParams& b) {
  return a == b || a == b.negated();
}

namespace {

// Generic evaluation of the displayed rational forms over any coordinate
// ring V (series or Grassmann scalars). `cst` embeds a constant, `inv`
// inverts an even unit.
template <class V, class CstF, class InvF>
struct Ev {
  const ProjectiveParams& t;
  CstF cst;
  InvF inv;
  FieldScalar I = FieldScalar::i();

  V C(const GrassmannElement& g) const { return cst(g); }

  // T_sou, long displayed form
  std::array<V, 3> sou(const V& w, const V& rp, const V& rm) const {
    V den = C(t.c) * w + C(t.d);
    V d1 = inv(den);
    V d2 = d1 * d1;
    V d3 = d2 * d1;
    V gmw = C(t.gm) * w + C(t.dm);
    V gpw = C(t.gp) * w + C(t.dp);
    GrassmannElement fp_ = t.fplus(), fm_ = t.fminus();
    GrassmannElement hp_ = t.hplus(), hm_ = t.hminus();
    V x = (C(t.a) * w + C(t.b)) * d1
        + rp * (C(t.ep) * gmw) * d2
        + rp * ((C(fp_) * w + C(hp_)) * gmw) * d3
        + rm * (C(t.em) * gpw) * d2
        + rm * ((C(fm_) * w + C(hm_)) * gpw) * d3
        + rp * rm * (C(t.gp * t.gm * t.d).scaled(FieldScalar(2)) * w
                     - C(t.gp * t.dm + t.dp * t.gm) * (C(t.c) * w - C(t.d))
                     - C(t.dp * t.dm * t.c).scaled(FieldScalar(2))) * d3;
    V p = gpw * d1 + rp * C(t.ep) * d1 + rp * (C(fp_) * w + C(hp_)) * d2
        + rp * rm * C(t.gp * t.d - t.dp * t.c) * d2;
    V m = gmw * d1 + rm * C(t.em) * d1 + rm * (C(fm_) * w + C(hm_)) * d2
        - rp * rm * C(t.gm * t.d - t.dm * t.c) * d2;
    return {x, p, m};
  }

  // T_sou, short simplified form
  std::array<V, 3> sou_short(const V& w, const V& rp, const V& rm) const {
    V den = C(t.c) * w + C(t.d);
    V d1 = inv(den);
    V d2 = d1 * d1;
    V d3 = d2 * d1;
    GrassmannElement q = t.dp * t.dm;
    V x = (C(t.a) * w + C(t.b)) * d1
        + rp * (C(t.ep) * (C(t.gm) * w + C(t.dm + q * t.gm))) * d2
        + rm * (C(t.em) * (C(t.gp) * w + C(t.dp - q * t.gp))) * d2
        + rp * rm * (C(t.gp * t.gm * t.d).scaled(FieldScalar(2)) * w
                     - C(t.gp * t.dm + t.dp * t.gm) * (C(t.c) * w - C(t.d))
                     - C(q * t.c).scaled(FieldScalar(2))) * d3;
    GrassmannElement s = t.gp * t.dm + t.dp * t.gm;
    V p = (C(t.gp) * w + C(t.dp)) * d1 + rp * C(t.ep) * d1
        + rp * (C(t.ep) * (-(C(t.gp * t.gm * t.d)) * w
                           + C(q * t.c - s * t.d - q * t.gp * t.gm * t.d))) * d2
        + rp * rm * C(t.gp * t.d - t.dp * t.c) * d2;
    V m = (C(t.gm) * w + C(t.dm)) * d1 + rm * C(t.em) * d1
        + rm * (C(t.em) * (C(t.gp * t.gm * t.d) * w
                           + C(-(q * t.c) + s * t.d - q * t.gp * t.gm * t.d))) * d2
        - rp * rm * C(t.gm * t.d - t.dm * t.c) * d2;
    return {x, p, m};
  }

  // T_nor = I^{-1} T_sou I on the other chart
  std::array<V, 3> nor(const V& w, const V& rp, const V& rm) const {
    V den = C(t.a) + C(t.b) * w;
    V d1 = inv(den);
    V d2 = d1 * d1;
    V d3 = d2 * d1;
    GrassmannElement q = t.dp * t.dm;
    GrassmannElement s = t.gp * t.dm + t.dp * t.gm;
    V x = (C(t.c) + C(t.d) * w) * d1
        - rp * (C(t.ep) * (C(t.gm) + C(t.dm + q * t.gm) * w)).scaled(I) * d2
        - rm * (C(t.em) * (C(t.gp) + C(t.dp - q * t.gp) * w)).scaled(I) * d2
        + rp * rm * (C(t.gp * t.gm * t.b).scaled(FieldScalar(2))
                     - C(s) * (C(t.a) - C(t.b) * w)
                     - C(q * t.a).scaled(FieldScalar(2)) * w) * d3;
    V p = (C(t.gp) + C(t.dp) * w).scaled(-I) * d1
        + rp * C(t.ep - s - t.gp * q * t.gm) * d1
        + rp * (C(t.ep) * (C(q * t.a) * w
                           + C(-(t.gp * t.gm * t.b) + s * t.a + t.gp * q * t.gm * t.a))) * d2
        + (rp * rm * C(t.gp * t.b - t.dp * t.a)).scaled(I) * d2;
    V m = (C(t.gm) + C(t.dm) * w).scaled(-I) * d1
        + rm * C(t.em + s - q * t.gp * t.gm) * d1
        + rm * (C(t.em) * (-(C(q * t.a)) * w
                           + C(t.gp * t.gm * t.b - s * t.a + q * t.gp * t.gm * t.a))) * d2
        - (rp * rm * C(t.gm * t.b - t.dm * t.a)).scaled(I) * d2;
    return {x, p, m};
  }

  // chart case i: nor coordinates in, sou coordinates out
  std::array<V, 3> t2(const V& w, const V& rp, const V& rm) const {
    V den = C(t.c) + C(t.d) * w;
    V d1 = inv(den);
    V d2 = d1 * d1;
    V d3 = d2 * d1;
    GrassmannElement fp_ = t.fplus(), fm_ = t.fminus();
    GrassmannElement hp_ = t.hplus(), hm_ = t.hminus();
    V gmw = C(t.gm) + C(t.dm) * w;
    V gpw = C(t.gp) + C(t.dp) * w;
    V x = (C(t.a) + C(t.b) * w) * d1
        + (rp * (C(t.ep) * gmw)).scaled(I) * d2
        + (rp * ((C(fp_) + C(hp_) * w) * gmw)).scaled(I) * d3
        + (rm * (C(t.em) * gpw)).scaled(I) * d2
        + (rm * ((C(fm_) + C(hm_) * w) * gpw)).scaled(I) * d3
        - rp * rm * (C(t.gp * t.gm * t.d).scaled(FieldScalar(2))
                     - C(t.gp * t.dm + t.dp * t.gm) * (C(t.c) - C(t.d) * w)
                     - C(t.dp * t.dm * t.c).scaled(FieldScalar(2)) * w) * d3;
    V p = gpw * d1 + (rp * C(t.ep)).scaled(I) * d1
        + (rp * (C(fp_) + C(hp_) * w)).scaled(I) * d2
        - rp * rm * C(t.gp * t.d - t.dp * t.c) * d2;
    V m = gmw * d1 + (rm * C(t.em)).scaled(I) * d1
        + (rm * (C(fm_) + C(hm_) * w)).scaled(I) * d2
        + rp * rm * C(t.gm * t.d - t.dm * t.c) * d2;
    return {x, p, m};
  }

  // chart case ii: sou coordinates in, nor coordinates out
  std::array<V, 3> t3(const V& w, const V& rp, const V& rm) const {
    V den = C(t.a) * w + C(t.b);
    V d1 = inv(den);
    V d2 = d1 * d1;
    V d3 = d2 * d1;
    GrassmannElement q = t.dp * t.dm;
    GrassmannElement s = t.gp * t.dm + t.dp * t.gm;
    V x = (C(t.c) * w + C(t.d)) * d1
        - rp * (C(t.ep) * (C(t.gm) * w + C(t.dm + q * t.gm))) * d2
        - rm * (C(t.em) * (C(t.gp) * w + C(t.dp - q * t.gp))) * d2
        - rp * rm * (C(t.gp * t.gm * t.b).scaled(FieldScalar(2)) * w
                     - C(s) * (C(t.a) * w - C(t.b))
                     - C(q * t.a).scaled(FieldScalar(2))) * d3;
    V p = (C(t.gp) * w + C(t.dp)).scaled(-I) * d1
        + (rp * C(t.ep - s - t.gp * q * t.gm)).scaled(-I) * d1
        + (rp * (C(t.ep) * (C(q * t.a) - C(t.gp * t.gm * t.b) * w + C(s * t.a) * w
                            + C(t.gp * q * t.gm * t.a) * w))).scaled(-I) * d2
        - (rp * rm * C(t.gp * t.b - t.dp * t.a)).scaled(I) * d2;
    V m = (C(t.gm) * w + C(t.dm)).scaled(-I) * d1
        + (rm * C(t.em + s - q * t.gp * t.gm)).scaled(-I) * d1
        + (rm * (C(t.em) * (-(C(q * t.a)) + C(t.gp * t.gm * t.b) * w - C(s * t.a) * w
                            + C(q * t.gp * t.gm * t.a) * w))).scaled(-I) * d2
        + (rp * rm * C(t.gm * t.b - t.dm * t.a)).scaled(I) * d2;
    return {x, p, m};
  }
};

template <class V, class CstF, class InvF>
Ev<V, CstF, InvF> make_ev(const ProjectiveParams& t, CstF cst, InvF inv) {
  return Ev<V, CstF, InvF>{t, cst, inv};
}

CoordMap eval_series_sou(const ProjectiveParams& t, const CoordMap& in,
                         bool short_form) {
  Kind kind = in.kind();
  auto cst = [&](const GrassmannElement& g) {
    return SuperSeries::constant(kind, g);
  };
  auto inv = [](const SuperSeries& s) { return ss_inv(s); };
  auto ev = make_ev<SuperSeries>(t, cst, inv);
  auto r = short_form ? ev.sou_short(in.x, in.fp, in.fm)
                      : ev.sou(in.x, in.fp, in.fm);
  return {r[0], r[1], r[2]};
}

Point eval_point(const ProjectiveParams& t, const Point& in, int which) {
  auto cst = [&](const GrassmannElement& g) { return g; };
  auto inv = [](const GrassmannElement& g) { return gr_inv(g); };
  auto ev = make_ev<GrassmannElement>(t, cst, inv);
  std::array<GrassmannElement, 3> r;
  switch (which) {
    case 0: r = ev.sou(in.z, in.tp, in.tm); break;
    case 1: r = ev.nor(in.z, in.tp, in.tm); break;
    case 2: r = ev.t2(in.z, in.tp, in.tm); break;
    default: r = ev.t3(in.z, in.tp, in.tm); break;
  }
  return {r[0], r[1], r[2]};
}

}  // namespace

CoordMap pp_to_map(const ProjectiveParams& t, int order) {
  if (!t.d.has_body())
    throw NonInvertibleDenominator("series at zero needs body(d) != 0");
  // truncating the input keeps every intermediate product bounded
  return eval_series_sou(t, identity_map(t.gens()).truncated(order), false)
      .truncated(order);
}

CoordMap pp_to_map_short(const ProjectiveParams& t, int order) {
  if (!t.d.has_body())
    throw NonInvertibleDenominator("series at zero needs body(d) != 0");
  return eval_series_sou(t, identity_map(t.gens()).truncated(order), true)
      .truncated(order);
}

SpherePoint pp_apply(const ProjectiveParams& t, const SpherePoint& in) {
  std::optional<Point> sou_rep, nor_rep;
  if (!in.at_infinity_chart) {
    sou_rep = in.p;
    if (in.p.z.has_body()) nor_rep = ss_inversion_I_inv(in.p);
  } else {
    nor_rep = in.p;
    if (in.p.z.has_body()) sou_rep = ss_inversion_I(in.p);
  }
  if (sou_rep && (t.c * sou_rep->z + t.d).has_body())
    return {false, eval_point(t, *sou_rep, 0)};
  if (nor_rep && (t.a + t.b * nor_rep->z).has_body())
    return {true, eval_point(t, *nor_rep, 1)};
  if (nor_rep && (t.c + t.d * nor_rep->z).has_body())
    return {false, eval_point(t, *nor_rep, 2)};
  if (sou_rep && (t.a * sou_rep->z + t.b).has_body())
    return {true, eval_point(t, *sou_rep, 3)};
  throw NonInvertibleDenominator("no chart expression is defined here");
}

namespace {

constexpr int kPpOrder = 8;

SuperSeries sector_x_only(const SuperSeries& s, int fp, int fm) {
  SuperSeries r(s.kind(), s.gens(), s.lo(), s.hi());
  for (const auto& [key, c] : s.terms())
    if (key.fp == fp && key.fm == fm) r.add_term(key.k, 0, 0, c);
  return r;
}

// The bracket multiplying e+- in the phi-slot coefficient of the short form,
// evaluated at x = x0: g+-(x0) = e+- * bracket(x0).
GrassmannElement g_bracket_at(const ProjectiveParams& t, const GrassmannElement& x0,
                              bool plus) {
  GrassmannElement den = t.c * x0 + t.d;
  GrassmannElement di = gr_inv(den);
  GrassmannElement s = t.gp * t.dm + t.dp * t.gm;
  GrassmannElement q = t.dp * t.dm;
  GrassmannElement w = plus
      ? -(t.gp * t.gm * t.d * x0) + q * t.c - s * t.d - q * t.gp * t.gm * t.d
      : t.gp * t.gm * t.d * x0 - q * t.c + s * t.d - q * t.gp * t.gm * t.d;
  return di + w * di * di;
}

ProjectiveParams extract_params(const CoordMap& C) {
  const int L = C.gens();
  if (C.x.hi() < 3) throw ExtractionFailed("window too small");
  for (const auto* s : {&C.x, &C.fp, &C.fm})
    for (const auto& [key, c] : s->terms())
      if (key.k < 0)
        throw ExtractionFailed("composite not expandable at zero");
  SuperSeries f = sector_x_only(C.x, 0, 0);
  SuperSeries psip = sector_x_only(C.fp, 0, 0);
  SuperSeries psim = sector_x_only(C.fm, 0, 0);
  GrassmannElement f1 = f.coeff(1, 0, 0);
  if (!f1.has_body()) throw ExtractionFailed("f'(0) not invertible");
  GrassmannElement d2 = gr_inv(f1);
  GrassmannElement dd = gr_sqrt_perfect(d2);
  GrassmannElement d3 = d2 * dd;
  ProjectiveParams t;
  t.d = dd;
  t.c = -(f.coeff(2, 0, 0) * d3);
  t.b = f.coeff(0, 0, 0) * dd;
  t.a = (GrassmannElement::one(L) + t.b * t.c) * gr_inv(dd);
  t.dp = psip.coeff(0, 0, 0) * dd;
  t.gp = psip.coeff(1, 0, 0) * dd + psip.coeff(0, 0, 0) * t.c;
  t.dm = psim.coeff(0, 0, 0) * dd;
  t.gm = psim.coeff(1, 0, 0) * dd + psim.coeff(0, 0, 0) * t.c;
  // e+- from the phi-sector constant coefficients
  GrassmannElement zero0 = GrassmannElement::zero(L);
  t.ep = C.fp.coeff(0, 1, 0) * gr_inv(g_bracket_at(t, zero0, true));
  t.em = C.fm.coeff(0, 0, 1) * gr_inv(g_bracket_at(t, zero0, false));
  t.validate();
  // deterministic representative of the global sign pair
  int sgn = t.d.body().real_sign();
  if (sgn == 0) sgn = t.d.body().imag_sign();
  if (sgn < 0) t = t.negated();
  CoordMap rebuilt = pp_to_map(t, std::min(C.x.hi(), kPpOrder));
  if (!rebuilt.agrees_with(C)) {
    if (std::getenv("N2SC_DEBUG_EXTRACT")) {
      std::fprintf(stderr, "C.x  [%d,%d] %s\n", C.x.lo(), C.x.hi(), C.x.str().c_str());
      std::fprintf(stderr, "R.x  [%d,%d] %s\n", rebuilt.x.lo(), rebuilt.x.hi(), rebuilt.x.str().c_str());
      std::fprintf(stderr, "C.fp [%d,%d] %s\n", C.fp.lo(), C.fp.hi(), C.fp.str().c_str());
      std::fprintf(stderr, "R.fp [%d,%d] %s\n", rebuilt.fp.lo(), rebuilt.fp.hi(), rebuilt.fp.str().c_str());
      std::fprintf(stderr, "C.fm [%d,%d] %s\n", C.fm.lo(), C.fm.hi(), C.fm.str().c_str());
      std::fprintf(stderr, "R.fm [%d,%d] %s\n", rebuilt.fm.lo(), rebuilt.fm.hi(), rebuilt.fm.str().c_str());
    }
    throw ExtractionFailed("rebuilt series disagrees with the composite");
  }
  return t;
}

CoordMap laurent_inversion_triple(int L) {
  GrassmannElement one = GrassmannElement::one(L);
  GrassmannElement iu = GrassmannElement::scalar(L, FieldScalar::i());
  SuperSeries x = SuperSeries::monomial(Kind::AtZero, L, -1, 0, 0, one);
  SuperSeries p = SuperSeries::monomial(Kind::AtZero, L, -1, 1, 0, iu);
  SuperSeries m = SuperSeries::monomial(Kind::AtZero, L, -1, 0, 1, iu);
  return {x, p, m};
}

CoordMap conjugate_series(const ProjectiveParams& t, bool by_I) {
  // by_I: I^{-1} o T o I computed as at-zero Laurent algebra;
  // otherwise I o T o I^{-1}.
  const int L = t.gens();
  CoordMap inner = laurent_inversion_triple(L).truncated(kPpOrder + 4);
  FieldScalar u = by_I ? FieldScalar::i() : -FieldScalar::i();
  inner.fp = inner.fp.scaled(u * FieldScalar::i().inverse());
  inner.fm = inner.fm.scaled(u * FieldScalar::i().inverse());
  // (inner now carries u phi / x with u = +-i)
  CoordMap TI = eval_series_sou(t, inner, false);
  SuperSeries ui = ss_inv(TI.x);
  FieldScalar w = by_I ? -FieldScalar::i() : FieldScalar::i();
  CoordMap Cfull{ui, (TI.fp * ui).scaled(w), (TI.fm * ui).scaled(w)};
  return Cfull.truncated(kPpOrder);
}

}  // namespace

namespace {

// Parameters of T o (x + r, phi+, phi-): Mobius part and deltas absorb the
// shift; the e's follow from matching the g-series at any point where both
// denominator bodies are invertible.
ProjectiveParams translate_right(const ProjectiveParams& t, const FieldScalar& r) {
  const int L = t.gens();
  GrassmannElement rr = GrassmannElement::scalar(L, r);
  ProjectiveParams out = t;
  out.b = t.b + t.a * rr;
  out.d = t.d + t.c * rr;
  out.dp = t.dp + t.gp * rr;
  out.dm = t.dm + t.gm * rr;
  for (long c0 : {0, 1, -1, 2, -2, 3}) {
    GrassmannElement x0 = GrassmannElement::scalar(L, FieldScalar(c0));
    if (!(out.c * x0 + out.d).has_body() || !(t.c * (x0 + rr) + t.d).has_body())
      continue;
    out.ep = t.ep * g_bracket_at(t, x0 + rr, true) *
             gr_inv(g_bracket_at(out, x0, true));
    out.em = t.em * g_bracket_at(t, x0 + rr, false) *
             gr_inv(g_bracket_at(out, x0, false));
    out.validate();
    return out;
  }
  throw NonInvertibleDenominator("no matching point for the translated chart");
}

ProjectiveParams compose_direct(const ProjectiveParams& p1,
                                const ProjectiveParams& p2) {
  CoordMap inner = pp_to_map(p2, kPpOrder + 2).truncated(kPpOrder);
  CoordMap C = eval_series_sou(p1, inner, false).truncated(kPpOrder);
  return extract_params(C);
}

}  // namespace

ProjectiveParams pp_compose(const ProjectiveParams& p1,
                            const ProjectiveParams& p2) {
  try {
    return compose_direct(p1, p2);
  } catch (const DomainError&) {
    // a denominator body vanished somewhere; shift the chart by a rational
    // translation, compose there, and shift back. Some small r always
    // works: the bodies that must not vanish are nonconstant affine
    // polynomials in r.
    for (long r : {1, -1, 2, -2, 3, -3, 4, 5}) {
      if (!(p2.d + p2.c * GrassmannElement::scalar(p2.gens(), FieldScalar(r)))
               .has_body())
        continue;
      try {
        ProjectiveParams q = translate_right(p2, FieldScalar(r));
        ProjectiveParams v = compose_direct(p1, q);
        return translate_right(v, FieldScalar(-r));
      } catch (const DomainError&) {
        continue;
      }
    }
    throw NonInvertibleDenominator("no translated chart admits the composition");
  }
}

namespace {

// The inversion map as a superprojective transformation: x -> 1/x,
// phi -> i phi / x needs e+- = -1 against b = c = i; the inverse map
// x -> 1/x, phi -> -i phi / x takes e+- = +1.
ProjectiveParams inversion_params(int L, bool inverse) {
  ProjectiveParams t = ProjectiveParams::identity(L);
  t.a = GrassmannElement::zero(L);
  t.d = GrassmannElement::zero(L);
  t.b = GrassmannElement::scalar(L, FieldScalar::i());
  t.c = t.b;
  if (!inverse) {
    t.ep = -t.ep;
    t.em = -t.em;
  }
  return t;
}

}  // namespace

ProjectiveParams pp_conjugate_by_I(const ProjectiveParams& t) {
  try {
    return extract_params(conjugate_series(t, true));
  } catch (const DomainError&) {
    return pp_compose(pp_compose(inversion_params(t.gens(), true), t),
                      inversion_params(t.gens(), false));
  }
}

ProjectiveParams pp_conjugate_by_I_inv(const ProjectiveParams& t) {
  try {
    return extract_params(conjugate_series(t, false));
  } catch (const DomainError&) {
    return pp_compose(pp_compose(inversion_params(t.gens(), false), t),
                      inversion_params(t.gens(), true));
  }
}

ProjectiveParams pp_inverse(const ProjectiveParams& t) {
  const int L = t.gens();
  if (!t.d.has_body()) {
    // run in the conjugated chart
    return pp_conjugate_by_I_inv(pp_inverse(pp_conjugate_by_I(t)));
  }
  // normalize to vanish at zero, invert as moduli data, shift back
  SpherePoint origin{false, {GrassmannElement::zero(L), GrassmannElement::zero(L),
                             GrassmannElement::zero(L)}};
  Point p0 = pp_apply(t, origin).p;
  CoordMap sigma = shift_map(p0);
  CoordMap U = ss_compose(sigma, pp_to_map(t, kPpOrder + 2));
  ModuliData du = e_hat_inverse(U, 6);
  // weight-6 data pins the inverse series to x-order 4 and the parameters
  // only need order 3
  CoordMap Uinv = e_hat(invert_data(du), kPpOrder).truncated(4);
  ProjectiveParams u_inv = extract_params(Uinv);
  ProjectiveParams shift_params = ProjectiveParams::identity(L);
  shift_params.b = -p0.z;
  shift_params.dp = -p0.tp;
  shift_params.dm = -p0.tm;
  return pp_compose(u_inv, shift_params);
}

ProjectiveParams pp_generator_exp(const BasisDerivation& gen,
                                  const GrassmannElement& param) {
  const int L = param.gens();
  auto want_parity = gen.parity();
  if (!param.is_zero() && param.parity() != want_parity)
    throw ParityMismatch("parameter parity must match the generator");
  ProjectiveParams t = ProjectiveParams::identity(L);
  auto exp_half = [&](int sign) {
    // e^{sign * param / 2}, exact only for nilpotent param
    if (param.has_body())
      throw ExactnessUnavailable(
          "e^y is not exact in Q(i,sqrt2) for body parameters; use scale data");
    GrassmannElement arg = param.scaled(FieldScalar(Rational(sign, 2)));
    return gr_exp_nilpotent(arg);
  };
  if (gen.fam == Family::L && gen.j == -1) {
    t.b = param;
  } else if (gen.fam == Family::L && gen.j == 0) {
    t.a = exp_half(1);
    t.d = exp_half(-1);
  } else if (gen.fam == Family::L && gen.j == 1) {
    t.c = -param;
  } else if (gen.fam == Family::J && gen.j == 0) {
    t.ep = exp_half(1) * exp_half(1);
    t.em = exp_half(-1) * exp_half(-1);
  } else if (gen.fam == Family::Gp && gen.j == 0) {
    t.dp = param;
  } else if (gen.fam == Family::Gp && gen.j == 1) {
    t.gp = param;
  } else if (gen.fam == Family::Gm && gen.j == 0) {
    t.dm = param;
  } else if (gen.fam == Family::Gm && gen.j == 1) {
    t.gm = param;
  } else {
    throw OutOfSpan("generator outside {L_{0,+-1}, J_0, G+-_{+-1/2}}");
  }
  t.validate();
  return t;
}

ProjectiveParams example71_params(const GrassmannElement& A1,
                                  const GrassmannElement& Am1,
                                  const GrassmannElement& Mp,
                                  const GrassmannElement& Mm) {
  const int L = A1.gens();
  ProjectiveParams t = ProjectiveParams::identity(L);
  GrassmannElement one = GrassmannElement::one(L);
  t.a = one;
  t.b = Am1;
  t.c = -A1;
  t.d = one - A1 * Am1;
  t.ep = one + Mp * Mm * Am1;
  t.em = one - Mp * Mm * Am1;
  t.gp = Mp;
  t.gm = Mm;
  t.dp = Mp * Am1;
  t.dm = Mm * Am1;
  t.validate();
  return t;
}

std::array<ProjectiveParams, 3> example71_factors(const GrassmannElement& A1,
                                                  const GrassmannElement& Am1,
                                                  const GrassmannElement& Mp,
                                                  const GrassmannElement& Mm) {
  const int L = A1.gens();
  ProjectiveParams t1 = ProjectiveParams::identity(L);
  t1.c = -A1;
  ProjectiveParams t2 = ProjectiveParams::identity(L);
  t2.gp = Mp;
  t2.gm = Mm;
  ProjectiveParams t3 = ProjectiveParams::identity(L);
  t3.b = Am1;
  return {t1, t2, t3};
}

OspMatrix OspMatrix::zero(int gens) {
  OspMatrix r;
  r.L = gens;
  for (auto& row : r.m)
    for (auto& e : row) e = GrassmannElement::zero(gens);
  return r;
}

OspMatrix OspMatrix::identity(int gens) {
  OspMatrix r = zero(gens);
  for (int i = 0; i < 4; ++i) r.m[i][i] = GrassmannElement::one(gens);
  return r;
}

OspMatrix OspMatrix::operator*(const OspMatrix& o) const {
  OspMatrix r = zero(L);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
  return r;
}

OspMatrix OspMatrix::operator+(const OspMatrix& o) const {
  OspMatrix r = *this;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.m[i][j] += o.m[i][j];
  return r;
}

OspMatrix OspMatrix::operator-() const {
  OspMatrix r = *this;
  for (auto& row : r.m)
    for (auto& e : row) e = -e;
  return r;
}

OspMatrix OspMatrix::scaled(const FieldScalar& s) const {
  OspMatrix r = *this;
  for (auto& row : r.m)
    for (auto& e : row) e = e.scaled(s);
  return r;
}

OspMatrix osp_correspondence(const BasisDerivation& gen, int gens) {
  OspMatrix r = OspMatrix::zero(gens);
  GrassmannElement one = GrassmannElement::one(gens);
  auto E = [&](int i, int j, const FieldScalar& v) {
    r.m[i - 1][j - 1] += GrassmannElement::scalar(gens, v);
  };
  if (gen.fam == Family::L && gen.j == -1) {
    E(3, 4, FieldScalar(1));
  } else if (gen.fam == Family::L && gen.j == 0) {
    E(3, 3, FieldScalar(Rational(1, 2)));
    E(4, 4, FieldScalar(Rational(-1, 2)));
  } else if (gen.fam == Family::L && gen.j == 1) {
    E(4, 3, FieldScalar(-1));
  } else if (gen.fam == Family::J && gen.j == 0) {
    E(1, 1, FieldScalar(1));
    E(2, 2, FieldScalar(-1));
  } else if (gen.fam == Family::Gp && gen.j == 0) {
    E(1, 4, FieldScalar(1));
    E(3, 2, FieldScalar(1));
  } else if (gen.fam == Family::Gp && gen.j == 1) {
    E(1, 3, FieldScalar(1));
    E(4, 2, FieldScalar(-1));
  } else if (gen.fam == Family::Gm && gen.j == 0) {
    E(2, 4, FieldScalar(1));
    E(3, 1, FieldScalar(1));
  } else if (gen.fam == Family::Gm && gen.j == 1) {
    E(2, 3, FieldScalar(1));
    E(4, 1, FieldScalar(-1));
  } else {
    throw OutOfSpan("generator outside the osp(2|2) span");
  }
  (void)one;
  return r;
}

OspMatrix osp_exp(const BasisDerivation& gen, const GrassmannElement& param) {
  const int L = param.gens();
  if (!param.is_zero() && param.parity() != gen.parity())
    throw ParityMismatch("parameter parity must match the generator");
  OspMatrix X = osp_correspondence(gen, L);
  // e^{-param X}: series terminates by nilpotency of X or of the parameter
  OspMatrix r = OspMatrix::identity(L);
  OspMatrix pw = OspMatrix::identity(L);
  Rational fact = 1;
  for (int n = 1; n <= 2 * L + 8; ++n) {
    // pw <- (-param X) pw ; for odd generators param and X entries hop,
    // handled by multiplying matrices of Grassmann entries in order
    OspMatrix step = OspMatrix::zero(L);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          step.m[i][j] += (-param) * X.m[i][k] * pw.m[k][j];
    pw = step;
    bool zero = true;
    for (auto& row : pw.m)
      for (auto& e : row) zero = zero && e.is_zero();
    if (zero) break;
    fact *= n;
    r = r + pw.scaled(FieldScalar(Rational(1) / fact));
    if (n == 2 * L + 8)
      throw ExactnessUnavailable("matrix exponential needs a nilpotent parameter");
  }
  return r;
}

OspMatrix osp_bracket(const OspMatrix& X, Parity px, const OspMatrix& Y,
                      Parity py) {
  OspMatrix xy = X * Y;
  OspMatrix yx = Y * X;
  if (px == Parity::Odd && py == Parity::Odd) return xy + yx;
  return xy + (-yx);
}

GrassmannElement osp_sdet(const OspMatrix& mm) {
  const int L = mm.L;
  auto det2 = [&](const GrassmannElement& p, const GrassmannElement& q,
                  const GrassmannElement& r, const GrassmannElement& s) {
    return p * s - q * r;
  };
  const auto& m = mm.m;
  GrassmannElement detD = det2(m[2][2], m[2][3], m[3][2], m[3][3]);
  GrassmannElement detDi = gr_inv(detD);
  // D^{-1}
  GrassmannElement d00 = m[3][3] * detDi, d01 = -m[2][3] * detDi;
  GrassmannElement d10 = -m[3][2] * detDi, d11 = m[2][2] * detDi;
  // A - B D^{-1} C
  GrassmannElement t00 = m[0][0] - (m[0][2] * d00 + m[0][3] * d10) * m[2][0] -
                         (m[0][2] * d01 + m[0][3] * d11) * m[3][0];
  GrassmannElement t01 = m[0][1] - (m[0][2] * d00 + m[0][3] * d10) * m[2][1] -
                         (m[0][2] * d01 + m[0][3] * d11) * m[3][1];
  GrassmannElement t10 = m[1][0] - (m[1][2] * d00 + m[1][3] * d10) * m[2][0] -
                         (m[1][2] * d01 + m[1][3] * d11) * m[3][0];
  GrassmannElement t11 = m[1][1] - (m[1][2] * d00 + m[1][3] * d10) * m[2][1] -
                         (m[1][2] * d01 + m[1][3] * d11) * m[3][1];
  (void)L;
  return det2(t00, t01, t10, t11) * detDi;
}

OspReport osp_check(const OspMatrix& mm, bool group_element) {
  OspReport rep;
  const int L = mm.L;
  if (group_element) {
    GrassmannElement s = osp_sdet(mm);
    rep.sdet_one = (s == GrassmannElement::one(L));
    rep.pass = rep.sdet_one;
    if (!rep.pass) rep.detail = "superdeterminant differs from 1";
    return rep;
  }
  // beta-invariance, split by operator parity. The displayed form carries
  // the symplectic block on the last two slots, so those are the even ones.
  static const int bp[4] = {1, 1, 0, 0};
  FieldScalar B[4][4] = {};
  B[0][1] = FieldScalar(1);
  B[1][0] = FieldScalar(1);
  B[2][3] = FieldScalar(1);
  B[3][2] = FieldScalar(-1);
  rep.beta_invariant = true;
  for (int pi = 0; pi <= 1; ++pi) {
    for (int i = 0; i < 4 && rep.beta_invariant; ++i) {
      for (int j = 0; j < 4 && rep.beta_invariant; ++j) {
        GrassmannElement lhs = GrassmannElement::zero(L);
        for (int k = 0; k < 4; ++k) {
          // operator-parity-pi part of entry (k,i): block parity + coeff parity
          auto part = [&](const GrassmannElement& g, int want) {
            GrassmannElement out(L);
            for (const auto& [mask, c] : g.terms())
              if ((std::popcount(mask) & 1) == want) out.add_term(mask, c);
            return out;
          };
          int want_ki = (pi + bp[k] + bp[i]) % 2;
          int want_kj = (pi + bp[k] + bp[j]) % 2;
          lhs += part(mm.m[k][i], want_ki).scaled(B[k][j]);
          FieldScalar sgn = (pi == 1 && bp[i] == 1) ? FieldScalar(-1) : FieldScalar(1);
          lhs += part(mm.m[k][j], want_kj).scaled(B[i][k] * sgn);
        }
        if (!lhs.is_zero()) rep.beta_invariant = false;
      }
    }
  }
  rep.pass = rep.beta_invariant;
  if (!rep.pass) rep.detail = "beta invariance fails";
  return rep;
}

}  // namespace n2sc
