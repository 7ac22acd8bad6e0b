#include "n2sc/moduli.hpp"

#include "n2sc/errors.hpp"
#include "n2sc/superconformal.hpp"

namespace n2sc {

ModuliData ModuliData::identity(int gens, int W) {
  ModuliData d;
  d.a0 = GrassmannElement::one(gens);
  d.b0 = GrassmannElement::one(gens);
  d.Ap.assign(W, GrassmannElement::zero(gens));
  d.Am.assign(W, GrassmannElement::zero(gens));
  d.Mp.assign(W, GrassmannElement::zero(gens));
  d.Mm.assign(W, GrassmannElement::zero(gens));
  return d;
}

bool ModuliData::unit_scales() const {
  return a0 == GrassmannElement::one(gens()) && b0 == GrassmannElement::one(gens());
}

bool ModuliData::zero_sequences() const {
  for (const auto* v : {&Ap, &Am, &Mp, &Mm})
    for (const auto& g : *v)
      if (!g.is_zero()) return false;
  return true;
}

void ModuliData::validate() const {
  if (Am.size() != Ap.size() || Mp.size() != Ap.size() || Mm.size() != Ap.size())
    throw MismatchedContext("sequence lengths differ");
  if (!a0.has_body() || !b0.has_body())
    throw NonInvertible("a0, b0 must have invertible body");
  if (!a0.is_even() || !b0.is_even())
    throw ParityMismatch("a0, b0 must be even");
  for (const auto* v : {&Ap, &Am})
    for (const auto& g : *v)
      if (!g.is_zero() && !g.is_even())
        throw ParityMismatch("A sequences must be even");
  for (const auto* v : {&Mp, &Mm})
    for (const auto& g : *v)
      if (!g.is_zero() && !g.is_odd())
        throw ParityMismatch("M sequences must be odd");
}

ModuliData ModuliData::scaled_sequences(const GrassmannElement& t) const {
  ModuliData r = *this;
  for (auto* v : {&r.Ap, &r.Am, &r.Mp, &r.Mm})
    for (auto& g : *v) g = t * g;
  return r;
}

bool ModuliData::operator==(const ModuliData& o) const {
  return a0 == o.a0 && b0 == o.b0 && Ap == o.Ap && Am == o.Am && Mp == o.Mp &&
         Mm == o.Mm;
}

ModuliData canonicalize(ModuliData d) {
  FieldScalar body = d.a0.body();
  int s = body.real_sign();
  if (s == 0) s = body.imag_sign();
  if (s < 0) {
    d.a0 = -d.a0;
    d.b0 = -d.b0;
  }
  return d;
}

DerivationSum derivation_sum_at_zero(const ModuliData& d) {
  DerivationSum T(d.gens());
  for (int j = 1; j <= d.weight(); ++j) {
    T.add(-d.Ap[j - 1], {Family::L, j});
    T.add(-d.Am[j - 1], {Family::J, j});
    T.add(-d.Mp[j - 1], {Family::Gp, j});
    T.add(-d.Mm[j - 1], {Family::Gm, j});
  }
  return T;
}

namespace {

ESequences es_from_triple(const CoordMap& H, int W) {
  if (H.fp.hi() < W || H.fm.hi() < W)
    throw ExactnessUnavailable("triple window too small for requested weight");
  ESequences e;
  for (int j = 1; j <= W; ++j) {
    e.Ep.push_back(H.fp.coeff(j, 1, 0));
    e.Em.push_back(H.fm.coeff(j, 0, 1));
    e.MpH.push_back(H.fp.coeff(j, 0, 0));
    e.MmH.push_back(H.fm.coeff(j, 0, 0));
  }
  return e;
}

}  // namespace

namespace {

// e_map truncated to the first `w` weights; the triangular solve only needs
// the partial sequences stage by stage.
ESequences e_map_to(const ModuliData& d, int w) {
  CoordMap H = e_tilde(d, w + 1);
  return es_from_triple(H, w);
}

}  // namespace

ESequences e_map(const ModuliData& d) {
  d.validate();
  if (!d.unit_scales())
    throw MismatchedContext("e_map needs a0 = b0 = 1");
  return e_map_to(d, d.weight());
}

ModuliData e_inverse(const ESequences& e) {
  const int W = e.weight();
  if (W == 0) throw MismatchedContext("empty sequences");
  int L = e.Ep.empty() ? 4 : e.Ep[0].gens();
  ModuliData d = ModuliData::identity(L, W);
  for (int w = 1; w <= W; ++w) {
    // odd slot M_{w-1/2}: the residual at that weight is the correction
    ESequences cur = e_map_to(d, w);
    d.Mp[w - 1] += e.MpH[w - 1] - cur.MpH[w - 1];
    d.Mm[w - 1] += e.MmH[w - 1] - cur.MmH[w - 1];
    // even slot A_w, from E+- = ((w+1)/2) A+ +- A- + lower-weight remainder
    cur = e_map_to(d, w);
    GrassmannElement dp = e.Ep[w - 1] - cur.Ep[w - 1];
    GrassmannElement dm = e.Em[w - 1] - cur.Em[w - 1];
    d.Ap[w - 1] += (dp + dm).scaled(FieldScalar(Rational(1, w + 1)));
    d.Am[w - 1] += (dp - dm).scaled(FieldScalar(Rational(1, 2)));
  }
  return d;
}

CoordMap e_tilde(const ModuliData& d, int order) {
  d.validate();
  if (!d.unit_scales())
    throw MismatchedContext("e_tilde needs a0 = b0 = 1; use e_hat");
  return der_exp_apply(derivation_sum_at_zero(d), identity_map(d.gens()), order);
}

CoordMap e_hat(const ModuliData& d, int order) {
  d.validate();
  ModuliData u = d;
  u.a0 = GrassmannElement::one(d.gens());
  u.b0 = GrassmannElement::one(d.gens());
  CoordMap H = e_tilde(u, order);
  GrassmannElement xs = d.a0 * d.a0;
  GrassmannElement ps = d.a0 * d.b0;
  GrassmannElement ms = d.a0 * gr_inv(d.b0);
  return {H.x.scaled_left(xs), H.fp.scaled_left(ps), H.fm.scaled_left(ms)};
}

ModuliData e_hat_inverse(const CoordMap& H, int W) {
  const int L = H.gens();
  if (H.kind() != Kind::AtZero)
    throw IncompatibleKinds("e_hat_inverse expects an at-zero triple");
  GrassmannElement f1 = H.x.coeff(1, 0, 0);
  if (!f1.has_body()) throw NonInvertible("leading x coefficient not invertible");
  GrassmannElement a0 = gr_sqrt_perfect(f1);
  GrassmannElement gp0 = H.fp.coeff(0, 1, 0);
  if (!gp0.has_body()) throw NonInvertible("leading phi+ coefficient not invertible");
  GrassmannElement b0 = gr_inv(a0) * gp0;
  GrassmannElement xs_i = gr_inv(a0 * a0);
  GrassmannElement ps_i = gr_inv(a0 * b0);
  GrassmannElement ms_i = gr_inv(a0) * b0;
  CoordMap unit{H.x.scaled_left(xs_i), H.fp.scaled_left(ps_i),
                H.fm.scaled_left(ms_i)};
  ModuliData d = e_inverse(es_from_triple(unit, W));
  d.a0 = a0;
  d.b0 = b0;
  (void)L;
  return canonicalize(d);
}

ModuliData compose_zero(const ModuliData& d1, const ModuliData& d2) {
  const int W = d1.weight();
  if (d2.weight() != W) throw MismatchedContext("weights differ");
  const int N = W + 2;
  CoordMap H1 = e_hat(d1, N);
  CoordMap H2 = e_hat(d2, N);
  CoordMap C = ss_compose(H2, H1);
  return e_hat_inverse(C, W);
}

ModuliData compose_infinity(const ModuliData& d1, const ModuliData& d2) {
  const int W = d1.weight();
  if (d2.weight() != W) throw MismatchedContext("weights differ");
  if (!d1.unit_scales() || !d2.unit_scales())
    throw MismatchedContext("compose_infinity needs unit scales");
  auto twist = [&](const ModuliData& d) {
    ModuliData t = d;
    FieldScalar mi = -FieldScalar::i();
    for (auto& g : t.Am) g = -g;
    for (auto& g : t.Mp) g = g.scaled(mi);
    for (auto& g : t.Mm) g = g.scaled(mi);
    return t;
  };
  const int N = W + 2;
  CoordMap F = e_tilde(twist(d1), N);  // H  o I^{-1}
  CoordMap G = e_tilde(twist(d2), N);  // H~ o I^{-1}
  CoordMap C = ss_compose(F, G);       // H o I^{-1} o H~ o I^{-1}
  ModuliData t = e_inverse(es_from_triple(C, W));
  ModuliData r = t;
  FieldScalar i = FieldScalar::i();
  for (auto& g : r.Am) g = -g;
  for (auto& g : r.Mp) g = g.scaled(i);
  for (auto& g : r.Mm) g = g.scaled(i);
  return r;
}

ModuliData invert_data(const ModuliData& d) {
  d.validate();
  const int L = d.gens();
  ModuliData r = ModuliData::identity(L, d.weight());
  r.a0 = gr_inv(d.a0);
  r.b0 = gr_inv(d.b0);
  GrassmannElement b0i = gr_inv(d.b0);
  for (int j = 1; j <= d.weight(); ++j) {
    GrassmannElement a0p = gr_pow(d.a0, -2L * j);
    r.Ap[j - 1] = -(a0p * d.Ap[j - 1]);
    r.Am[j - 1] = -(a0p * d.Am[j - 1]);
    GrassmannElement a0o = gr_pow(d.a0, -2L * j + 1);
    r.Mp[j - 1] = -(a0o * d.b0 * d.Mp[j - 1]);
    r.Mm[j - 1] = -(a0o * b0i * d.Mm[j - 1]);
  }
  return canonicalize(r);
}

CoordMap infinity_series(const ModuliData& d, int order) {
  d.validate();
  if (!d.unit_scales())
    throw MismatchedContext("infinity data carries no scales");
  DerivationSum T(d.gens());
  for (int j = 1; j <= d.weight(); ++j) {
    T.add(d.Ap[j - 1], {Family::L, -j});
    T.add(d.Am[j - 1], {Family::J, -j});
    T.add(d.Mp[j - 1], {Family::Gp, 1 - j});
    T.add(d.Mm[j - 1], {Family::Gm, 1 - j});
  }
  return der_exp_apply(T, inversion_map(d.gens()), order);
}

ModuliData infinity_data_extract(const CoordMap& H, int W) {
  if (H.kind() != Kind::AtInfinity)
    throw IncompatibleKinds("expected an at-infinity triple");
  CoordMap at0 = ss_subst_inversion(H, true);  // H o I^{-1}
  ModuliData t = e_inverse(es_from_triple(at0, W));
  FieldScalar i = FieldScalar::i();
  for (auto& g : t.Am) g = -g;
  for (auto& g : t.Mp) g = g.scaled(i);
  for (auto& g : t.Mm) g = g.scaled(i);
  return t;
}

bool validate_s2k0(const ModuliData& d) {
  if (d.weight() < 1) return true;
  return d.Ap[0].is_zero() && d.Mp[0].is_zero() && d.Mm[0].is_zero();
}

bool validate_one_tube_infinity(const CoordMap& H) {
  if (H.kind() != Kind::AtInfinity)
    throw IncompatibleKinds("expected an at-infinity triple");
  // expansion: psi+-(x) = sum m_{j-1/2} x^{-j}, g+-(x) = i/x + sum i a_j x^{-j-1}
  GrassmannElement m_p = H.fp.coeff(-1, 0, 0);
  GrassmannElement m_m = H.fm.coeff(-1, 0, 0);
  FieldScalar mi = -FieldScalar::i();
  GrassmannElement a1p = H.fp.coeff(-2, 1, 0).scaled(mi);
  GrassmannElement a1m = H.fm.coeff(-2, 0, 1).scaled(mi);
  return m_p.is_zero() && m_m.is_zero() && a1p == -a1m;
}

}  // namespace n2sc
