#include "n2sc/nonhomo.hpp"

#include <sstream>

#include "n2sc/errors.hpp"

namespace n2sc {

namespace {
const FieldScalar kI = FieldScalar::i();
FieldScalar inv_sqrt2() { return FieldScalar::half_sqrt2(); }  // 1/sqrt2
}  // namespace

NonhomoPoint to_nonhomo(const Point& p) {
  FieldScalar r = inv_sqrt2();
  return {p.z, (p.tp + p.tm).scaled(r), (p.tp - p.tm).scaled(-(kI * r))};
}

Point to_homo(const NonhomoPoint& p) {
  FieldScalar r = inv_sqrt2();
  return {p.z, (p.th + p.ths.scaled(kI)).scaled(r),
          (p.th - p.ths.scaled(kI)).scaled(r)};
}

SuperSeries nh_from_homo_series(const SuperSeries& s) {
  // phi+ -> (th + i th*)/sqrt2, phi- -> (th - i th*)/sqrt2,
  // phi+ phi- -> -i th th*
  SuperSeries r(s.kind(), s.gens(), s.lo(), s.hi());
  FieldScalar rt = inv_sqrt2();
  for (const auto& [key, c] : s.terms()) {
    if (!key.fp && !key.fm) {
      r.add_term(key.k, 0, 0, c);
    } else if (key.fp && key.fm) {
      r.add_term(key.k, 1, 1, c.scaled(-kI));
    } else {
      FieldScalar star = key.fp ? kI * rt : -(kI * rt);
      r.add_term(key.k, 1, 0, c.scaled(rt));
      r.add_term(key.k, 0, 1, c.scaled(star));
    }
  }
  return r;
}

SuperSeries homo_from_nh_series(const SuperSeries& s) {
  // th -> (phi+ + phi-)/sqrt2, th* -> -i(phi+ - phi-)/sqrt2,
  // th th* -> i phi+ phi-
  SuperSeries r(s.kind(), s.gens(), s.lo(), s.hi());
  FieldScalar rt = inv_sqrt2();
  for (const auto& [key, c] : s.terms()) {
    if (!key.fp && !key.fm) {
      r.add_term(key.k, 0, 0, c);
    } else if (key.fp && key.fm) {
      r.add_term(key.k, 1, 1, c.scaled(kI));
    } else if (key.fp) {  // theta slot
      r.add_term(key.k, 1, 0, c.scaled(rt));
      r.add_term(key.k, 0, 1, c.scaled(rt));
    } else {  // theta* slot
      r.add_term(key.k, 1, 0, c.scaled(-(kI * rt)));
      r.add_term(key.k, 0, 1, c.scaled(kI * rt));
    }
  }
  return r;
}

NonhomoMap to_nonhomo(const CoordMap& H) {
  FieldScalar rt = inv_sqrt2();
  NonhomoMap r;
  r.x = nh_from_homo_series(H.x);
  r.th = nh_from_homo_series((H.fp + H.fm).scaled(rt));
  r.ths = nh_from_homo_series((H.fp - H.fm).scaled(-(kI * rt)));
  return r;
}

CoordMap to_homo(const NonhomoMap& H) {
  FieldScalar rt = inv_sqrt2();
  CoordMap r;
  r.x = homo_from_nh_series(H.x);
  r.fp = homo_from_nh_series((H.th + H.ths.scaled(kI)).scaled(rt));
  r.fm = homo_from_nh_series((H.th - H.ths.scaled(kI)).scaled(rt));
  return r;
}

SuperSeries nh_D(const SuperSeries& s) {
  // d/dtheta + theta d/dx, both on the theta slot
  SuperSeries th = SuperSeries::monomial(s.kind(), s.gens(), 0, 1, 0,
                                         GrassmannElement::one(s.gens()));
  return s.dphi_plus() + th * s.ddx();
}

SuperSeries nh_Dstar(const SuperSeries& s) {
  SuperSeries ths = SuperSeries::monomial(s.kind(), s.gens(), 0, 0, 1,
                                          GrassmannElement::one(s.gens()));
  return -(s.dphi_minus() + ths * s.ddx());
}

NhReport nh_check(const NonhomoMap& H) {
  NhReport rep;
  auto flag = [&](const SuperSeries& s, const char* cond) {
    if (!rep.pass || s.is_zero()) return;
    const auto& [key, c] = *s.terms().begin();
    rep.pass = false;
    std::ostringstream os;
    os << cond << " violated at x^" << key.k << (key.fp ? " th" : "")
       << (key.fm ? " th*" : "") << ", coefficient " << c.str();
    rep.first_violation = os.str();
  };
  SuperSeries c1 = nh_D(H.th) + nh_Dstar(H.ths);
  SuperSeries c2 = nh_D(H.ths) - nh_Dstar(H.th);
  SuperSeries c3 = nh_D(H.x) - H.th * nh_D(H.th) - H.ths * nh_D(H.ths);
  SuperSeries c4 = nh_Dstar(H.x) - H.th * nh_Dstar(H.th) - H.ths * nh_Dstar(H.ths);
  flag(c1, "D th~ + D* th~*");
  flag(c2, "D th~* - D* th~");
  flag(c3, "D x~ - th~ D th~ - th~* D th~*");
  flag(c4, "D* x~ - th~ D* th~ - th~* D* th~*");
  return rep;
}

SuperSeries nh_apply_basis(NhFamily fam, int j, const SuperSeries& s) {
  const int L = s.gens();
  Kind kind = s.kind();
  GrassmannElement one = GrassmannElement::one(L);
  auto xj = [&](int p) { return SuperSeries::monomial(kind, L, p, 0, 0, one); };
  SuperSeries mono_t = SuperSeries::monomial(kind, L, 0, 1, 0, one);
  SuperSeries mono_s = SuperSeries::monomial(kind, L, 0, 0, 1, one);
  switch (fam) {
    case NhFamily::L:
      return der_apply_basis({Family::L, j}, s);
    case NhFamily::J: {
      SuperSeries v = mono_t * s.dphi_minus() - mono_s * s.dphi_plus();
      return (xj(j) * v).scaled(kI);
    }
    case NhFamily::G: {
      SuperSeries v = xj(j) * s.dphi_plus() - xj(j) * (mono_t * s.ddx()) -
                      (xj(j - 1) * (mono_t * mono_s) * s.dphi_minus())
                          .scaled(FieldScalar(Rational(j)));
      return -v;
    }
    case NhFamily::Gstar: {
      SuperSeries v = xj(j) * s.dphi_minus() - xj(j) * (mono_s * s.ddx()) +
                      (xj(j - 1) * (mono_t * mono_s) * s.dphi_plus())
                          .scaled(FieldScalar(Rational(j)));
      return v;
    }
  }
  throw OutOfSpan("unknown family");
}

namespace {

SuperSeries nh_probe(int L, int k, int fp, int fm) {
  SuperSeries s(Kind::AtZero, L, -kEntire + 1, kEntire);
  s.add_term(k, fp, fm, GrassmannElement::one(L));
  return s;
}

Parity nh_parity(NhFamily f) {
  return (f == NhFamily::G || f == NhFamily::Gstar) ? Parity::Odd : Parity::Even;
}

SuperSeries nh_apply_terms(const std::vector<NhTerm>& ts, const SuperSeries& s) {
  SuperSeries r = SuperSeries::zero(s.kind(), s.gens());
  r.set_window(-kEntire + 1, kEntire);
  for (const auto& t : ts)
    r = r + nh_apply_basis(t.fam, t.j, s).scaled_left(t.coef);
  return r;
}

}  // namespace

std::vector<NhTerm> nh_bracket_basis(NhFamily fa, int a, NhFamily fb, int b,
                                     int gens) {
  const int L = gens;
  int sign = (nh_parity(fa) == Parity::Odd && nh_parity(fb) == Parity::Odd) ? 1 : -1;
  auto bracket_on = [&](const SuperSeries& u) {
    SuperSeries st = nh_apply_basis(fa, a, nh_apply_basis(fb, b, u));
    SuperSeries ts = nh_apply_basis(fb, b, nh_apply_basis(fa, a, u));
    return sign > 0 ? st + ts : st - ts;
  };
  std::vector<NhTerm> out;
  auto add = [&](NhFamily f, int j, const GrassmannElement& c) {
    if (!c.is_zero()) out.push_back({f, j, c});
  };
  SuperSeries on_x = bracket_on(nh_probe(L, 1, 0, 0));
  for (const auto& [key, c] : on_x.terms()) {
    if (!key.fp && !key.fm)
      add(NhFamily::L, key.k - 1, -c);
    else if (key.fp && !key.fm)
      add(NhFamily::G, key.k, c);
    else if (!key.fp && key.fm)
      add(NhFamily::Gstar, key.k, -c);
  }
  SuperSeries on_t = bracket_on(nh_probe(L, 0, 1, 0));
  for (const auto& [key, c] : on_t.terms()) {
    if (!key.fp && key.fm) add(NhFamily::J, key.k, c.scaled(kI));
  }
  // verify on a probe basis
  int J = 2 * (std::abs(a) + std::abs(b)) + 4;
  for (int k = -J; k <= J; ++k) {
    for (auto [fp, fm] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
      SuperSeries probe = nh_probe(L, k, fp, fm);
      if (!bracket_on(probe).agrees_with(nh_apply_terms(out, probe)))
        throw NotInSpan("nonhomogeneous bracket not in the L/J/G/G* span");
    }
  }
  return out;
}

std::vector<NhTerm> nh_table_bracket(NhFamily fa, int a, NhFamily fb, int b,
                                     int gens) {
  std::vector<NhTerm> out;
  auto add = [&](NhFamily f, int j, const FieldScalar& c) {
    if (!c.is_zero()) out.push_back({f, j, GrassmannElement::scalar(gens, c)});
  };
  bool ga = nh_parity(fa) == Parity::Odd, gb = nh_parity(fb) == Parity::Odd;
  if (fa == NhFamily::L && fb == NhFamily::L) {
    add(NhFamily::L, a + b, FieldScalar(Rational(a - b)));
  } else if (fa == NhFamily::L && fb == NhFamily::J) {
    add(NhFamily::J, a + b, FieldScalar(Rational(-b)));
  } else if (fa == NhFamily::J && fb == NhFamily::J) {
    // central only
  } else if (fa == NhFamily::L && gb) {
    add(fb, a + b, FieldScalar(Rational(a, 2) - Rational(b) + Rational(1, 2)));
  } else if (fa == NhFamily::J && fb == NhFamily::G) {
    add(NhFamily::Gstar, a + b, kI);
  } else if (fa == NhFamily::J && fb == NhFamily::Gstar) {
    add(NhFamily::G, a + b, -kI);
  } else if (ga && gb && fa == fb) {
    add(NhFamily::L, a + b - 1, FieldScalar(2));
  } else if (fa == NhFamily::G && fb == NhFamily::Gstar) {
    add(NhFamily::J, a + b - 1, kI * FieldScalar(Rational(a - b)));
  } else if (fa == NhFamily::Gstar && fb == NhFamily::G) {
    add(NhFamily::J, a + b - 1, kI * FieldScalar(Rational(b - a)));
  } else {
    // mirrored even-odd orders via skew symmetry
    auto rev = nh_table_bracket(fb, b, fa, a, gens);
    FieldScalar s = (ga && gb) ? FieldScalar(1) : FieldScalar(-1);
    for (auto& t : rev) out.push_back({t.fam, t.j, t.coef.scaled(s)});
  }
  return out;
}

NhVerifyReport nh_verify_representation(int window, int gens) {
  NhVerifyReport rep;
  const NhFamily fams[] = {NhFamily::L, NhFamily::J, NhFamily::G,
                           NhFamily::Gstar};
  for (NhFamily fa : fams) {
    for (NhFamily fb : fams) {
      for (int a = -window; a <= window; ++a) {
        for (int b = -window; b <= window; ++b) {
          auto got = nh_bracket_basis(fa, a, fb, b, gens);
          auto want = nh_table_bracket(fa, a, fb, b, gens);
          ++rep.pairs_checked;
          // compare as applied operators on a probe set
          bool same = true;
          for (int k = -2; k <= 2 && same; ++k) {
            for (auto [fp, fm] :
                 {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
              SuperSeries probe = nh_probe(gens, k, fp, fm);
              if (!nh_apply_terms(got, probe).agrees_with(
                      nh_apply_terms(want, probe))) {
                same = false;
                break;
              }
            }
          }
          if (!same) {
            rep.pass = false;
            std::ostringstream os;
            os << "mismatch at [" << static_cast<int>(fa) << "_" << a << ", "
               << static_cast<int>(fb) << "_" << b << "]";
            rep.mismatches.push_back(os.str());
          }
        }
      }
    }
  }
  return rep;
}

void NhProjectiveParams::validate() const {
  int L = a.gens();
  GrassmannElement one = GrassmannElement::one(L);
  if (a * d - b * c != one) throw ExtractionFailed("ad - bc != 1");
  if (e * e + es * es != one - g * dl + dls * gs)
    throw ExtractionFailed("e^2 + e*^2 != 1 - gamma delta + delta* gamma*");
}

NhProjectiveParams nh_projective_convert(const ProjectiveParams& p) {
  FieldScalar rt = inv_sqrt2();
  FieldScalar half(Rational(1, 2));
  NhProjectiveParams t;
  t.a = p.a;
  t.b = p.b;
  t.c = p.c;
  t.d = p.d;
  t.g = (p.gp + p.gm).scaled(rt);
  t.gs = (p.gp - p.gm).scaled(-(kI * rt));
  t.dl = (p.dp + p.dm).scaled(rt);
  t.dls = (p.dp - p.dm).scaled(-(kI * rt));
  t.e = (p.ep + p.em).scaled(half);
  t.es = (p.ep - p.em).scaled(-(kI * half));
  t.validate();
  return t;
}

NonhomoMap nh_projective_map(const NhProjectiveParams& t, int order) {
  const int L = t.a.gens();
  if (!t.d.has_body())
    throw NonInvertibleDenominator("series at zero needs body(d) != 0");
  Kind kind = Kind::AtZero;
  GrassmannElement one = GrassmannElement::one(L);
  auto C = [&](const GrassmannElement& g) { return SuperSeries::constant(kind, g); };
  SuperSeries w = SuperSeries::monomial(kind, L, 1, 0, 0, one);
  SuperSeries rho = SuperSeries::monomial(kind, L, 0, 1, 0, one);
  SuperSeries rhs = SuperSeries::monomial(kind, L, 0, 0, 1, one);
  SuperSeries den = C(t.c) * w + C(t.d);
  SuperSeries d1 = ss_inv(den);
  SuperSeries d2 = d1 * d1;
  SuperSeries d3 = d2 * d1;
  GrassmannElement q = t.dl * t.dls;       // delta delta*
  GrassmannElement s = t.g * t.dls - t.gs * t.dl;  // gamma delta* - gamma* delta
  GrassmannElement f = -(t.es * t.g * t.gs * t.d);
  GrassmannElement fs = t.e * t.g * t.gs * t.d;
  GrassmannElement h = t.es * (q * t.c - s * t.d) + t.e * q * t.g * t.gs * t.d;
  GrassmannElement hs = -(t.e * (q * t.c - s * t.d)) + t.es * q * t.g * t.gs * t.d;

  NonhomoMap r;
  r.x = (C(t.a) * w + C(t.b)) * d1
      + rho * (C(t.e) * (C(t.g) * w + C(t.dl)) + C(t.es) * (C(t.gs) * w + C(t.dls))
               + C(t.es * q * t.g) - C(t.e * q * t.gs)) * d2
      + rhs * (C(t.e) * (C(t.gs) * w + C(t.dls)) - C(t.es) * (C(t.g) * w + C(t.dl))
               + C(t.es * q * t.gs) + C(t.e * q * t.g)) * d2
      - rho * rhs * (C(t.g * t.gs * t.d).scaled(FieldScalar(2)) * w
                     - C(s) * (C(t.c) * w - C(t.d))
                     - C(q * t.c).scaled(FieldScalar(2))) * d3;
  r.th = (C(t.g) * w + C(t.dl)) * d1 + rho * C(t.e) * d1
       + rho * (C(f) * w + C(h)) * d2
       - rhs * C(t.es) * d1 - rhs * (C(fs) * w + C(hs)) * d2
       + rho * rhs * C(t.gs * t.d - t.dls * t.c) * d2;
  r.ths = (C(t.gs) * w + C(t.dls)) * d1 + rho * C(t.es) * d1
        + rho * (C(fs) * w + C(hs)) * d2
        + rhs * C(t.e) * d1 + rhs * (C(f) * w + C(h)) * d2
        - rho * rhs * C(t.g * t.d - t.dl * t.c) * d2;
  r.x = r.x.truncated(order);
  r.th = r.th.truncated(order);
  r.ths = r.ths.truncated(order);
  return r;
}

NonhomoMap nh_block_form(const GrassmannElement& a, const GrassmannElement& b,
                         const GrassmannElement& c, const GrassmannElement& d,
                         const std::array<GrassmannElement, 4>& tmat, int order) {
  const int L = a.gens();
  Kind kind = Kind::AtZero;
  GrassmannElement one = GrassmannElement::one(L);
  auto C = [&](const GrassmannElement& g) { return SuperSeries::constant(kind, g); };
  SuperSeries w = SuperSeries::monomial(kind, L, 1, 0, 0, one);
  SuperSeries rho = SuperSeries::monomial(kind, L, 0, 1, 0, one);
  SuperSeries rhs = SuperSeries::monomial(kind, L, 0, 0, 1, one);
  SuperSeries d1 = ss_inv(C(c) * w + C(d));
  NonhomoMap r;
  r.x = (C(a) * w + C(b)) * d1;
  r.th = rho * C(tmat[0]) * d1 + rhs * C(tmat[1]) * d1;
  r.ths = rho * C(tmat[2]) * d1 + rhs * C(tmat[3]) * d1;
  r.x = r.x.truncated(order);
  r.th = r.th.truncated(order);
  r.ths = r.ths.truncated(order);
  return r;
}

}  // namespace n2sc
