#include "n2sc/series.hpp"

#include <functional>

#include <sstream>

#include "n2sc/errors.hpp"

namespace n2sc {

namespace {
bool in_window(Kind kind, int lo, int hi, int k) {
  return kind == Kind::AtZero ? (k <= hi && k >= lo) : (k >= lo && k <= hi);
}
}  // namespace

SuperSeries SuperSeries::monomial(Kind kind, int gens, int k, int fp, int fm,
                                  const GrassmannElement& coef) {
  SuperSeries s(kind, gens, kind == Kind::AtZero ? k : -kEntire,
                kind == Kind::AtZero ? kEntire : k);
  s.add_term(k, fp, fm, coef);
  if (coef.is_zero()) {
    s.lo_ = kind == Kind::AtZero ? 0 : -kEntire;
    s.hi_ = kind == Kind::AtZero ? kEntire : 0;
  }
  return s;
}

GrassmannElement SuperSeries::coeff(int k, int fp, int fm) const {
  auto it = t_.find(Key{k, fp, fm});
  return it == t_.end() ? GrassmannElement::zero(L_) : it->second;
}

void SuperSeries::set_window(int lo, int hi) {
  lo_ = lo;
  hi_ = hi;
  std::erase_if(t_, [&](const auto& kv) {
    return !in_window(kind_, lo_, hi_, kv.first.k);
  });
}

void SuperSeries::tighten() {
  if (kind_ == Kind::AtZero) {
    if (t_.empty()) {
      lo_ = hi_ >= kEntire ? kEntire : hi_ + 1;
    } else {
      int m = kEntire;
      for (const auto& [key, c] : t_) m = std::min(m, key.k);
      lo_ = std::max(lo_, m);
    }
  } else {
    if (t_.empty()) {
      hi_ = lo_ <= -kEntire ? -kEntire : lo_ - 1;
    } else {
      int m = -kEntire;
      for (const auto& [key, c] : t_) m = std::max(m, key.k);
      hi_ = std::min(hi_, m);
    }
  }
}

void SuperSeries::add_term(int k, int fp, int fm, const GrassmannElement& c) {
  if (c.is_zero()) return;
  // widening the support bound is always sound; the exactness side truncates
  if (kind_ == Kind::AtZero && k < lo_) lo_ = k;
  if (kind_ == Kind::AtInfinity && k > hi_) hi_ = k;
  if (!in_window(kind_, lo_, hi_, k)) return;
  Key key{k, fp, fm};
  auto [it, inserted] = t_.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

std::optional<Parity> SuperSeries::parity() const {
  if (t_.empty()) return Parity::Even;
  std::optional<Parity> p;
  for (const auto& [key, c] : t_) {
    auto cp = c.parity();
    if (!cp) return std::nullopt;
    auto total = static_cast<Parity>((static_cast<int>(*cp) + key.fp + key.fm) % 2);
    if (!p)
      p = total;
    else if (*p != total)
      return std::nullopt;
  }
  return p;
}

SuperSeries SuperSeries::operator-() const {
  SuperSeries r = *this;
  for (auto& [k, c] : r.t_) c = -c;
  return r;
}

SuperSeries SuperSeries::operator+(const SuperSeries& o) const {
  if (kind_ != o.kind_) throw IncompatibleKinds("add");
  if (L_ != o.L_) throw MismatchedContext("series Grassmann contexts differ");
  SuperSeries r(kind_, L_, 0, 0);
  if (kind_ == Kind::AtZero) {
    r.lo_ = std::min(lo_, o.lo_);
    r.hi_ = std::min(hi_, o.hi_);
  } else {
    r.hi_ = std::max(hi_, o.hi_);
    r.lo_ = std::max(lo_, o.lo_);
  }
  for (const auto& [key, c] : t_) r.add_term(key.k, key.fp, key.fm, c);
  for (const auto& [key, c] : o.t_) r.add_term(key.k, key.fp, key.fm, c);
  r.tighten();
  return r;
}

SuperSeries SuperSeries::operator-(const SuperSeries& o) const {
  return *this + (-o);
}

SuperSeries SuperSeries::operator*(const SuperSeries& o) const {
  if (kind_ != o.kind_) throw IncompatibleKinds("mul");
  if (L_ != o.L_) throw MismatchedContext("series Grassmann contexts differ");
  SuperSeries r(kind_, L_, 0, 0);
  if (kind_ == Kind::AtZero) {
    r.lo_ = add_deg(lo_, o.lo_);
    r.hi_ = std::min(add_deg(hi_, o.lo_), add_deg(o.hi_, lo_));
  } else {
    r.hi_ = add_deg(hi_, o.hi_);
    r.lo_ = std::max(add_deg(lo_, o.hi_), add_deg(o.lo_, hi_));
  }
  for (const auto& [ka, ca] : t_) {
    for (const auto& [kb, cb] : o.t_) {
      if ((ka.fp & kb.fp) || (ka.fm & kb.fm)) continue;  // phi^2 = 0
      int deg_a = ka.fp + ka.fm;
      // move cb past phi^{e_a}; reorder phi- phi+ -> -phi+ phi-
      int swap_sign = (ka.fm & kb.fp) ? -1 : 1;
      GrassmannElement c = GrassmannElement::zero(L_);
      if (deg_a % 2 == 0) {
        c = ca * cb;
      } else {
        // split cb by parity for the Koszul sign
        for (const auto& [mb, sb] : cb.terms()) {
          GrassmannElement piece(L_);
          piece.add_term(mb, (std::popcount(mb) % 2) ? -sb : sb);
          c += ca * piece;
        }
      }
      if (swap_sign < 0) c = -c;
      r.add_term(ka.k + kb.k, ka.fp | kb.fp, ka.fm | kb.fm, c);
    }
  }
  r.tighten();
  return r;
}

SuperSeries SuperSeries::scaled_left(const GrassmannElement& c) const {
  SuperSeries r(kind_, L_, lo_, hi_);
  for (const auto& [key, v] : t_) r.add_term(key.k, key.fp, key.fm, c * v);
  return r;
}

SuperSeries SuperSeries::scaled(const FieldScalar& s) const {
  SuperSeries r(kind_, L_, lo_, hi_);
  for (const auto& [key, v] : t_) r.add_term(key.k, key.fp, key.fm, v.scaled(s));
  return r;
}

SuperSeries SuperSeries::ddx() const {
  SuperSeries r(kind_, L_, add_deg(lo_, -1), add_deg(hi_, -1));
  for (const auto& [key, c] : t_) {
    if (key.k == 0) continue;
    r.add_term(key.k - 1, key.fp, key.fm, c.scaled(FieldScalar(Rational(key.k))));
  }
  return r;
}

SuperSeries SuperSeries::dphi_plus() const {
  SuperSeries r(kind_, L_, lo_, hi_);
  for (const auto& [key, c] : t_) {
    if (!key.fp) continue;
    GrassmannElement v = c;
    // move the odd derivation past the coefficient
    GrassmannElement out(L_);
    for (const auto& [m, s] : v.terms())
      out.add_term(m, (std::popcount(m) % 2) ? -s : s);
    r.add_term(key.k, 0, key.fm, out);
  }
  return r;
}

SuperSeries SuperSeries::dphi_minus() const {
  SuperSeries r(kind_, L_, lo_, hi_);
  for (const auto& [key, c] : t_) {
    if (!key.fm) continue;
    int extra = key.fp;  // hop over phi+ too
    GrassmannElement out(L_);
    for (const auto& [m, s] : c.terms()) {
      bool neg = ((std::popcount(m) + extra) % 2) != 0;
      out.add_term(m, neg ? -s : s);
    }
    r.add_term(key.k, key.fp, 0, out);
  }
  return r;
}

bool SuperSeries::agrees_with(const SuperSeries& o) const {
  if (kind_ != o.kind_ || L_ != o.L_) return false;
  // A coefficient is known when it is inside the exactness bound or on the
  // guaranteed-zero support side, so agreement is checked up to min(hi) /
  // down to max(lo).
  int hi = std::min(hi_, o.hi_);
  int lo = std::max(lo_, o.lo_);
  auto known_both = [&](int k) {
    return kind_ == Kind::AtZero ? k <= hi : k >= lo;
  };
  auto check = [&](const SuperSeries& a, const SuperSeries& b) {
    for (const auto& [key, c] : a.t_) {
      if (!known_both(key.k)) continue;
      if (b.coeff(key.k, key.fp, key.fm) != c) return false;
    }
    return true;
  };
  return check(*this, o) && check(o, *this);
}

SuperSeries SuperSeries::truncated(int bound) const {
  SuperSeries r = *this;
  if (kind_ == Kind::AtZero) {
    r.set_window(lo_, std::min(hi_, bound));
  } else {
    r.set_window(std::max(lo_, bound), hi_);
  }
  return r;
}

std::string SuperSeries::str() const {
  std::ostringstream os;
  os << (kind_ == Kind::AtZero ? "at0" : "atInf") << "[" << lo_ << "," << hi_
     << "]{";
  bool first = true;
  for (const auto& [key, c] : t_) {
    if (!first) os << " + ";
    os << "(" << c.str() << ")x^" << key.k;
    if (key.fp) os << " f+";
    if (key.fm) os << " f-";
    first = false;
  }
  os << "}";
  return os.str();
}

SuperSeries ss_dplus(const SuperSeries& a) {
  // d/dphi+ + phi- d/dx
  SuperSeries r = a.dphi_plus();
  SuperSeries dx = a.ddx();
  SuperSeries phim = SuperSeries::monomial(a.kind(), a.gens(), 0, 0, 1,
                                           GrassmannElement::one(a.gens()));
  return r + phim * dx;
}

SuperSeries ss_dminus(const SuperSeries& a) {
  SuperSeries r = a.dphi_minus();
  SuperSeries dx = a.ddx();
  SuperSeries phip = SuperSeries::monomial(a.kind(), a.gens(), 0, 1, 0,
                                           GrassmannElement::one(a.gens()));
  return r + phip * dx;
}

SuperSeries ss_inv(const SuperSeries& a) {
  if (a.is_zero()) throw NonInvertible("zero series");
  const int L = a.gens();
  // anchor: extreme pure-x term with invertible body
  bool found = false;
  int anchor_k = 0;
  for (const auto& [key, c] : a.terms()) {
    if (key.fp || key.fm || !c.has_body()) continue;
    if (!found || (a.kind() == Kind::AtZero ? key.k < anchor_k
                                            : key.k > anchor_k)) {
      anchor_k = key.k;
      found = true;
    }
  }
  if (!found)
    throw NonInvertible("series has no invertible pure-x coefficient");
  GrassmannElement c0 = a.coeff(anchor_k, 0, 0);
  GrassmannElement c0i = gr_inv(c0);
  // a = c0 x^k (1 + u); inverse = c0^{-1} (sum (-u)^n) x^{-k}
  SuperSeries xmk = SuperSeries::monomial(a.kind(), L, -anchor_k, 0, 0,
                                          GrassmannElement::one(L));
  SuperSeries one = SuperSeries::constant(a.kind(), GrassmannElement::one(L));
  SuperSeries u = (xmk * a).scaled_left(c0i) - one;
  SuperSeries acc = one + u.scaled(FieldScalar(-1));
  SuperSeries pow = u;
  int span = a.kind() == Kind::AtZero
                 ? (a.hi() >= kEntire ? 64 : a.hi() - anchor_k)
                 : (a.lo() <= -kEntire ? 64 : anchor_k - a.lo());
  int cap = std::min(200, std::abs(span) + 2 * L + 8);
  bool done = false;
  for (int n = 2; n <= cap; ++n) {
    pow = pow * u;
    if (pow.is_zero()) {
      done = true;
      break;
    }
    acc = acc + (n % 2 ? pow.scaled(FieldScalar(-1)) : pow);
  }
  if (!done) {
    // geometric tail not exhausted: cap the claimed exactness, which is
    // sound when u moves strictly away from the anchor
    bool moves = true;
    for (const auto& [key, c] : u.terms())
      if (a.kind() == Kind::AtZero ? key.k < 1 : key.k > -1) moves = false;
    if (!moves) throw NonInvertible("series inverse did not stabilize");
    if (a.kind() == Kind::AtZero)
      acc.set_window(acc.lo(), std::min(acc.hi(), cap - 1));
    else
      acc.set_window(std::max(acc.lo(), -(cap - 1)), acc.hi());
  }
  return (acc.scaled_left(c0i)) * xmk;
}

SuperSeries ss_pow(const SuperSeries& a, long n) {
  SuperSeries base = n < 0 ? ss_inv(a) : a;
  unsigned long k = n < 0 ? -static_cast<unsigned long>(n) : n;
  SuperSeries r = SuperSeries::constant(a.kind(), GrassmannElement::one(a.gens()));
  SuperSeries acc = base;
  bool rset = false;
  while (k) {
    if (k & 1) {
      r = rset ? r * acc : acc;
      rset = true;
    }
    k >>= 1;
    if (k) acc = acc * acc;
  }
  if (!rset) return SuperSeries::constant(a.kind(), GrassmannElement::one(a.gens()));
  return r;
}

CoordMap identity_map(int gens) {
  GrassmannElement one = GrassmannElement::one(gens);
  return {SuperSeries::monomial(Kind::AtZero, gens, 1, 0, 0, one),
          SuperSeries::monomial(Kind::AtZero, gens, 0, 1, 0, one),
          SuperSeries::monomial(Kind::AtZero, gens, 0, 0, 1, one)};
}

CoordMap shift_map(const Point& p) {
  int L = p.z.gens();
  CoordMap m = identity_map(L);
  m.x.add_term(0, 0, 0, -p.z);
  m.x.add_term(0, 1, 0, p.tm);  // -phi+ t- = +t- phi+
  m.x.add_term(0, 0, 1, p.tp);
  m.fp.add_term(0, 0, 0, -p.tp);
  m.fm.add_term(0, 0, 0, -p.tm);
  return m;
}

SuperSeries ss_subst(const SuperSeries& outer, const CoordMap& inner) {
  if (outer.kind() != inner.kind())
    throw IncompatibleKinds("substitution kind mismatch");
  int L = outer.gens();
  Kind kind = outer.kind();
  // preconditions for formal convergence; an entire outer is a finite sum
  // and accepts anything whose needed inverses exist
  if (outer.entire()) {
    // no precondition
  } else if (kind == Kind::AtZero) {
    if (inner.x.coeff(0, 0, 0).has_body())
      throw SubstitutionDiverges(
          "inner even part has constant term with nonzero body");
  } else {
    // substituting into unbounded negative powers needs a positive-degree
    // invertible leading term in the inner even part
    bool ok = false;
    for (const auto& [key, c] : inner.x.terms())
      if (!key.fp && !key.fm && key.k >= 1 && c.has_body()) ok = true;
    if (!ok)
      throw SubstitutionDiverges(
          "inner even part does not vanish suitably at infinity");
  }

  // collect the powers of X we need
  std::map<long, SuperSeries> xpow;
  xpow[0] = SuperSeries::constant(kind, GrassmannElement::one(L));
  SuperSeries xinv = SuperSeries::zero(kind, L);
  bool have_inv = false;
  std::function<const SuperSeries&(long)> get_pow =
      [&](long k) -> const SuperSeries& {
    auto it = xpow.find(k);
    if (it != xpow.end()) return it->second;
    if (k > 0) {
      const SuperSeries& prev = get_pow(k - 1);
      return xpow.emplace(k, prev * inner.x).first->second;
    }
    if (!have_inv) {
      xinv = ss_inv(inner.x);
      have_inv = true;
    }
    const SuperSeries& prev = get_pow(k + 1);
    return xpow.emplace(k, prev * xinv).first->second;
  };

  SuperSeries pm = inner.fp * inner.fm;
  SuperSeries result = SuperSeries::zero(kind, L);
  bool window_set = false;
  int rlo = 0, rhi = 0;
  auto merge_window = [&](const SuperSeries& piece) {
    if (!window_set) {
      rlo = piece.lo();
      rhi = piece.hi();
      window_set = true;
    } else if (kind == Kind::AtZero) {
      rlo = std::min(rlo, piece.lo());
      rhi = std::min(rhi, piece.hi());
    } else {
      rhi = std::max(rhi, piece.hi());
      rlo = std::max(rlo, piece.lo());
    }
  };

  // When the inner even part has degree-zero content (nilpotent soul or
  // phi-sector constants), powers X^k reach low output degrees for k up to
  // the nilpotency bound of that content; the outer exactness cap shrinks
  // accordingly.
  int nil_extra = 0;
  if (kind == Kind::AtZero) {
    SuperSeries s0(kind, L, 0, kEntire);
    for (const auto& [key, c] : inner.x.terms())
      if (key.k == 0) s0.add_term(0, key.fp, key.fm, c);
    if (!s0.is_zero()) {
      SuperSeries pw = s0;
      int e = 1;
      while (!pw.is_zero() && e <= L + 3) {
        pw = pw * s0;
        ++e;
      }
      nil_extra = e - 1;
    }
  } else {
    // mirrored: content at or above the anchor degree other than the anchor
    // itself lets X^k reach high degrees through nilpotent factors
    int anchor = -kEntire;
    for (const auto& [key, c] : inner.x.terms())
      if (!key.fp && !key.fm && c.has_body()) anchor = std::max(anchor, key.k);
    int excess = 0;
    for (const auto& [key, c] : inner.x.terms()) {
      bool is_anchor = key.k == anchor && !key.fp && !key.fm;
      if (!is_anchor && key.k >= anchor)
        excess = std::max(excess, key.k - anchor + 1);
    }
    if (excess > 0) nil_extra = (L + 2) * excess;
  }

  std::map<std::pair<int, int>, SuperSeries> acc;  // by phi mask of outer term
  for (const auto& [key, c] : outer.terms()) {
    const SuperSeries& xp = get_pow(key.k);
    if (xp.is_zero()) continue;
    SuperSeries piece = xp.scaled_left(c);
    auto it = acc.find({key.fp, key.fm});
    if (it == acc.end())
      acc.emplace(std::pair<int, int>{key.fp, key.fm}, piece);
    else
      it->second = it->second + piece;
  }
  for (auto& [mask, series] : acc) {
    SuperSeries piece = series;
    if (mask.first && mask.second)
      piece = piece * pm;
    else if (mask.first)
      piece = piece * inner.fp;
    else if (mask.second)
      piece = piece * inner.fm;
    merge_window(piece);
    result = result + piece;
  }
  if (window_set) {
    // the outer exactness bound also limits the result: unknown outer
    // coefficients at |k| beyond the window feed degrees beyond it
    if (kind == Kind::AtZero) {
      int outer_cap = outer.entire() ? kEntire : add_deg(outer.hi(), -nil_extra);
      result.set_window(result.lo(), std::min(result.hi(), outer_cap));
    } else {
      int outer_cap = outer.entire() ? -kEntire : add_deg(outer.lo(), nil_extra);
      result.set_window(std::max(result.lo(), outer_cap), result.hi());
    }
  }
  return result;
}

CoordMap ss_compose(const CoordMap& outer, const CoordMap& inner) {
  return {ss_subst(outer.x, inner), ss_subst(outer.fp, inner),
          ss_subst(outer.fm, inner)};
}

GrassmannElement ss_eval(const SuperSeries& s, const Point& p) {
  int L = s.gens();
  if (!s.entire()) {
    int deg = p.z.nilpotency_degree();
    if (p.z.has_body() || (s.kind() == Kind::AtZero ? s.hi() < deg - 1
                                                    : s.lo() > 1 - deg))
      throw SubstitutionDiverges("evaluation tail not provably zero");
  }
  GrassmannElement r = GrassmannElement::zero(L);
  for (const auto& [key, c] : s.terms()) {
    GrassmannElement v = c * gr_pow(p.z, key.k);
    if (key.fp) v = v * p.tp;
    if (key.fm) v = v * p.tm;
    r += v;
  }
  return r;
}

Point ss_eval(const CoordMap& m, const Point& p) {
  return {ss_eval(m.x, p), ss_eval(m.fp, p), ss_eval(m.fm, p)};
}

SuperSeries ss_subst_inversion(const SuperSeries& s, bool inverse) {
  Kind nk = s.kind() == Kind::AtZero ? Kind::AtInfinity : Kind::AtZero;
  int L = s.gens();
  int nlo, nhi;
  if (s.kind() == Kind::AtZero) {
    nhi = s.lo() <= -kEntire ? kEntire : -s.lo();
    nlo = s.hi() >= kEntire ? -kEntire : -s.hi();
  } else {
    nhi = s.lo() <= -kEntire ? kEntire : -s.lo();
    nlo = s.hi() >= kEntire ? -kEntire : -s.hi();
  }
  SuperSeries r(nk, L, nlo, nhi);
  FieldScalar unit = inverse ? -FieldScalar::i() : FieldScalar::i();
  for (const auto& [key, c] : s.terms()) {
    int e = key.fp + key.fm;
    FieldScalar f(1);
    for (int t = 0; t < e; ++t) f *= unit;
    r.add_term(-key.k - e, key.fp, key.fm, c.scaled(f));
  }
  return r;
}

CoordMap ss_subst_inversion(const CoordMap& m, bool inverse) {
  return {ss_subst_inversion(m.x, inverse), ss_subst_inversion(m.fp, inverse),
          ss_subst_inversion(m.fm, inverse)};
}

Point ss_inversion_I(const Point& p) {
  GrassmannElement zi = gr_inv(p.z);
  FieldScalar i = FieldScalar::i();
  return {zi, (p.tp * zi).scaled(i), (p.tm * zi).scaled(i)};
}

Point ss_inversion_I_inv(const Point& p) {
  GrassmannElement zi = gr_inv(p.z);
  FieldScalar mi = -FieldScalar::i();
  return {zi, (p.tp * zi).scaled(mi), (p.tm * zi).scaled(mi)};
}

CoordMap inversion_map(int gens) {
  return ss_subst_inversion(identity_map(gens), false);
}

CoordMap inversion_map_inv(int gens) {
  return ss_subst_inversion(identity_map(gens), true);
}

}  // namespace n2sc
