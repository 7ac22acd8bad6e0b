#include "n2sc/nsalgebra.hpp"

#include <sstream>

#include "n2sc/errors.hpp"

namespace n2sc {

void NsElement::add(Family f, int j, const FieldScalar& c) {
  if (c.is_zero()) return;
  auto key = std::pair{f, j};
  auto [it, inserted] = terms.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

NsElement NsElement::operator+(const NsElement& o) const {
  NsElement r = *this;
  for (const auto& [k, c] : o.terms) r.add(k.first, k.second, c);
  r.central += o.central;
  return r;
}

NsElement NsElement::scaled(const FieldScalar& s) const {
  NsElement r;
  for (const auto& [k, c] : terms) r.add(k.first, k.second, c * s);
  r.central = central * s;
  return r;
}

NsElement NsElement::with_central_zero() const {
  NsElement r = *this;
  r.central = FieldScalar(0);
  return r;
}

std::string NsElement::str() const {
  static const char* names[] = {"L", "J", "G+", "G-"};
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms) {
    if (!first) os << " + ";
    os << "(" << c.str() << ")" << names[static_cast<int>(k.first)];
    if (k.first == Family::Gp || k.first == Family::Gm)
      os << "_{" << k.second << "-1/2}";
    else
      os << "_" << k.second;
    first = false;
  }
  if (!central.is_zero()) {
    if (!first) os << " + ";
    os << "(" << central.str() << ")d";
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

bool is_g(Family f) { return f == Family::Gp || f == Family::Gm; }

// single-pair bracket on basis symbols, paper indices
NsElement bracket_basis(Family fa, int a, Family fb, int b) {
  NsElement r;
  auto delta = [](int v) { return v == 0; };
  if (fa == Family::L && fb == Family::L) {
    r.add(Family::L, a + b, FieldScalar(Rational(a - b)));
    if (delta(a + b))
      r.central += FieldScalar(Rational(static_cast<long>(a) * a * a - a, 12));
  } else if (fa == Family::L && fb == Family::J) {
    r.add(Family::J, a + b, FieldScalar(Rational(-b)));
  } else if (fa == Family::J && fb == Family::L) {
    return bracket_basis(fb, b, fa, a).scaled(FieldScalar(-1));
  } else if (fa == Family::J && fb == Family::J) {
    if (delta(a + b)) r.central += FieldScalar(Rational(a, 3));
  } else if (fa == Family::L && is_g(fb)) {
    // [L_m, G_{j-1/2}] = (m/2 - j + 1/2) G_{m+j-1/2}
    r.add(fb, a + b, FieldScalar(Rational(a, 2) - Rational(b) + Rational(1, 2)));
  } else if (is_g(fa) && fb == Family::L) {
    return bracket_basis(fb, b, fa, a).scaled(FieldScalar(-1));
  } else if (fa == Family::J && is_g(fb)) {
    FieldScalar sgn = (fb == Family::Gp) ? FieldScalar(1) : FieldScalar(-1);
    r.add(fb, a + b, sgn);
  } else if (is_g(fa) && fb == Family::J) {
    return bracket_basis(fb, b, fa, a).scaled(FieldScalar(-1));
  } else if (is_g(fa) && is_g(fb) && fa == fb) {
    // zero
  } else {
    // [G+_{i-1/2}, G-_{j-1/2}] = 2 L_{i+j-1} + (i-j) J_{i+j-1}
    //                            + (1/3) i(i-1) delta_{i+j-1,0} d
    int i = fa == Family::Gp ? a : b;
    int j = fa == Family::Gp ? b : a;
    r.add(Family::L, i + j - 1, FieldScalar(2));
    r.add(Family::J, i + j - 1, FieldScalar(Rational(i - j)));
    if (i + j - 1 == 0)
      r.central += FieldScalar(Rational(static_cast<long>(i) * (i - 1), 3));
  }
  return r;
}

}  // namespace

NsElement ns_bracket(const NsElement& u, const NsElement& v, int window) {
  NsElement r;
  for (const auto& [ka, ca] : u.terms) {
    if (std::abs(ka.second) > window)
      throw IndexOutOfWindow("left argument index beyond window");
    for (const auto& [kb, cb] : v.terms) {
      if (std::abs(kb.second) > window)
        throw IndexOutOfWindow("right argument index beyond window");
      NsElement piece =
          bracket_basis(ka.first, ka.second, kb.first, kb.second);
      r = r + piece.scaled(ca * cb);
    }
  }
  return r;
}

NsVerifyReport ns_verify_representation(
    int window, int gens,
    const std::function<NsElement(const NsElement&, const NsElement&)>& expected) {
  NsVerifyReport rep;
  auto table = expected ? expected : [](const NsElement& u, const NsElement& v) {
    return ns_bracket(u, v);
  };
  const Family fams[] = {Family::L, Family::J, Family::Gp, Family::Gm};
  GrassmannElement one = GrassmannElement::one(gens);
  for (Family fa : fams) {
    for (Family fb : fams) {
      for (int a = -window; a <= window; ++a) {
        for (int b = -window; b <= window; ++b) {
          DerivationSum S(gens), T(gens);
          S.add(one, {fa, a});
          T.add(one, {fb, b});
          DerivationSum got = der_bracket(S, T);
          NsElement want = table(NsElement::basis(fa, a), NsElement::basis(fb, b))
                               .with_central_zero();
          // compare: convert want to a DerivationSum
          DerivationSum wantd(gens);
          for (const auto& [k, c] : want.terms)
            wantd.add(GrassmannElement::scalar(gens, c), {k.first, k.second});
          ++rep.pairs_checked;
          if (!(got == wantd)) {
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

}  // namespace n2sc
