#include "n2sc/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "n2sc/errors.hpp"

namespace n2sc {

GrassmannElement GrassmannElement::generators(int gens,
                                              std::initializer_list<int> js,
                                              const FieldScalar& coef) {
  GrassmannElement g(gens);
  std::uint32_t mask = 0;
  int prev = 0;
  for (int j : js) {
    if (j <= prev || j > gens)
      throw MismatchedContext("generator indices must be increasing and <= L");
    mask |= 1u << (j - 1);
    prev = j;
  }
  g.add_term(mask, coef);
  return g;
}

void GrassmannElement::add_term(std::uint32_t mask, const FieldScalar& coef) {
  if (coef.is_zero()) return;
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), mask,
      [](const auto& t, std::uint32_t m) { return t.first < m; });
  if (it != terms_.end() && it->first == mask) {
    it->second += coef;
    if (it->second.is_zero()) terms_.erase(it);
  } else {
    terms_.insert(it, {mask, coef});
  }
}

FieldScalar GrassmannElement::body() const {
  if (!terms_.empty() && terms_.front().first == 0u) return terms_.front().second;
  return FieldScalar(0);
}

GrassmannElement GrassmannElement::soul() const {
  GrassmannElement s(L_);
  for (const auto& [m, c] : terms_)
    if (m != 0u) s.terms_.emplace_back(m, c);
  return s;
}

std::optional<Parity> GrassmannElement::parity() const {
  if (terms_.empty()) return Parity::Even;
  int p = std::popcount(terms_.begin()->first) & 1;
  for (const auto& [m, c] : terms_)
    if ((std::popcount(m) & 1) != p) return std::nullopt;
  return static_cast<Parity>(p);
}

GrassmannElement GrassmannElement::operator-() const {
  GrassmannElement r(L_);
  r.terms_.reserve(terms_.size());
  for (const auto& [m, c] : terms_) r.terms_.emplace_back(m, -c);
  return r;
}

GrassmannElement GrassmannElement::operator+(const GrassmannElement& o) const {
  if (L_ != o.L_) throw MismatchedContext("Grassmann contexts differ");
  GrassmannElement r(L_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin(), b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      r.terms_.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      r.terms_.push_back(*b++);
    } else {
      FieldScalar sum = a->second + b->second;
      if (!sum.is_zero()) r.terms_.emplace_back(a->first, std::move(sum));
      ++a;
      ++b;
    }
  }
  return r;
}

GrassmannElement GrassmannElement::operator-(const GrassmannElement& o) const {
  return *this + (-o);
}

namespace {
// Sign of zeta^A * zeta^B: (-1)^{#(a,b) in AxB with a > b}. Disjointness is
// checked by the caller.
int product_sign(std::uint32_t a, std::uint32_t b) {
  int inv = 0;
  while (b) {
    int pos = std::countr_zero(b);
    inv += std::popcount(a >> (pos + 1));
    b &= b - 1;
  }
  return (inv & 1) ? -1 : 1;
}
}  // namespace

GrassmannElement GrassmannElement::operator*(const GrassmannElement& o) const {
  if (L_ != o.L_) throw MismatchedContext("Grassmann contexts differ");
  Terms scratch;
  scratch.reserve(terms_.size() * o.terms_.size());
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      if (ma & mb) continue;  // repeated generator squares to zero
      int s = product_sign(ma, mb);
      FieldScalar c = ca * cb;
      if (s < 0) c = -c;
      scratch.emplace_back(ma | mb, std::move(c));
    }
  }
  std::sort(scratch.begin(), scratch.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  GrassmannElement r(L_);
  r.terms_.reserve(scratch.size());
  for (auto& [m, c] : scratch) {
    if (!r.terms_.empty() && r.terms_.back().first == m) {
      r.terms_.back().second += c;
      if (r.terms_.back().second.is_zero()) r.terms_.pop_back();
    } else if (!c.is_zero()) {
      r.terms_.emplace_back(m, std::move(c));
    }
  }
  return r;
}

GrassmannElement GrassmannElement::scaled(const FieldScalar& s) const {
  GrassmannElement r(L_);
  if (s.is_zero()) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& [m, c] : terms_) r.terms_.emplace_back(m, c * s);
  return r;
}

int GrassmannElement::nilpotency_degree() const {
  GrassmannElement s = soul();
  if (s.is_zero()) return 0;
  GrassmannElement p = s;
  int e = 1;
  while (!p.is_zero()) {
    p = p * s;
    ++e;
    if (e > L_ + 1) break;  // unreachable: soul^{L+1} = 0
  }
  return e;
}

std::string GrassmannElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    os << "(" << c.str() << ")";
    for (int j = 0; j < L_; ++j)
      if (m & (1u << j)) os << "*z" << (j + 1);
    first = false;
  }
  return os.str();
}

GrassmannElement gr_inv(const GrassmannElement& a) {
  FieldScalar b = a.body();
  if (b.is_zero()) throw NonInvertible("Grassmann element has zero body");
  // 1/(b+s) = sum_{n<=L} (-1)^n s^n / b^{n+1}
  GrassmannElement s = a.soul();
  FieldScalar binv = b.inverse();
  GrassmannElement r = GrassmannElement::scalar(a.gens(), binv);
  GrassmannElement pow = GrassmannElement::one(a.gens());
  FieldScalar bk = binv;
  for (int n = 1; n <= a.gens(); ++n) {
    pow = pow * s;
    if (pow.is_zero()) break;
    bk = bk * binv;
    FieldScalar c = (n % 2) ? -bk : bk;
    r += pow.scaled(c);
  }
  return r;
}

GrassmannElement gr_exp_nilpotent(const GrassmannElement& a) {
  if (!a.body().is_zero())
    throw NonNilpotent("exp argument must have zero body");
  if (!a.is_even()) throw OddArgument("exp argument must be even");
  GrassmannElement r = GrassmannElement::one(a.gens());
  GrassmannElement pow = GrassmannElement::one(a.gens());
  Rational fact = 1;
  for (int n = 1; n <= a.gens() + 1; ++n) {
    pow = pow * a;
    if (pow.is_zero()) break;
    fact *= n;
    r += pow.scaled(FieldScalar(Rational(1) / fact));
  }
  return r;
}

GrassmannElement gr_sqrt_perfect(const GrassmannElement& a) {
  FieldScalar b = a.body();
  if (b.is_zero()) throw NonInvertible("sqrt needs invertible body");
  auto rb = b.sqrt_perfect();
  if (!rb) throw ExactnessUnavailable("body is not a perfect square in Q(i,sqrt2)");
  // a = b(1+u), u nilpotent; sqrt = sqrt(b) * sum C(1/2,n) u^n
  GrassmannElement u = a.scaled(b.inverse()) - GrassmannElement::one(a.gens());
  GrassmannElement acc = GrassmannElement::one(a.gens());
  GrassmannElement pow = GrassmannElement::one(a.gens());
  Rational coef = 1;
  for (int n = 1; n <= a.gens() + 1; ++n) {
    pow = pow * u;
    if (pow.is_zero()) break;
    coef *= Rational(3 - 2 * n, 2 * n);  // C(1/2,n) = C(1/2,n-1)*(1/2-n+1)/n
    acc += pow.scaled(FieldScalar(coef));
  }
  GrassmannElement r = acc.scaled(*rb);
  return r;
}

GrassmannElement gr_pow(const GrassmannElement& a, long n) {
  GrassmannElement base = n < 0 ? gr_inv(a) : a;
  unsigned long k = n < 0 ? -static_cast<unsigned long>(n) : n;
  GrassmannElement r = GrassmannElement::one(a.gens());
  while (k) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return r;
}

}  // namespace n2sc
