#include "n2sc/field.hpp"

#include <sstream>

#include "n2sc/errors.hpp"

namespace n2sc {
namespace {

// Exact square root of a nonnegative rational, if it is a perfect square.
std::optional<Rational> sqrt_rational(const Rational& q) {
  if (q < 0) return std::nullopt;
  if (q == 0) return Rational(0);
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt rn = boost::multiprecision::sqrt(num);
  BigInt rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

struct QI {  // element of Q(i)
  Rational re, im;
  bool operator==(const QI&) const = default;
};

QI mul(const QI& a, const QI& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// Square root in Q(i) of a perfect square, if one exists.
std::optional<QI> sqrt_qi(const QI& z) {
  if (z.re == 0 && z.im == 0) return QI{0, 0};
  if (z.im == 0) {
    if (auto r = sqrt_rational(z.re)) return QI{*r, 0};
    if (auto r = sqrt_rational(-z.re)) return QI{0, *r};
    return std::nullopt;
  }
  auto m = sqrt_rational(z.re * z.re + z.im * z.im);
  if (!m) return std::nullopt;
  auto a2 = (z.re + *m) / 2;
  auto a = sqrt_rational(a2);
  if (!a || *a == 0) return std::nullopt;
  QI cand{*a, z.im / (2 * *a)};
  if (mul(cand, cand) == z) return cand;
  return std::nullopt;
}

}  // namespace

FieldScalar FieldScalar::operator*(const FieldScalar& o) const {
  // (a0 + a1 i + a2 r + a3 ir)(b0 + b1 i + b2 r + b3 ir), r^2 = 2, i^2 = -1.
  const Rational *a = c_, *b = o.c_;
  bool a_rat = a[1] == 0 && a[2] == 0 && a[3] == 0;
  bool b_rat = b[1] == 0 && b[2] == 0 && b[3] == 0;
  if (a_rat && b_rat) return FieldScalar(a[0] * b[0]);
  if (a_rat) return {a[0] * b[0], a[0] * b[1], a[0] * b[2], a[0] * b[3]};
  if (b_rat) return {a[0] * b[0], a[1] * b[0], a[2] * b[0], a[3] * b[0]};
  Rational r0 = a[0] * b[0] - a[1] * b[1] + 2 * (a[2] * b[2] - a[3] * b[3]);
  Rational r1 = a[0] * b[1] + a[1] * b[0] + 2 * (a[2] * b[3] + a[3] * b[2]);
  Rational r2 = a[0] * b[2] + a[2] * b[0] - a[1] * b[3] - a[3] * b[1];
  Rational r3 = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1];
  return {std::move(r0), std::move(r1), std::move(r2), std::move(r3)};
}

FieldScalar FieldScalar::inverse() const {
  if (is_zero()) throw NonInvertible("zero field scalar");
  // Write as A + B*sqrt2 with A, B in Q(i); divide by the sqrt2-conjugate,
  // then by the complex conjugate.
  QI A{c_[0], c_[1]}, B{c_[2], c_[3]};
  QI n = {A.re * A.re - A.im * A.im - 2 * (B.re * B.re - B.im * B.im),
          2 * A.re * A.im - 4 * B.re * B.im};  // A^2 - 2 B^2
  Rational nn = n.re * n.re + n.im * n.im;     // |A^2-2B^2|^2, nonzero in a field
  QI nc{n.re / nn, -n.im / nn};                // (A^2-2B^2)^{-1}
  QI u = mul(A, nc), v = mul(QI{-B.re, -B.im}, nc);
  return {u.re, u.im, v.re, v.im};
}

int FieldScalar::sign_of_quadratic(const Rational& p, const Rational& q) {
  // sign of p + q*sqrt(2)
  if (p == 0 && q == 0) return 0;
  if (p >= 0 && q >= 0) return 1;
  if (p <= 0 && q <= 0) return -1;
  // opposite signs: compare p^2 vs 2 q^2
  Rational lhs = p * p, rhs = 2 * q * q;
  if (p > 0) return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
  return lhs > rhs ? -1 : (lhs < rhs ? 1 : 0);
}

std::optional<FieldScalar> FieldScalar::sqrt_perfect() const {
  if (is_zero()) return FieldScalar(0);
  QI A{c_[0], c_[1]}, B{c_[2], c_[3]};
  auto pack = [](const QI& u, const QI& v) {
    return FieldScalar(u.re, u.im, v.re, v.im);
  };
  if (B.re == 0 && B.im == 0) {
    if (auto u = sqrt_qi(A)) return pack(*u, QI{0, 0});
    if (auto v = sqrt_qi({A.re / 2, A.im / 2})) return pack(QI{0, 0}, *v);
    return std::nullopt;
  }
  // (u + v sqrt2)^2 = u^2 + 2v^2 + 2uv sqrt2; u^2 solves 2u^4 - 2Au^2 + B^2 = 0.
  QI disc{A.re * A.re - A.im * A.im - 2 * (B.re * B.re - B.im * B.im),
          2 * A.re * A.im - 4 * B.re * B.im};
  auto s = sqrt_qi(disc);
  if (!s) return std::nullopt;
  for (int sign : {1, -1}) {
    QI ss{sign * s->re, sign * s->im};
    QI u2{(A.re + ss.re) / 2, (A.im + ss.im) / 2};
    auto u = sqrt_qi(u2);
    if (!u || (u->re == 0 && u->im == 0)) continue;
    // v = B / (2u)
    Rational un = 4 * (u->re * u->re + u->im * u->im);
    QI two_u_conj{2 * u->re, -2 * u->im};
    QI v = mul(B, two_u_conj);
    v.re /= un;
    v.im /= un;
    FieldScalar cand = pack(*u, v);
    if (cand * cand == *this) return cand;
  }
  return std::nullopt;
}

std::string FieldScalar::str() const {
  static const char* basis[4] = {"", "i", "r2", "i*r2"};
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < 4; ++k) {
    if (c_[k] == 0) continue;
    if (!first) os << " + ";
    os << c_[k];
    if (k > 0) os << "*" << basis[k];
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace n2sc
