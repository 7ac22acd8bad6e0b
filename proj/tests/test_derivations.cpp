#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "n2sc/errors.hpp"
#include "n2sc/superconformal.hpp"
#include "test_util.hpp"

using namespace n2sc;
using testutil::rand_grassmann;
using testutil::rand_series;

namespace {
const int L = 4;
const GrassmannElement one = GrassmannElement::one(L);
GrassmannElement z(std::initializer_list<int> js) {
  return GrassmannElement::generators(L, js);
}
SuperSeries mono(int k, int fp, int fm, GrassmannElement c = one) {
  return SuperSeries::monomial(Kind::AtZero, L, k, fp, fm, c);
}
DerivationSum single(Family f, int j, GrassmannElement c = one) {
  DerivationSum t(L);
  t.add(c, {f, j});
  return t;
}
}  // namespace

TEST_CASE("basis actions on coordinates") {
  // L_1 x = -x^2
  CHECK(der_apply(single(Family::L, 1), mono(1, 0, 0)) == mono(2, 0, 0, -one));
  // G+_{-1/2}: x -> phi-, phi+ -> -1
  CHECK(der_apply(single(Family::Gp, 0), mono(1, 0, 0)) == mono(0, 0, 1));
  CHECK(der_apply(single(Family::Gp, 0), mono(0, 1, 0)) == mono(0, 0, 0, -one));
  // J_0: phi+ -> -phi+, phi- -> +phi-
  CHECK(der_apply(single(Family::J, 0), mono(0, 1, 0)) == mono(0, 1, 0, -one));
  CHECK(der_apply(single(Family::J, 0), mono(0, 0, 1)) == mono(0, 0, 1));
}

TEST_CASE("bracket table entries") {
  auto expect_single = [](const DerivationSum& got, Family f, int j,
                          const FieldScalar& c) {
    DerivationSum want(L);
    want.add(GrassmannElement::scalar(L, c), {f, j});
    CHECK(got == want);
  };
  // [L_1, L_{-1}] = 2 L_0
  expect_single(der_bracket(single(Family::L, 1), single(Family::L, -1)),
                Family::L, 0, FieldScalar(2));
  // [G+_{1/2}, G-_{-1/2}] = 2 L_0 + J_0
  DerivationSum got = der_bracket(single(Family::Gp, 1), single(Family::Gm, 0));
  DerivationSum want(L);
  want.add(one.scaled(FieldScalar(2)), {Family::L, 0});
  want.add(one, {Family::J, 0});
  CHECK(got == want);
  // [G+_{1/2}, G+_{-1/2}] = 0
  CHECK(der_bracket(single(Family::Gp, 1), single(Family::Gp, 0)).is_zero());
}

TEST_CASE("exponential flows match the closed forms") {
  CoordMap id = identity_map(L);
  GrassmannElement y = GrassmannElement::scalar(L, FieldScalar(Rational(2, 3)));
  const int N = 8;

  SUBCASE("translation, entire") {
    CoordMap r = der_exp_apply(single(Family::L, -1, -y), id, N);
    CHECK(r.x == mono(1, 0, 0) + mono(0, 0, 0, y));
    CHECK(r.fp == mono(0, 1, 0));
    CHECK(r.fm == mono(0, 0, 1));
  }
  SUBCASE("special flow e^{-yL_1}") {
    CoordMap r = der_exp_apply(single(Family::L, 1, -y), id, N);
    // x/(1-yx) etc. to window order
    SuperSeries geo = SuperSeries::zero(Kind::AtZero, L).truncated(N);
    for (int k = 0; k <= N; ++k)
      geo.add_term(k, 0, 0, gr_pow(y, k));
    CHECK(r.x.agrees_with((mono(1, 0, 0) * geo).truncated(N)));
    CHECK(r.fp.agrees_with((mono(0, 1, 0) * geo).truncated(N)));
    CHECK(r.fm.agrees_with((mono(0, 0, 1) * geo).truncated(N)));
  }
  SUBCASE("odd translation e^{-xi G+_{-1/2}}") {
    GrassmannElement xi = z({1});
    CoordMap r = der_exp_apply(single(Family::Gp, 0, -xi), id, N);
    // (x + phi- xi, xi + phi+, phi-); phi- xi = -xi phi-
    CHECK(r.x == mono(1, 0, 0) + mono(0, 0, 1, -xi));
    CHECK(r.fp == mono(0, 1, 0) + mono(0, 0, 0, xi));
    CHECK(r.fm == mono(0, 0, 1));
  }
  SUBCASE("odd flow e^{-xi G-_{1/2}}") {
    GrassmannElement xi = z({2});
    CoordMap r = der_exp_apply(single(Family::Gm, 1, -xi), id, N);
    // (x + phi+ xi x, phi+, xi x + phi- - phi+ phi- xi)
    CHECK(r.x == mono(1, 0, 0) + mono(1, 1, 0, -xi));
    CHECK(r.fp == mono(0, 1, 0));
    CHECK(r.fm == mono(0, 0, 1) + mono(1, 0, 0, xi) + mono(0, 1, 1, -xi));
  }
  SUBCASE("L_0 with body coefficient does not terminate") {
    CHECK_THROWS_AS(der_exp_apply(single(Family::L, 0, -y), id, N),
                    NonTerminating);
    DerivationSum T = single(Family::L, 0, -y) + single(Family::L, 1, -y);
    CHECK_THROWS_AS(der_exp_apply(T, id, N), NonTerminating);
  }
  SUBCASE("L_0 and J_0 with nilpotent coefficients are fine") {
    GrassmannElement s = z({1, 2});
    CoordMap r = der_exp_apply(single(Family::L, 0, -s), id, N);
    // e^{-sL_0}: x -> e^s x = (1+s)x, phi -> (1+s/2+s^2/8...) phi
    CHECK(r.x == mono(1, 0, 0, one + s));
    CHECK(r.fp == mono(0, 1, 0, gr_exp_nilpotent(s.scaled(FieldScalar(Rational(1, 2))))));
  }
}

TEST_CASE("scale action") {
  CoordMap id = identity_map(L);
  GrassmannElement a0 = GrassmannElement::scalar(L, FieldScalar(2));
  GrassmannElement b0 = GrassmannElement::scalar(L, FieldScalar(3));
  CoordMap r = der_scale_apply(a0, b0, id);
  CHECK(r.x == mono(1, 0, 0, one.scaled(FieldScalar(4))));
  CHECK(r.fp == mono(0, 1, 0, one.scaled(FieldScalar(6))));
  CHECK(r.fm == mono(0, 0, 1, one.scaled(FieldScalar(Rational(2, 3)))));
  CHECK(der_scale_apply(one, one, id) == id);
  // (-a0, -b0) acts identically
  CHECK(der_scale_apply(-a0, -b0, id) == r);
  CHECK_THROWS_AS(der_scale_apply(z({1, 2}), one, id), NonInvertible);
}

TEST_CASE("automorphism property of the exponential") {
  std::mt19937_64 rng(41);
  const int N = 7;
  for (int t = 0; t < 12; ++t) {
    DerivationSum T(L);
    for (int j = 1; j <= 3; ++j) {
      T.add(rand_grassmann(rng, L, Parity::Even, true), {Family::L, j});
      T.add(rand_grassmann(rng, L, Parity::Odd, false), {Family::Gp, j});
      T.add(rand_grassmann(rng, L, Parity::Odd, false), {Family::Gm, j});
      T.add(rand_grassmann(rng, L, Parity::Even, true), {Family::J, j});
    }
    SuperSeries u = rand_series(rng, L, Parity::Even, 0, N);
    SuperSeries v = rand_series(rng, L, (rng() & 1) ? Parity::Odd : Parity::Even, 0, N);
    SuperSeries lhs = der_exp_apply(T, u * v, N);
    SuperSeries rhs = der_exp_apply(T, u, N) * der_exp_apply(T, v, N);
    CHECK(lhs.agrees_with(rhs));
  }
}

TEST_CASE("automorphism property at infinity") {
  std::mt19937_64 rng(43);
  const int N = 7;
  for (int t = 0; t < 8; ++t) {
    DerivationSum T(L);
    for (int j = 1; j <= 3; ++j) {
      T.add(rand_grassmann(rng, L, Parity::Even, true), {Family::L, -j});
      T.add(rand_grassmann(rng, L, Parity::Odd, false), {Family::Gp, 1 - j});
      T.add(rand_grassmann(rng, L, Parity::Odd, false), {Family::Gm, 1 - j});
      T.add(rand_grassmann(rng, L, Parity::Even, true), {Family::J, -j});
    }
    SuperSeries u(Kind::AtInfinity, L, -N, 0);
    SuperSeries v(Kind::AtInfinity, L, -N, 1);
    for (int k = -N; k <= 0; ++k)
      for (auto [fp, fm] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
        if (rng() & 1)
          u.add_term(k, fp, fm, rand_grassmann(rng, L, static_cast<Parity>((fp + fm) % 2), true));
        if (rng() & 1)
          v.add_term(k, fp, fm, rand_grassmann(rng, L, static_cast<Parity>((fp + fm) % 2), true));
      }
    SuperSeries lhs = der_exp_apply(T, u * v, N);
    SuperSeries rhs = der_exp_apply(T, u, N) * der_exp_apply(T, v, N);
    CHECK(lhs.agrees_with(rhs));
  }
}

TEST_CASE("substitution commutes with the exponential") {
  std::mt19937_64 rng(47);
  const int N = 7;
  for (int t = 0; t < 8; ++t) {
    DerivationSum T(L);
    for (int j = 1; j <= 2; ++j) {
      T.add(rand_grassmann(rng, L, Parity::Even, true), {Family::L, j});
      T.add(rand_grassmann(rng, L, Parity::Odd, false), {Family::Gp, j});
    }
    CoordMap H = der_exp_apply(T, identity_map(L), N);
    CoordMap Hbar{rand_series(rng, L, Parity::Even, 1, N),
                  rand_series(rng, L, Parity::Odd, 1, N),
                  rand_series(rng, L, Parity::Odd, 1, N)};
    CoordMap lhs = ss_compose(Hbar, H);  // Hbar(e^T (x,phi))
    CoordMap rhs = der_exp_apply(T, Hbar, N);
    CHECK(lhs.x.agrees_with(rhs.x));
    CHECK(lhs.fp.agrees_with(rhs.fp));
    CHECK(lhs.fm.agrees_with(rhs.fm));
  }
}

TEST_CASE("exponential images are superconformal") {
  std::mt19937_64 rng(53);
  const int N = 8;
  for (int t = 0; t < 6; ++t) {
    DerivationSum T(L);
    for (int j = 1; j <= 3; ++j) {
      T.add(rand_grassmann(rng, L, Parity::Even, true), {Family::L, j});
      T.add(rand_grassmann(rng, L, Parity::Even, true), {Family::J, j});
      T.add(rand_grassmann(rng, L, Parity::Odd, false), {Family::Gp, j});
      T.add(rand_grassmann(rng, L, Parity::Odd, false), {Family::Gm, j});
    }
    CoordMap H = der_exp_apply(T, identity_map(L), N);
    CHECK(sc_check(H).pass);
  }
}

TEST_CASE("parity constraints on sums and exponentials") {
  DerivationSum mixed(L);
  mixed.add(one, {Family::L, 1});
  mixed.add(one, {Family::Gp, 1});
  CHECK_FALSE(mixed.parity().has_value());
  CHECK_THROWS_AS(der_exp_apply(mixed, identity_map(L), 6), ParityMismatch);
  DerivationSum odd_total(L);
  odd_total.add(one, {Family::Gp, 1});
  CHECK(odd_total.parity() == Parity::Odd);
  CHECK_THROWS_AS(der_exp_apply(odd_total, identity_map(L), 6), ParityMismatch);
}
