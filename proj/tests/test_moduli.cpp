#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "n2sc/errors.hpp"
#include "n2sc/moduli.hpp"
#include "n2sc/superconformal.hpp"
#include "test_util.hpp"

using namespace n2sc;
using testutil::rand_grassmann;
using testutil::rand_moduli;

namespace {
const int L3 = 3;
GrassmannElement z(std::initializer_list<int> js, int L = 4) {
  return GrassmannElement::generators(L, js);
}
}  // namespace

TEST_CASE("e_map on the L_1 flow data") {
  // A+_1 = t only: E+-_j = t^j, odd parts vanish
  const int L = 4, W = 4;
  GrassmannElement t = GrassmannElement::scalar(L, FieldScalar(Rational(2, 5)));
  ModuliData d = ModuliData::identity(L, W);
  d.Ap[0] = t;
  ESequences e = e_map(d);
  for (int j = 1; j <= W; ++j) {
    CHECK(e.Ep[j - 1] == gr_pow(t, j));
    CHECK(e.Em[j - 1] == gr_pow(t, j));
    CHECK(e.MpH[j - 1].is_zero());
    CHECK(e.MmH[j - 1].is_zero());
  }
  // inverting it recovers A+_1 = t and nothing else
  ModuliData back = e_inverse(e);
  CHECK(back == d);
}

TEST_CASE("e_map on M+_{1/2} data") {
  const int L = 4, W = 2;
  GrassmannElement mu = z({1});
  ModuliData d = ModuliData::identity(L, W);
  d.Mp[0] = mu;
  ESequences e = e_map(d);
  CHECK(e.MpH[0] == mu);
  CHECK(e.MmH[0].is_zero());
  CHECK(e.MmH[1].is_zero());
  CHECK(e.Ep[0].is_zero());
  CHECK(e.Em[0].is_zero());
  CHECK(e.Ep[1].is_zero());
  CHECK(e.Em[1].is_zero());
}

TEST_CASE("zero data maps to zero sequences") {
  ModuliData d = ModuliData::identity(4, 3);
  ESequences e = e_map(d);
  for (int j = 0; j < 3; ++j) {
    CHECK(e.Ep[j].is_zero());
    CHECK(e.Em[j].is_zero());
    CHECK(e.MpH[j].is_zero());
    CHECK(e.MmH[j].is_zero());
  }
  CHECK(e_inverse(e) == d);
}

TEST_CASE("E is a bijection on random data") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 25; ++t) {
    ModuliData d = rand_moduli(rng, L3, 5, true);
    ESequences e = e_map(d);
    CHECK(e_inverse(e) == d);
  }
}

TEST_CASE("leading-order structure of the E sequences") {
  // one fresh soul block per input variable at W = 2; every remainder
  // monomial must mix at least two blocks
  const int W = 2;
  const int L = 12;
  ModuliData d = ModuliData::identity(L, W);
  std::vector<std::uint32_t> blocks;
  auto pair_gen = [&](int slot) {
    GrassmannElement g(L);
    g.add_term((1u << (2 * slot)) | (1u << (2 * slot + 1)), FieldScalar(1));
    blocks.push_back((1u << (2 * slot)) | (1u << (2 * slot + 1)));
    return g;
  };
  auto single_gen = [&](int slot) {
    blocks.push_back(1u << slot);
    return GrassmannElement::generators(L, {slot + 1});
  };
  d.Ap[0] = pair_gen(0);
  d.Ap[1] = pair_gen(1);
  d.Am[0] = pair_gen(2);
  d.Am[1] = pair_gen(3);
  d.Mp[0] = single_gen(8);
  d.Mp[1] = single_gen(9);
  d.Mm[0] = single_gen(10);
  d.Mm[1] = single_gen(11);
  ESequences e = e_map(d);
  auto mixes_blocks = [&](const GrassmannElement& g) {
    for (const auto& [mask, c] : g.terms()) {
      int hit = 0;
      for (auto b : blocks)
        if (mask & b) ++hit;
      if (hit < 2) return false;
    }
    return true;
  };
  for (int j = 1; j <= W; ++j) {
    GrassmannElement lin_p =
        d.Ap[j - 1].scaled(FieldScalar(Rational(j + 1, 2))) + d.Am[j - 1];
    GrassmannElement lin_m =
        d.Ap[j - 1].scaled(FieldScalar(Rational(j + 1, 2))) - d.Am[j - 1];
    CHECK(mixes_blocks(e.Ep[j - 1] - lin_p));
    CHECK(mixes_blocks(e.Em[j - 1] - lin_m));
    CHECK(mixes_blocks(e.MpH[j - 1] - d.Mp[j - 1]));
    CHECK(mixes_blocks(e.MmH[j - 1] - d.Mm[j - 1]));
  }
}

TEST_CASE("e_tilde and e_hat closed forms") {
  const int L = 4;
  const GrassmannElement one = GrassmannElement::one(L);
  ModuliData d0 = ModuliData::identity(L, 3);
  CHECK(e_tilde(d0, 6) == identity_map(L).truncated(6));

  ModuliData dhat = ModuliData::identity(L, 3);
  dhat.a0 = GrassmannElement::scalar(L, FieldScalar(2));
  dhat.b0 = GrassmannElement::scalar(L, FieldScalar(3));
  CoordMap H = e_hat(dhat, 6);
  CHECK(H.x.agrees_with(SuperSeries::monomial(Kind::AtZero, L, 1, 0, 0,
                                              one.scaled(FieldScalar(4)))));
  CHECK(H.fp.agrees_with(SuperSeries::monomial(Kind::AtZero, L, 0, 1, 0,
                                               one.scaled(FieldScalar(6)))));
  CHECK(H.fm.agrees_with(SuperSeries::monomial(
      Kind::AtZero, L, 0, 0, 1, one.scaled(FieldScalar(Rational(2, 3))))));

  ModuliData dl = ModuliData::identity(L, 4);
  dl.Ap[0] = GrassmannElement::scalar(L, FieldScalar(Rational(1, 2)));
  CoordMap Hl = e_tilde(dl, 5);
  DerivationSum T(L);
  T.add(-dl.Ap[0], {Family::L, 1});
  CoordMap flow = der_exp_apply(T, identity_map(L), 5);
  CHECK(Hl.x.agrees_with(flow.x));
  CHECK(Hl.fp.agrees_with(flow.fp));
  CHECK(Hl.fm.agrees_with(flow.fm));
}

TEST_CASE("images of e_tilde/e_hat are superconformal and invert") {
  std::mt19937_64 rng(73);
  for (int t = 0; t < 8; ++t) {
    ModuliData d = rand_moduli(rng, L3, 4, false);
    CoordMap H = e_hat(d, 7);
    CHECK(sc_check(H).pass);
    CHECK(e_hat_inverse(H, 4) == d);
  }
}

TEST_CASE("compose_zero group structure") {
  std::mt19937_64 rng(79);
  const int W = 4;
  ModuliData id = ModuliData::identity(L3, W);
  for (int t = 0; t < 6; ++t) {
    ModuliData d = rand_moduli(rng, L3, W, false);
    CHECK(compose_zero(d, id) == d);
    CHECK(compose_zero(id, d) == d);
    ModuliData dinv = invert_data(d);
    CHECK(compose_zero(d, dinv) == id);
    CHECK(compose_zero(dinv, d) == id);
  }
}

TEST_CASE("one-parameter flows add") {
  std::mt19937_64 rng(83);
  const int W = 4;
  for (int t = 0; t < 5; ++t) {
    ModuliData d = rand_moduli(rng, L3, W, true);
    GrassmannElement t1 = rand_grassmann(rng, L3, Parity::Even, true);
    GrassmannElement t2 = rand_grassmann(rng, L3, Parity::Even, true);
    ModuliData lhs = compose_zero(d.scaled_sequences(t1), d.scaled_sequences(t2));
    CHECK(lhs == d.scaled_sequences(t1 + t2));
    ModuliData lhs_inf =
        compose_infinity(d.scaled_sequences(t1), d.scaled_sequences(t2));
    CHECK(lhs_inf == d.scaled_sequences(t1 + t2));
  }
}

TEST_CASE("pure scale data composes multiplicatively") {
  const int L = 4, W = 3;
  ModuliData d1 = ModuliData::identity(L, W);
  d1.a0 = GrassmannElement::scalar(L, FieldScalar(2)) + z({1, 2});
  ModuliData d2 = ModuliData::identity(L, W);
  d2.a0 = GrassmannElement::scalar(L, FieldScalar(3));
  ModuliData r = compose_zero(d1, d2);
  CHECK(r.a0 == d1.a0 * d2.a0);
  CHECK(r.b0 == GrassmannElement::one(L));
  CHECK(r.zero_sequences());
}

TEST_CASE("compose_infinity identity and twist cross-check") {
  std::mt19937_64 rng(89);
  const int W = 4;
  ModuliData id = ModuliData::identity(L3, W);
  FieldScalar i = FieldScalar::i();
  auto twist = [&](const ModuliData& d) {
    ModuliData t = d;
    for (auto& g : t.Am) g = -g;
    for (auto& g : t.Mp) g = g.scaled(-i);
    for (auto& g : t.Mm) g = g.scaled(-i);
    return t;
  };
  auto untwist = [&](const ModuliData& d) {
    ModuliData t = d;
    for (auto& g : t.Am) g = -g;
    for (auto& g : t.Mp) g = g.scaled(i);
    for (auto& g : t.Mm) g = g.scaled(i);
    return t;
  };
  for (int t = 0; t < 5; ++t) {
    ModuliData d1 = rand_moduli(rng, L3, W, true);
    ModuliData d2 = rand_moduli(rng, L3, W, true);
    CHECK(compose_infinity(d1, id) == d1);
    CHECK(compose_infinity(id, d2) == d2);
    // Cor. route: twist, compose at zero in reversed order, untwist
    ModuliData via = untwist(compose_zero(twist(d2), twist(d1)));
    CHECK(compose_infinity(d1, d2) == via);
  }
}

TEST_CASE("inverse closed form on one-parameter data") {
  const int L = 4, W = 3;
  GrassmannElement t = GrassmannElement::scalar(L, FieldScalar(Rational(1, 3)));
  ModuliData d = ModuliData::identity(L, W);
  d.Ap[0] = t;
  ModuliData dinv = invert_data(d);
  CHECK(dinv.Ap[0] == -t);
  CHECK(dinv.Am[0].is_zero());
  CHECK(compose_zero(d, dinv) == ModuliData::identity(L, W));
}

TEST_CASE("quotient by the simultaneous sign flip") {
  std::mt19937_64 rng(97);
  for (int t = 0; t < 6; ++t) {
    ModuliData d = rand_moduli(rng, L3, 3, false);
    ModuliData flipped = d;
    flipped.a0 = -d.a0;
    flipped.b0 = -d.b0;
    CHECK(e_hat(d, 6) == e_hat(flipped, 6));
    CHECK(canonicalize(flipped) == canonicalize(d));
    CHECK(canonicalize(canonicalize(d)) == canonicalize(d));
  }
  // canonical representative has positive real part of the a0 body
  ModuliData d = ModuliData::identity(4, 2);
  d.a0 = GrassmannElement::scalar(4, FieldScalar(-2));
  d.b0 = GrassmannElement::scalar(4, FieldScalar(5));
  ModuliData c = canonicalize(d);
  CHECK(c.a0 == GrassmannElement::scalar(4, FieldScalar(2)));
  CHECK(c.b0 == GrassmannElement::scalar(4, FieldScalar(-5)));
}

TEST_CASE("subgroup patterns are closed under both compositions") {
  std::mt19937_64 rng(101);
  const int W = 3;
  // masks: which of (Ap, Am, Mp, Mm) may be nonzero
  const std::array<std::array<bool, 4>, 11> patterns{{
      {true, false, false, false},
      {false, true, false, false},
      {true, true, false, false},
      {false, false, true, false},
      {false, false, false, true},
      {true, false, true, false},
      {true, false, false, true},
      {false, true, true, false},
      {false, true, false, true},
      {true, true, true, false},
      {true, true, false, true},
  }};
  for (const auto& pat : patterns) {
    ModuliData d1 = rand_moduli(rng, L3, W, true);
    ModuliData d2 = rand_moduli(rng, L3, W, true);
    for (ModuliData* d : {&d1, &d2}) {
      if (!pat[0]) d->Ap.assign(W, GrassmannElement::zero(L3));
      if (!pat[1]) d->Am.assign(W, GrassmannElement::zero(L3));
      if (!pat[2]) d->Mp.assign(W, GrassmannElement::zero(L3));
      if (!pat[3]) d->Mm.assign(W, GrassmannElement::zero(L3));
    }
    for (auto* comp : {&compose_zero, &compose_infinity}) {
      ModuliData r = (*comp)(d1, d2);
      auto all_zero = [](const std::vector<GrassmannElement>& v) {
        for (const auto& g : v)
          if (!g.is_zero()) return false;
        return true;
      };
      if (!pat[0]) CHECK(all_zero(r.Ap));
      if (!pat[1]) CHECK(all_zero(r.Am));
      if (!pat[2]) CHECK(all_zero(r.Mp));
      if (!pat[3]) CHECK(all_zero(r.Mm));
    }
  }
}

TEST_CASE("normal-form validators") {
  ModuliData d = ModuliData::identity(4, 3);
  CHECK(validate_s2k0(d));
  d.Ap[0] = GrassmannElement::one(4);
  CHECK_FALSE(validate_s2k0(d));
  d.Ap[0] = GrassmannElement::zero(4);
  d.Am[0] = GrassmannElement::one(4);  // A-_1 unconstrained
  CHECK(validate_s2k0(d));

  // one-tube form of an at-infinity coordinate: a+_1 = -a-_1, m_{1/2} = 0
  ModuliData inf = ModuliData::identity(4, 3);
  CHECK(validate_one_tube_infinity(infinity_series(inf, 5)));
  inf.Mp[0] = z({1});
  CHECK_FALSE(validate_one_tube_infinity(infinity_series(inf, 5)));
}

TEST_CASE("infinity series and extraction round trip") {
  std::mt19937_64 rng(103);
  for (int t = 0; t < 6; ++t) {
    ModuliData d = rand_moduli(rng, L3, 4, true);
    CoordMap H = infinity_series(d, 6);
    CHECK(sc_check(H).pass);
    CHECK(infinity_data_extract(H, 4) == d);
  }
}
