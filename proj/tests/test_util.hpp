#pragma once

#include <random>

#include "n2sc/moduli.hpp"

namespace n2sc::testutil {

inline FieldScalar rand_rational(std::mt19937_64& rng, bool with_irrational = false) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  FieldScalar v{Rational(num(rng), den(rng)), 0, 0, 0};
  if (with_irrational) {
    v = v + FieldScalar(0, Rational(num(rng), den(rng)), 0, 0);
    if (num(rng) > 2) v = v + FieldScalar(0, 0, Rational(num(rng), den(rng)), 0);
  }
  return v;
}

// random element with the requested parity; optionally force a nonzero body
inline GrassmannElement rand_grassmann(std::mt19937_64& rng, int L, Parity par,
                                       bool with_body) {
  GrassmannElement g(L);
  std::uniform_int_distribution<int> nterms(1, 3);
  std::uniform_int_distribution<std::uint32_t> mask(0, (1u << L) - 1);
  int want = par == Parity::Odd ? 1 : 0;
  for (int t = nterms(rng); t > 0; --t) {
    std::uint32_t m = mask(rng);
    if ((std::popcount(m) & 1) != want) continue;
    if (par == Parity::Even && !with_body && m == 0) continue;
    g.add_term(m, rand_rational(rng, true));
  }
  if (with_body) {
    FieldScalar b = rand_rational(rng);
    if (b.is_zero()) b = FieldScalar(1);
    g = g.soul() + GrassmannElement::scalar(L, b);
  }
  return g;
}

inline GrassmannElement rand_even_soul(std::mt19937_64& rng, int L) {
  GrassmannElement g = rand_grassmann(rng, L, Parity::Even, false);
  return g.soul();
}

inline ModuliData rand_moduli(std::mt19937_64& rng, int L, int W,
                              bool unit_scales) {
  ModuliData d = ModuliData::identity(L, W);
  if (!unit_scales) {
    d.a0 = rand_grassmann(rng, L, Parity::Even, true);
    d.b0 = rand_grassmann(rng, L, Parity::Even, true);
  }
  for (int j = 0; j < W; ++j) {
    d.Ap[j] = rand_grassmann(rng, L, Parity::Even, (rng() & 1) != 0);
    d.Am[j] = rand_grassmann(rng, L, Parity::Even, (rng() & 1) != 0);
    d.Mp[j] = rand_grassmann(rng, L, Parity::Odd, false);
    d.Mm[j] = rand_grassmann(rng, L, Parity::Odd, false);
  }
  return canonicalize(d);
}

// random at-zero series with homogeneous total parity
inline SuperSeries rand_series(std::mt19937_64& rng, int L, Parity par, int lo,
                               int hi) {
  SuperSeries s(Kind::AtZero, L, lo, hi);
  for (int k = lo; k <= hi; ++k) {
    for (auto [fp, fm] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
      if ((rng() & 3) == 0) continue;
      Parity cp = static_cast<Parity>((static_cast<int>(par) + fp + fm) % 2);
      s.add_term(k, fp, fm, rand_grassmann(rng, L, cp, cp == Parity::Even));
    }
  }
  return s;
}

}  // namespace n2sc::testutil
