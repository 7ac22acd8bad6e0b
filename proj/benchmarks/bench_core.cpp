#include <benchmark/benchmark.h>

#include "n2sc/moduli.hpp"
#include "n2sc/projective.hpp"

using namespace n2sc;

namespace {

GrassmannElement dense_even(int L) {
  GrassmannElement g = GrassmannElement::scalar(L, FieldScalar(Rational(2, 3)));
  for (int j = 1; j + 1 <= L; j += 2)
    g += GrassmannElement::generators(L, {j, j + 1},
                                      FieldScalar(Rational(j, j + 2)));
  return g;
}

ModuliData sample_data(int L, int W) {
  ModuliData d = ModuliData::identity(L, W);
  for (int j = 0; j < W; ++j) {
    d.Ap[j] = dense_even(L).scaled(FieldScalar(Rational(1, j + 2)));
    d.Am[j] = dense_even(L).scaled(FieldScalar(Rational(2, 2 * j + 3)));
    d.Mp[j] = GrassmannElement::generators(L, {1});
    d.Mm[j] = GrassmannElement::generators(L, {(j % L) + 1});
  }
  return d;
}

void BM_grassmann_mul(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  GrassmannElement a = dense_even(L);
  GrassmannElement b = dense_even(L) + GrassmannElement::generators(L, {1});
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_grassmann_mul)->Arg(4)->Arg(8);

void BM_grassmann_inv(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  GrassmannElement a = dense_even(L);
  for (auto _ : state) benchmark::DoNotOptimize(gr_inv(a));
}
BENCHMARK(BM_grassmann_inv)->Arg(4)->Arg(8);

void BM_exp_flow(benchmark::State& state) {
  const int L = 3;
  ModuliData d = sample_data(L, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(e_tilde(d, d.weight() + 2));
}
BENCHMARK(BM_exp_flow)->Arg(3)->Arg(5);

void BM_e_map_round_trip(benchmark::State& state) {
  const int L = 3;
  ModuliData d = sample_data(L, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ESequences e = e_map(d);
    benchmark::DoNotOptimize(e_inverse(e));
  }
}
BENCHMARK(BM_e_map_round_trip)->Arg(3)->Arg(5);

void BM_compose_zero(benchmark::State& state) {
  const int L = 3;
  ModuliData d1 = sample_data(L, static_cast<int>(state.range(0)));
  ModuliData d2 = invert_data(d1);
  for (auto _ : state) benchmark::DoNotOptimize(compose_zero(d1, d2));
}
BENCHMARK(BM_compose_zero)->Arg(3)->Arg(5);

void BM_pp_compose(benchmark::State& state) {
  const int L = 4;
  GrassmannElement one = GrassmannElement::one(L);
  ProjectiveParams p = ProjectiveParams::identity(L);
  p.b = GrassmannElement::generators(L, {1, 2});
  p.c = GrassmannElement::scalar(L, FieldScalar(Rational(1, 2)));
  p.a = one;
  p.d = one + p.b * p.c;
  p.gp = GrassmannElement::generators(L, {1});
  p.dm = GrassmannElement::generators(L, {2});
  p.ep = GrassmannElement::scalar(L, FieldScalar(2));
  p.em = (one - p.gp * p.dm).scaled(FieldScalar(Rational(1, 2)));
  for (auto _ : state) benchmark::DoNotOptimize(pp_compose(p, p));
}
BENCHMARK(BM_pp_compose);

}  // namespace

BENCHMARK_MAIN();
