#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

#include "n2sc/json_io.hpp"
#include "test_util.hpp"

using namespace n2sc;

namespace {
const int L = 4;

std::pair<int, std::string> run(const std::string& cmdline) {
  std::string cmd = std::string(N2SC_BIN) + " " + cmdline + " 2>/dev/null";
  std::array<char, 4096> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  int rc = pclose(pipe);
  return {WEXITSTATUS(rc), out};
}

std::string quote(const Json& j) {
  std::string s = j.dump();
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  q += "'";
  return q;
}
}  // namespace

TEST_CASE("json round trips") {
  std::mt19937_64 rng(3);
  GrassmannElement g = testutil::rand_grassmann(rng, L, Parity::Even, true) +
                       testutil::rand_grassmann(rng, L, Parity::Odd, false);
  CHECK(grassmann_from_json(to_json(g), L) == g);

  SuperSeries s = testutil::rand_series(rng, L, Parity::Odd, -2, 5);
  CHECK(series_from_json(to_json(s), L) == s);

  CoordMap m{testutil::rand_series(rng, L, Parity::Even, 0, 4),
             testutil::rand_series(rng, L, Parity::Odd, 0, 4),
             testutil::rand_series(rng, L, Parity::Odd, 0, 4)};
  CHECK(coordmap_from_json(to_json(m), L) == m);

  ModuliData d = testutil::rand_moduli(rng, L, 3, false);
  CHECK(moduli_from_json(to_json(d), L) == d);

  SphereData q;
  q.n = 2;
  q.infinity = testutil::rand_moduli(rng, L, 3, true);
  q.punctures.push_back(Point{GrassmannElement::scalar(L, FieldScalar(2)),
                              GrassmannElement::generators(L, {1}),
                              GrassmannElement::generators(L, {2})});
  q.locals.push_back(testutil::rand_moduli(rng, L, 3, false));
  q.locals.push_back(testutil::rand_moduli(rng, L, 3, false));
  CHECK(sphere_from_json(to_json(q), L) == q);

  DerivationSum t(L);
  t.add(GrassmannElement::generators(L, {1}), {Family::Gp, 2});
  t.add(GrassmannElement::one(L), {Family::L, -1});
  CHECK(derivation_from_json(to_json(t), L) == t);
}

TEST_CASE("json rejects malformed data") {
  CHECK_THROWS_AS(field_from_json(Json::array({1, 2, 3})), ParseError);
  CHECK_THROWS_AS(field_from_json(Json::array({1, 0, 0, 1, 0, 1, 0, 1})), ParseError);
  Json bad = Json::array();
  Json term;
  term["gens"] = Json::array({2, 1});
  term["coef"] = to_json(FieldScalar(1));
  bad.push_back(term);
  CHECK_THROWS_AS(grassmann_from_json(bad, L), ParseError);
}

TEST_CASE("cli: verification suites and exit codes") {
  auto [rc, out] = run("verify-ns --window 2");
  CHECK(rc == 0);
  CHECK(Json::parse(out)["pass"] == true);
  auto [rc2, out2] = run("verify-ns-nonhomo --window 2");
  CHECK(rc2 == 0);
  CHECK(Json::parse(out2)["pass"] == true);
  // domain error: inverting a pure soul element
  Json soul = to_json(GrassmannElement::generators(L, {1}));
  auto [rc3, out3] = run("gr-inv " + quote(soul));
  CHECK(rc3 == 2);
  CHECK(Json::parse(out3)["error"] == "NonInvertible");
  // malformed input
  auto [rc4, out4] = run("gr-inv 'not json'");
  CHECK(rc4 == 1);
}

TEST_CASE("cli: e-map / e-inv round trip is byte-identical") {
  std::mt19937_64 rng(7);
  ModuliData d = testutil::rand_moduli(rng, 3, 4, true);
  std::string fixture = quote(to_json(d));
  auto [rc1, emap_out] = run("e-map --gens 3 " + fixture);
  REQUIRE(rc1 == 0);
  auto [rc2, back] = run("e-inv --gens 3 " + quote(Json::parse(emap_out)));
  REQUIRE(rc2 == 0);
  // canonical serialization of the recovered data equals the fixture's
  CHECK(Json::parse(back).dump() == to_json(d).dump());
  // determinism: identical invocations give identical bytes
  auto [rc3, emap_out2] = run("e-map --gens 3 " + fixture);
  CHECK(emap_out == emap_out2);
}

TEST_CASE("cli: scale quotient through e-hat") {
  ModuliData d = ModuliData::identity(L, 2);
  d.a0 = GrassmannElement::scalar(L, FieldScalar(2));
  d.b0 = GrassmannElement::scalar(L, FieldScalar(3));
  ModuliData dneg = d;
  dneg.a0 = -d.a0;
  dneg.b0 = -d.b0;
  auto [rc1, h1] = run("e-hat --order 4 " + quote(to_json(d)));
  auto [rc2, h2] = run("e-hat --order 4 " + quote(to_json(dneg)));
  REQUIRE(rc1 == 0);
  REQUIRE(rc2 == 0);
  CHECK(h1 == h2);
}
