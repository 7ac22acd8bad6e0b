#include "n2sc/json_io.hpp"

#include <bit>

#include "n2sc/errors.hpp"

namespace n2sc {

namespace {

Json int_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();  // decimal string beyond 64 bits
}

BigInt int_from_json(const Json& j) {
  try {
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) return BigInt(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  throw ParseError("expected an integer or decimal string");
}

std::vector<int> mask_to_gens(std::uint32_t mask) {
  std::vector<int> out;
  for (int j = 0; j < 32; ++j)
    if (mask & (1u << j)) out.push_back(j + 1);
  return out;
}

Json window_to_json(int v) {
  if (v >= kEntire) return 1000000;
  if (v <= -kEntire) return -1000000;
  return v;
}

int window_from_json(const Json& j) {
  long v = j.get<long>();
  if (v >= 1000000) return kEntire;
  if (v <= -1000000) return -kEntire;
  return static_cast<int>(v);
}

}  // namespace

Json to_json(const FieldScalar& v) {
  Json arr = Json::array();
  for (int k = 0; k < 4; ++k) {
    arr.push_back(int_to_json(boost::multiprecision::numerator(v.comp(k))));
    arr.push_back(int_to_json(boost::multiprecision::denominator(v.comp(k))));
  }
  return arr;
}

FieldScalar field_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 8)
    throw ParseError("coef must be 8 numerator/denominator entries");
  Rational c[4];
  for (int k = 0; k < 4; ++k) {
    BigInt num = int_from_json(j[2 * k]);
    BigInt den = int_from_json(j[2 * k + 1]);
    if (den == 0) throw ParseError("zero denominator");
    c[k] = Rational(num, den);
  }
  return {c[0], c[1], c[2], c[3]};
}

Json to_json(const GrassmannElement& g) {
  Json arr = Json::array();
  for (const auto& [mask, coef] : g.terms()) {
    Json term;
    term["gens"] = mask_to_gens(mask);
    term["coef"] = to_json(coef);
    arr.push_back(term);
  }
  return arr;
}

GrassmannElement grassmann_from_json(const Json& j, int gens) {
  if (!j.is_array()) throw ParseError("Grassmann element must be a list");
  GrassmannElement g(gens);
  for (const auto& term : j) {
    if (!term.contains("gens") || !term.contains("coef"))
      throw ParseError("Grassmann term needs gens and coef");
    std::uint32_t mask = 0;
    int prev = 0;
    for (const auto& e : term["gens"]) {
      int v = e.get<int>();
      if (v <= prev || v > gens)
        throw ParseError("generator indices must be increasing and <= L");
      mask |= 1u << (v - 1);
      prev = v;
    }
    g.add_term(mask, field_from_json(term["coef"]));
  }
  return g;
}

Json to_json(const SuperSeries& s) {
  Json out;
  out["kind"] = s.kind() == Kind::AtZero ? "at_zero" : "at_infinity";
  out["window"] = Json::array({window_to_json(s.lo()), window_to_json(s.hi())});
  Json terms = Json::array();
  for (const auto& [key, c] : s.terms()) {
    Json t;
    t["k"] = key.k;
    t["jp"] = key.fp;
    t["jm"] = key.fm;
    t["coef"] = to_json(c);
    terms.push_back(t);
  }
  out["terms"] = terms;
  return out;
}

SuperSeries series_from_json(const Json& j, int gens) {
  try {
    Kind kind = j.at("kind").get<std::string>() == "at_infinity"
                    ? Kind::AtInfinity
                    : Kind::AtZero;
    int lo = window_from_json(j.at("window").at(0));
    int hi = window_from_json(j.at("window").at(1));
    SuperSeries s(kind, gens, lo, hi);
    for (const auto& t : j.at("terms")) {
      s.add_term(t.at("k").get<int>(), t.at("jp").get<int>(),
                 t.at("jm").get<int>(), grassmann_from_json(t.at("coef"), gens));
    }
    return s;
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const CoordMap& m) {
  Json out;
  out["frame"] = "homogeneous";
  out["even"] = to_json(m.x);
  out["oddp"] = to_json(m.fp);
  out["oddm"] = to_json(m.fm);
  return out;
}

CoordMap coordmap_from_json(const Json& j, int gens) {
  try {
    return {series_from_json(j.at("even"), gens),
            series_from_json(j.at("oddp"), gens),
            series_from_json(j.at("oddm"), gens)};
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const Point& p) {
  return Json::array({to_json(p.z), to_json(p.tp), to_json(p.tm)});
}

Point point_from_json(const Json& j, int gens) {
  if (!j.is_array() || j.size() != 3) throw ParseError("point must be [z,tp,tm]");
  return {grassmann_from_json(j[0], gens), grassmann_from_json(j[1], gens),
          grassmann_from_json(j[2], gens)};
}

Json to_json(const DerivationSum& t) {
  static const char* names[] = {"L", "J", "Gp", "Gm"};
  Json terms = Json::array();
  for (const auto& [c, b] : t.terms()) {
    Json e;
    e["family"] = names[static_cast<int>(b.fam)];
    e["j"] = b.j;
    e["coef"] = to_json(c);
    terms.push_back(e);
  }
  Json out;
  out["terms"] = terms;
  return out;
}

DerivationSum derivation_from_json(const Json& j, int gens) {
  DerivationSum t(gens);
  try {
    for (const auto& e : j.at("terms")) {
      std::string f = e.at("family").get<std::string>();
      Family fam;
      if (f == "L") fam = Family::L;
      else if (f == "J") fam = Family::J;
      else if (f == "Gp") fam = Family::Gp;
      else if (f == "Gm") fam = Family::Gm;
      else throw ParseError("unknown family " + f);
      t.add(grassmann_from_json(e.at("coef"), gens), {fam, e.at("j").get<int>()});
    }
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
  return t;
}

Json to_json(const ModuliData& d) {
  Json out;
  out["a0"] = to_json(d.a0);
  out["b0"] = to_json(d.b0);
  auto seq = [](const std::vector<GrassmannElement>& v) {
    Json arr = Json::array();
    for (const auto& g : v) arr.push_back(to_json(g));
    return arr;
  };
  out["Ap"] = seq(d.Ap);
  out["Am"] = seq(d.Am);
  out["Mp"] = seq(d.Mp);
  out["Mm"] = seq(d.Mm);
  out["weight"] = d.weight();
  return out;
}

ModuliData moduli_from_json(const Json& j, int gens) {
  try {
    ModuliData d;
    d.a0 = grassmann_from_json(j.at("a0"), gens);
    d.b0 = grassmann_from_json(j.at("b0"), gens);
    auto seq = [&](const Json& arr) {
      std::vector<GrassmannElement> v;
      for (const auto& e : arr) v.push_back(grassmann_from_json(e, gens));
      return v;
    };
    d.Ap = seq(j.at("Ap"));
    d.Am = seq(j.at("Am"));
    d.Mp = seq(j.at("Mp"));
    d.Mm = seq(j.at("Mm"));
    if (j.contains("weight") && j.at("weight").get<int>() != d.weight())
      throw ParseError("weight does not match sequence lengths");
    d.validate();
    return d;
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const ESequences& e) {
  auto seq = [](const std::vector<GrassmannElement>& v) {
    Json arr = Json::array();
    for (const auto& g : v) arr.push_back(to_json(g));
    return arr;
  };
  Json out;
  out["Ep"] = seq(e.Ep);
  out["Em"] = seq(e.Em);
  out["EpHalf"] = seq(e.MpH);
  out["EmHalf"] = seq(e.MmH);
  return out;
}

ESequences esequences_from_json(const Json& j, int gens) {
  try {
    auto seq = [&](const Json& arr) {
      std::vector<GrassmannElement> v;
      for (const auto& e : arr) v.push_back(grassmann_from_json(e, gens));
      return v;
    };
    ESequences e;
    e.Ep = seq(j.at("Ep"));
    e.Em = seq(j.at("Em"));
    e.MpH = seq(j.at("EpHalf"));
    e.MmH = seq(j.at("EmHalf"));
    return e;
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const SphereData& q) {
  Json out;
  out["n"] = q.n;
  Json ps = Json::array();
  for (const auto& p : q.punctures) ps.push_back(to_json(p));
  out["punctures"] = ps;
  out["infinity"] = to_json(q.infinity);
  Json ls = Json::array();
  for (const auto& d : q.locals) ls.push_back(to_json(d));
  out["locals"] = ls;
  return out;
}

SphereData sphere_from_json(const Json& j, int gens) {
  try {
    SphereData q;
    q.n = j.at("n").get<int>();
    for (const auto& p : j.at("punctures")) q.punctures.push_back(point_from_json(p, gens));
    q.infinity = moduli_from_json(j.at("infinity"), gens);
    for (const auto& d : j.at("locals")) q.locals.push_back(moduli_from_json(d, gens));
    q.validate();
    return q;
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const ProjectiveParams& p) {
  Json out;
  out["a"] = to_json(p.a);
  out["b"] = to_json(p.b);
  out["c"] = to_json(p.c);
  out["d"] = to_json(p.d);
  out["ep"] = to_json(p.ep);
  out["em"] = to_json(p.em);
  out["gp"] = to_json(p.gp);
  out["gm"] = to_json(p.gm);
  out["dp"] = to_json(p.dp);
  out["dm"] = to_json(p.dm);
  return out;
}

ProjectiveParams projective_from_json(const Json& j, int gens) {
  try {
    ProjectiveParams p;
    p.a = grassmann_from_json(j.at("a"), gens);
    p.b = grassmann_from_json(j.at("b"), gens);
    p.c = grassmann_from_json(j.at("c"), gens);
    p.d = grassmann_from_json(j.at("d"), gens);
    p.ep = grassmann_from_json(j.at("ep"), gens);
    p.em = grassmann_from_json(j.at("em"), gens);
    p.gp = grassmann_from_json(j.at("gp"), gens);
    p.gm = grassmann_from_json(j.at("gm"), gens);
    p.dp = grassmann_from_json(j.at("dp"), gens);
    p.dm = grassmann_from_json(j.at("dm"), gens);
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const OspMatrix& m) {
  Json rows = Json::array();
  for (const auto& row : m.m) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(to_json(e));
    rows.push_back(r);
  }
  Json out;
  out["m"] = rows;
  return out;
}

OspMatrix osp_from_json(const Json& j, int gens) {
  try {
    OspMatrix m = OspMatrix::zero(gens);
    const Json& rows = j.at("m");
    if (rows.size() != 4) throw ParseError("matrix must be 4x4");
    for (int i = 0; i < 4; ++i) {
      if (rows[i].size() != 4) throw ParseError("matrix must be 4x4");
      for (int k = 0; k < 4; ++k)
        m.m[i][k] = grassmann_from_json(rows[i][k], gens);
    }
    return m;
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const NonhomoMap& m) {
  Json out;
  out["frame"] = "nonhomogeneous";
  out["even"] = to_json(m.x);
  out["oddp"] = to_json(m.th);
  out["oddm"] = to_json(m.ths);
  return out;
}

NonhomoMap nonhomomap_from_json(const Json& j, int gens) {
  try {
    return {series_from_json(j.at("even"), gens),
            series_from_json(j.at("oddp"), gens),
            series_from_json(j.at("oddm"), gens)};
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const NonhomoPoint& p) {
  return Json::array({to_json(p.z), to_json(p.th), to_json(p.ths)});
}

NonhomoPoint nonhomopoint_from_json(const Json& j, int gens) {
  if (!j.is_array() || j.size() != 3)
    throw ParseError("nonhomogeneous point must be [z,th,ths]");
  return {grassmann_from_json(j[0], gens), grassmann_from_json(j[1], gens),
          grassmann_from_json(j[2], gens)};
}

}  // namespace n2sc
