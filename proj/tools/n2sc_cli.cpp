// Command-line surface over the N=2 superconformal calculus: every operation
// takes and produces JSON, with the Grassmann generator count L, series
// truncation order N, and sequence weight W given by flags.
//
// Exit codes: 0 success, 1 malformed input, 2 domain error (the error object
// names the module-level error).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "n2sc/errors.hpp"
#include "n2sc/json_io.hpp"
#include "n2sc/nsalgebra.hpp"
#include "n2sc/superconformal.hpp"

using namespace n2sc;

namespace {

struct Context {
  int gens = 4;
  int order = 8;
  int weight = 5;
  std::string in_path;
  std::string out_path;
  std::string inline_json;
  std::string mode;
};

Json read_input(const Context& ctx) {
  std::string text;
  if (!ctx.inline_json.empty()) {
    text = ctx.inline_json;
  } else if (!ctx.in_path.empty()) {
    std::ifstream f(ctx.in_path);
    if (!f) throw ParseError("cannot open input file " + ctx.in_path);
    std::stringstream buf;
    buf << f.rdbuf();
    text = buf.str();
  } else {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  }
  if (text.empty()) throw ParseError("no input given");
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

void write_output(const Context& ctx, const Json& out) {
  std::string text = out.dump(2);
  if (!ctx.out_path.empty()) {
    std::ofstream f(ctx.out_path);
    if (!f) throw ParseError("cannot open output file " + ctx.out_path);
    f << text << "\n";
  } else {
    std::cout << text << "\n";
  }
}

Json sc_report_json(const ScReport& rep) {
  Json out;
  out["pass"] = rep.pass;
  if (!rep.first_violation.empty()) out["first_violation"] = rep.first_violation;
  if (rep.soul_unit_warning) out["soul_unit_warning"] = true;
  if (rep.degenerate) out["degenerate"] = true;
  return out;
}

int dispatch(const std::string& cmd, const Context& ctx) {
  const int L = ctx.gens;
  if (cmd == "gr-mul") {
    Json in = read_input(ctx);
    GrassmannElement a = grassmann_from_json(in.at("a"), L);
    GrassmannElement b = grassmann_from_json(in.at("b"), L);
    write_output(ctx, to_json(a * b));
  } else if (cmd == "gr-inv") {
    Json in = read_input(ctx);
    GrassmannElement a =
        in.is_object() && in.contains("a") ? grassmann_from_json(in.at("a"), L)
                                           : grassmann_from_json(in, L);
    write_output(ctx, to_json(gr_inv(a)));
  } else if (cmd == "ss-compose") {
    Json in = read_input(ctx);
    CoordMap outer = coordmap_from_json(in.at("outer"), L);
    if (in.at("inner").is_array()) {
      Point p = point_from_json(in.at("inner"), L);
      write_output(ctx, to_json(ss_eval(outer, p)));
    } else {
      CoordMap inner = coordmap_from_json(in.at("inner"), L);
      write_output(ctx, to_json(ss_compose(outer, inner)));
    }
  } else if (cmd == "sc-check") {
    Json in = read_input(ctx);
    write_output(ctx, sc_report_json(sc_check(coordmap_from_json(in, L))));
  } else if (cmd == "e-map") {
    Json in = read_input(ctx);
    write_output(ctx, to_json(e_map(moduli_from_json(in, L))));
  } else if (cmd == "e-inv") {
    Json in = read_input(ctx);
    write_output(ctx, to_json(e_inverse(esequences_from_json(in, L))));
  } else if (cmd == "e-tilde") {
    Json in = read_input(ctx);
    write_output(ctx, to_json(e_tilde(moduli_from_json(in, L), ctx.order)));
  } else if (cmd == "e-hat") {
    Json in = read_input(ctx);
    write_output(ctx, to_json(e_hat(moduli_from_json(in, L), ctx.order)));
  } else if (cmd == "compose-zero") {
    Json in = read_input(ctx);
    write_output(ctx, to_json(compose_zero(moduli_from_json(in.at("d1"), L),
                                           moduli_from_json(in.at("d2"), L))));
  } else if (cmd == "compose-inf") {
    Json in = read_input(ctx);
    write_output(ctx, to_json(compose_infinity(moduli_from_json(in.at("d1"), L),
                                               moduli_from_json(in.at("d2"), L))));
  } else if (cmd == "invert") {
    Json in = read_input(ctx);
    write_output(ctx, to_json(invert_data(moduli_from_json(in, L))));
  } else if (cmd == "sew") {
    Json in = read_input(ctx);
    SphereData q1 = sphere_from_json(in.at("q1"), L);
    SphereData q2 = sphere_from_json(in.at("q2"), L);
    write_output(ctx, to_json(sew(q1, in.at("k").get<int>(), q2)));
  } else if (cmd == "perm") {
    Json in = read_input(ctx);
    std::vector<int> sigma = in.at("sigma").get<std::vector<int>>();
    write_output(ctx, to_json(act_permutation(sigma, sphere_from_json(in.at("q"), L))));
  } else if (cmd == "transpose-last") {
    Json in = read_input(ctx);
    SphereData q = in.is_object() && in.contains("q")
                       ? sphere_from_json(in.at("q"), L)
                       : sphere_from_json(in, L);
    write_output(ctx, to_json(act_transpose_last(q)));
  } else if (cmd == "pp-map") {
    Json in = read_input(ctx);
    ProjectiveParams p = projective_from_json(in.at("params"), L);
    if (ctx.mode == "point") {
      SpherePoint sp{false, point_from_json(in.at("point"), L)};
      if (in.contains("chart") && in.at("chart").get<std::string>() == "infinity")
        sp.at_infinity_chart = true;
      SpherePoint out = pp_apply(p, sp);
      Json j;
      j["chart"] = out.at_infinity_chart ? "infinity" : "zero";
      j["point"] = to_json(out.p);
      write_output(ctx, j);
    } else {
      write_output(ctx, to_json(pp_to_map(p, ctx.order)));
    }
  } else if (cmd == "pp-compose") {
    Json in = read_input(ctx);
    write_output(ctx, to_json(pp_compose(projective_from_json(in.at("p1"), L),
                                         projective_from_json(in.at("p2"), L))));
  } else if (cmd == "pp-example71") {
    GrassmannElement A1(L), Am1(L), Mp(L), Mm(L);
    if (!ctx.inline_json.empty() || !ctx.in_path.empty()) {
      Json in = read_input(ctx);
      A1 = grassmann_from_json(in.at("A1"), L);
      Am1 = grassmann_from_json(in.at("Am1"), L);
      Mp = grassmann_from_json(in.at("Mp"), L);
      Mm = grassmann_from_json(in.at("Mm"), L);
    } else {
      if (L < 4) throw ParseError("default example needs --gens >= 4");
      A1 = GrassmannElement::scalar(L, FieldScalar(Rational(2, 3))) +
           GrassmannElement::generators(L, {1, 2});
      Am1 = GrassmannElement::scalar(L, FieldScalar(Rational(3, 5)));
      Mp = GrassmannElement::generators(L, {3});
      Mm = GrassmannElement::generators(L, {4});
    }
    ProjectiveParams closed = example71_params(A1, Am1, Mp, Mm);
    if (ctx.mode == "compare" || ctx.mode.empty()) {
      auto f = example71_factors(A1, Am1, Mp, Mm);
      ProjectiveParams prod = pp_compose(pp_compose(f[0], f[1]), f[2]);
      Json out;
      out["equal"] = pp_same_map(prod, closed);
      write_output(ctx, out);
    } else if (ctx.mode == "params") {
      write_output(ctx, to_json(closed));
    } else {
      throw ParseError("pp-example71 supports --mode compare|params");
    }
  } else if (cmd == "osp-check") {
    Json in = read_input(ctx);
    if (in.is_object() && in.contains("gen")) {
      DerivationSum d = derivation_from_json(in.at("gen"), L);
      if (d.terms().size() != 1) throw ParseError("gen must hold one term");
      write_output(ctx, to_json(osp_correspondence(d.terms()[0].second, L)));
    } else {
      OspMatrix m = osp_from_json(in, L);
      bool group = ctx.mode == "group";
      OspReport rep = osp_check(m, group);
      Json out;
      out["pass"] = rep.pass;
      if (group)
        out["sdet_one"] = rep.sdet_one;
      else
        out["beta_invariant"] = rep.beta_invariant;
      if (!rep.detail.empty()) out["detail"] = rep.detail;
      write_output(ctx, out);
    }
  } else if (cmd == "verify-ns") {
    NsVerifyReport rep = ns_verify_representation(ctx.weight, std::min(L, 3));
    Json out;
    out["pass"] = rep.pass;
    out["pairs_checked"] = rep.pairs_checked;
    if (!rep.pass) out["mismatches"] = rep.mismatches;
    write_output(ctx, out);
    return rep.pass ? 0 : 2;
  } else if (cmd == "verify-ns-nonhomo") {
    NhVerifyReport rep = nh_verify_representation(ctx.weight, std::min(L, 3));
    Json out;
    out["pass"] = rep.pass;
    out["pairs_checked"] = rep.pairs_checked;
    if (!rep.pass) out["mismatches"] = rep.mismatches;
    write_output(ctx, out);
    return rep.pass ? 0 : 2;
  } else if (cmd == "to-nonhomo") {
    Json in = read_input(ctx);
    if (ctx.mode == "to-homo") {
      if (in.is_array()) {
        write_output(ctx, to_json(to_homo(nonhomopoint_from_json(in, L))));
      } else {
        write_output(ctx, to_json(to_homo(nonhomomap_from_json(in, L))));
      }
    } else {
      if (in.is_array()) {
        write_output(ctx, to_json(to_nonhomo(point_from_json(in, L))));
      } else {
        write_output(ctx, to_json(to_nonhomo(coordmap_from_json(in, L))));
      }
    }
  } else if (cmd == "nh-check") {
    Json in = read_input(ctx);
    NhReport rep = nh_check(nonhomomap_from_json(in, L));
    Json out;
    out["pass"] = rep.pass;
    if (!rep.first_violation.empty()) out["first_violation"] = rep.first_violation;
    write_output(ctx, out);
  } else {
    throw ParseError("unknown subcommand " + cmd);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact N=2 superconformal calculus"};
  app.require_subcommand(1);

  Context ctx;
  const char* names[] = {
      "gr-mul",       "gr-inv",         "ss-compose", "sc-check",
      "e-map",        "e-inv",          "e-tilde",    "e-hat",
      "compose-zero", "compose-inf",    "invert",     "sew",
      "perm",         "transpose-last", "pp-map",     "pp-compose",
      "pp-example71", "osp-check",      "verify-ns",  "verify-ns-nonhomo",
      "to-nonhomo",   "nh-check"};
  std::string chosen;
  for (const char* n : names) {
    auto* sub = app.add_subcommand(n);
    sub->add_option("--gens", ctx.gens, "Grassmann generator count L")
        ->default_val(4);
    sub->add_option("--order", ctx.order, "series truncation order N")
        ->default_val(8);
    sub->add_option("--weight,--window", ctx.weight,
                    "sequence weight / index window W")
        ->default_val(5);
    sub->add_option("--in", ctx.in_path, "input JSON file");
    sub->add_option("--out", ctx.out_path, "output file (default stdout)");
    sub->add_option("--mode", ctx.mode, "subcommand-specific mode");
    sub->add_option("json", ctx.inline_json, "inline JSON input");
    sub->callback([&chosen, n] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    return dispatch(chosen, ctx);
  } catch (const DomainError& e) {
    Json err;
    err["error"] = e.name();
    err["detail"] = e.what();
    std::cout << err.dump(2) << "\n";
    return 2;
  } catch (const ParseError& e) {
    Json err;
    err["error"] = "ParseError";
    err["detail"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return 1;
  } catch (const Json::exception& e) {
    Json err;
    err["error"] = "ParseError";
    err["detail"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
}
