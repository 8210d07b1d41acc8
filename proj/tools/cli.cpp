#include "cli.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "caustics/errors.hpp"
#include "caustics/harness.hpp"
#include "caustics/local.hpp"
#include "caustics/numeric.hpp"
#include "caustics/parse.hpp"

namespace caustics::cli {

namespace {

using nlohmann::json;

std::string verdict_str(BirationalityVerdict v) {
  switch (v) {
    case BirationalityVerdict::injective: return "injective";
    case BirationalityVerdict::collision_found: return "collision_found";
    case BirationalityVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Window parse_window(const std::string& text) {
  Window w;
  std::istringstream in(text);
  char c1 = 0, c2 = 0, c3 = 0;
  if (!(in >> w.x0 >> c1 >> w.x1 >> c2 >> w.y0 >> c3 >> w.y1) || c1 != ',' ||
      c2 != ',' || c3 != ',' || !(in >> std::ws).eof() || w.x0 >= w.x1 ||
      w.y0 >= w.y1) {
    throw CLI::ValidationError("--window", "expected x0,x1,y0,y1 with x0<x1, y0<y1");
  }
  return w;
}

json invariants_json(const InvariantReport& inv, int dual_degree) {
  json j;
  j["d"] = std::to_string(inv.degree);
  j["d_dual"] = std::to_string(dual_degree);
  j["f0"] = std::to_string(inv.flex_excess);
  j["t_I"] = std::to_string(inv.tangency_first);
  j["t_J"] = std::to_string(inv.tangency_second);
  j["g"] = std::to_string(inv.infinity_defect);
  j["mu_I"] = std::to_string(inv.mult_first);
  j["mu_J"] = std::to_string(inv.mult_second);
  return j;
}

json formula_json(const MPoly& f, std::uint64_t seed, const FormulaCheck& fc,
                  bool with_computed) {
  json j;
  j["curve"] = f.str();
  j["source"] = triple_str(fc.source.h);
  j["seed"] = std::to_string(seed);
  j["invariants"] = invariants_json(fc.invariants, fc.dual_degree);
  j["predicted"] = {{"degree", std::to_string(fc.predicted_degree)},
                    {"class", std::to_string(fc.predicted_class)}};
  if (with_computed) {
    j["computed"] = {{"degree", std::to_string(fc.computed_degree)},
                     {"class", std::to_string(fc.computed_class)}};
    j["match"] = {{"degree", fc.degree_match}, {"class", fc.class_match}};
    j["caustic_equation"] = fc.caustic_equation.str();
    j["dual_equation"] = fc.dual_equation.str();
  }
  j["warnings"] = fc.warnings;
  return j;
}

std::string render_formula_text(const json& j) {
  std::ostringstream out;
  out << "curve: " << j["curve"].get<std::string>() << "\n";
  if (j.contains("source")) out << "source: " << j["source"].get<std::string>() << "\n";
  out << "seed: " << j["seed"].get<std::string>() << "\n";
  for (const char* k : {"d", "d_dual", "f0", "t_I", "t_J", "g", "mu_I", "mu_J"}) {
    out << k << ": " << j["invariants"][k].get<std::string>() << "\n";
  }
  out << "predicted degree: " << j["predicted"]["degree"].get<std::string>() << "\n";
  out << "predicted class: " << j["predicted"]["class"].get<std::string>() << "\n";
  if (j.contains("computed")) {
    out << "computed degree: " << j["computed"]["degree"].get<std::string>() << "\n";
    out << "computed class: " << j["computed"]["class"].get<std::string>() << "\n";
    out << "degree match: " << (j["match"]["degree"].get<bool>() ? "yes" : "no") << "\n";
    out << "class match: " << (j["match"]["class"].get<bool>() ? "yes" : "no") << "\n";
    out << "caustic equation: " << j["caustic_equation"].get<std::string>() << "\n";
    out << "dual equation: " << j["dual_equation"].get<std::string>() << "\n";
  }
  if (j.contains("birationality")) {
    out << "birationality: " << j["birationality"]["verdict"].get<std::string>()
        << " over " << j["birationality"]["samples"].get<std::string>()
        << " samples\n";
  }
  for (const auto& w : j["warnings"]) out << "warning: " << w.get<std::string>() << "\n";
  return out.str();
}

struct CommonArgs {
  std::string curve;
  std::string source;
  std::string point;
  std::string format;
  std::string out_path;
  std::string window_text = "-2,2,-2,2";
  std::uint64_t seed = 1;
  int samples = 0;
};

ProjPoint resolve_source(const MPoly& f, const std::string& text, std::uint64_t seed) {
  if (text == "random") return generic_source(f, Rng(seed).split(3).next());
  return ProjPoint(parse_triple(text));
}

/// One formula check without source replacement: explicit sources are used
/// exactly as given.
FormulaCheck compute_once(const MPoly& f, const ProjPoint& s, std::uint64_t seed) {
  FormulaCheck fc;
  fc.source = s;
  fc.invariants = invariant_bundle(f);
  Rng rng(seed);
  const ImageCurve dual = dual_curve(f, rng.split(11).next());
  fc.dual_degree = dual.degree;
  fc.predicted_degree = fc.invariants.predicted_degree;
  fc.predicted_class = fc.invariants.predicted_class(dual.degree);
  const ImageCurve caustic = caustic_implicit(f, s, rng.split(1).next());
  const ImageCurve caustic_dual = caustic_dual_implicit(f, s, rng.split(2).next());
  fc.caustic_equation = caustic.equation;
  fc.computed_degree = caustic.degree;
  fc.dual_equation = caustic_dual.equation;
  fc.computed_class = caustic_dual.degree;
  fc.certified = caustic.certified && caustic_dual.certified;
  fc.degree_match = (fc.computed_degree == fc.predicted_degree);
  fc.class_match = (fc.computed_class == fc.predicted_class);
  if (!fc.certified) {
    fc.warnings.push_back("an eliminated degree was not confirmed by the fiber count");
  }
  return fc;
}

json catalog_json(const CatalogReport& rep) {
  json j;
  j["seed"] = std::to_string(rep.seed);
  j["all_passed"] = rep.all_passed;
  j["entries"] = json::array();
  for (const auto& e : rep.entries) {
    json je;
    je["name"] = e.name;
    je["passed"] = e.passed;
    je["quetelet_dandelin"] = {{"checked", e.quetelet_dandelin_checked},
                               {"match", e.quetelet_dandelin_match}};
    je["failures"] = e.failures;
    je["runs"] = json::array();
    for (const auto& r : e.runs) {
      json jr;
      jr["source"] = triple_str(r.check.source.h);
      jr["source_draws"] = std::to_string(r.source_draws);
      jr["invariants"] = invariants_json(r.check.invariants, r.check.dual_degree);
      jr["predicted"] = {{"degree", std::to_string(r.check.predicted_degree)},
                         {"class", std::to_string(r.check.predicted_class)}};
      jr["computed"] = {{"degree", std::to_string(r.check.computed_degree)},
                        {"class", std::to_string(r.check.computed_class)}};
      jr["match"] = {{"degree", r.check.degree_match}, {"class", r.check.class_match}};
      jr["birationality"] = {{"verdict", verdict_str(r.birationality.verdict)},
                             {"samples", std::to_string(r.birationality.sample_count)}};
      jr["certified"] = r.check.certified;
      jr["caustic_equation"] = r.check.caustic_equation.str();
      jr["dual_equation"] = r.check.dual_equation.str();
      jr["warnings"] = r.check.warnings;
      je["runs"].push_back(std::move(jr));
    }
    j["entries"].push_back(std::move(je));
  }
  return j;
}

std::string render_catalog_text(const CatalogReport& rep) {
  std::ostringstream out;
  out << "seed: " << rep.seed << "\n";
  for (const auto& e : rep.entries) {
    out << e.name << ": " << (e.passed ? "pass" : "FAIL") << "\n";
    for (const auto& f : e.failures) out << "  " << f << "\n";
  }
  out << "all: " << (rep.all_passed ? "pass" : "FAIL") << "\n";
  return out.str();
}

int deliver(const std::string& payload, const std::string& out_path, CliResult& r) {
  if (out_path.empty()) {
    r.out = payload;
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!f) {
    r.exit_code = 2;
    r.diag = "usage error: cannot write output file " + out_path + "\n";
    return 2;
  }
  return 0;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CliResult result;
  CommonArgs a;
  std::string command;

  CLI::App app{"caustic curves of plane mirrors: exact invariants, envelopes, and checks"};
  app.require_subcommand(1);

  auto add_common = [&a](CLI::App* sub, bool needs_curve) {
    auto* c = sub->add_option("--curve", a.curve, "mirror curve F(x,y,z), homogeneous");
    if (needs_curve) c->required();
    sub->add_option("--seed", a.seed, "deterministic seed (default 1)");
    sub->add_option("--out", a.out_path, "output path (default stdout)");
    return sub;
  };

  CLI::App* compute = add_common(app.add_subcommand(
      "compute", "implicit equation of the caustic and its dual"), true);
  compute->add_option("--source", a.source, "[a:b:c] or 'random'")->required();
  compute->add_option("--format", a.format, "json|text (default json)");

  CLI::App* invariants = add_common(app.add_subcommand(
      "invariants", "local invariants and the predicted degree/class"), true);
  invariants->add_option("--format", a.format, "json|text (default json)");

  CLI::App* verify = add_common(app.add_subcommand(
      "verify", "compare predictions with the eliminated caustic, then sample "
      "the reflected-line map for collisions"), true);
  verify->add_option("--source", a.source, "[a:b:c] or 'random'")->required();
  verify->add_option("--format", a.format, "json|text (default json)");
  verify->add_option("--samples", a.samples, "collision-scan sample count (default 200)");

  CLI::App* catalog = add_common(app.add_subcommand(
      "catalog", "run every built-in mirror through the full check suite"), false);
  catalog->add_option("--format", a.format, "json|text (default json)");

  CLI::App* trace = add_common(app.add_subcommand(
      "trace", "real trace of the caustic as plot data"), true);
  trace->add_option("--source", a.source, "[a:b:c] or 'random'")->required();
  trace->add_option("--format", a.format, "csv|svg (default csv)");
  trace->add_option("--window", a.window_text, "x0,x1,y0,y1 (default -2,2,-2,2)");
  trace->add_option("--samples", a.samples, "vertical slices (default 400)");

  CLI::App* badsource = add_common(app.add_subcommand(
      "badsource", "sources whose caustic degenerates for a fixed mirror point"), true);
  badsource->add_option("--point", a.point, "mirror point [a:b:c]")->required();
  badsource->add_option("--format", a.format, "json|text (default json)");

  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
      std::ostringstream help;
      help << app.help();
      result.out = help.str();
      result.exit_code = 0;
      return result;
    } catch (const CLI::ParseError& e) {
      result.exit_code = 2;
      result.diag = std::string("usage error: ") + e.what() + "\n";
      return result;
    }
  }

  if (compute->parsed()) command = "compute";
  else if (invariants->parsed()) command = "invariants";
  else if (verify->parsed()) command = "verify";
  else if (catalog->parsed()) command = "catalog";
  else if (trace->parsed()) command = "trace";
  else command = "badsource";

  const bool is_trace = (command == "trace");
  if (a.format.empty()) a.format = is_trace ? "csv" : "json";
  if (is_trace ? (a.format != "csv" && a.format != "svg")
               : (a.format != "json" && a.format != "text")) {
    result.exit_code = 2;
    result.diag = "usage error: format '" + a.format + "' is not valid for " +
                  command + "\n";
    return result;
  }

  try {
    if (command == "catalog") {
      const CatalogReport rep = run_catalog(a.seed);
      const std::string payload = a.format == "json"
                                      ? catalog_json(rep).dump(2) + "\n"
                                      : render_catalog_text(rep);
      if (deliver(payload, a.out_path, result) != 0) return result;
      if (!rep.all_passed) {
        result.exit_code = 1;
        result.diag = "verification failure: some catalog entries failed\n";
      }
      return result;
    }

    const MPoly f = parse_poly(a.curve);

    if (command == "invariants") {
      FormulaCheck fc;
      fc.invariants = invariant_bundle(f);
      Rng rng(a.seed);
      const ImageCurve dual = dual_curve(f, rng.split(11).next());
      fc.dual_degree = dual.degree;
      fc.predicted_degree = fc.invariants.predicted_degree;
      fc.predicted_class = fc.invariants.predicted_class(dual.degree);
      json j = formula_json(f, a.seed, fc, false);
      j.erase("source");
      const std::string payload =
          a.format == "json" ? j.dump(2) + "\n" : render_formula_text(j);
      deliver(payload, a.out_path, result);
      return result;
    }

    if (command == "badsource") {
      const ProjPoint m(parse_triple(a.point));
      const BadSourceReport bs = bad_source_curve(f, m, a.seed);
      json j;
      j["curve"] = f.str();
      j["point"] = triple_str(m.h);
      j["seed"] = std::to_string(a.seed);
      j["bad_source"] = {{"equation", bs.equation.str()},
                         {"degree", std::to_string(bs.degree)},
                         {"bound", std::to_string(bs.bound)}};
      std::string payload;
      if (a.format == "json") {
        payload = j.dump(2) + "\n";
      } else {
        std::ostringstream out;
        out << "curve: " << j["curve"].get<std::string>() << "\n"
            << "point: " << j["point"].get<std::string>() << "\n"
            << "seed: " << j["seed"].get<std::string>() << "\n"
            << "bad-source equation: " << bs.equation.str() << "\n"
            << "degree: " << bs.degree << " (bound " << bs.bound << ")\n";
        payload = out.str();
      }
      deliver(payload, a.out_path, result);
      return result;
    }

    const ProjPoint s = resolve_source(f, a.source, a.seed);

    if (command == "compute") {
      const FormulaCheck fc = compute_once(f, s, a.seed);
      const json j = formula_json(f, a.seed, fc, true);
      const std::string payload =
          a.format == "json" ? j.dump(2) + "\n" : render_formula_text(j);
      deliver(payload, a.out_path, result);
      return result;
    }

    if (command == "verify") {
      const int n = a.samples > 0 ? a.samples : 200;
      const FormulaCheck fc = verify_formulas(f, s, a.seed);
      const BirationalityReport bir = birationality_test(
          f, fc.source, n, Rng(a.seed).split(4).next(), 1e-8);
      json j = formula_json(f, a.seed, fc, true);
      j["birationality"] = {{"verdict", verdict_str(bir.verdict)},
                            {"samples", std::to_string(bir.sample_count)}};
      const std::string payload =
          a.format == "json" ? j.dump(2) + "\n" : render_formula_text(j);
      if (deliver(payload, a.out_path, result) != 0) return result;
      if (!fc.degree_match || !fc.class_match) {
        result.exit_code = 1;
        result.diag = "verification failure: degree or class prediction failed\n";
      } else if (bir.verdict == BirationalityVerdict::collision_found) {
        result.exit_code = 1;
        result.diag = "verification failure: reflected-line map is not injective "
                      "on the sample\n";
      }
      return result;
    }

    // trace

    const Window w = parse_window(a.window_text);
    const int n = a.samples > 0 ? a.samples : 400;
    const std::vector<TraceSegment> segs = real_trace(f, s, w, n);
    const std::string payload =
        a.format == "csv" ? trace_csv(segs) : trace_svg(segs, w);
    deliver(payload, a.out_path, result);
    return result;
  } catch (const CLI::ValidationError& e) {
    result.exit_code = 2;
    result.diag = std::string("usage error: ") + e.what() + "\n";
    return result;
  } catch (const caustics::ParseError& e) {
    result.exit_code = 2;
    result.diag = std::string("usage error: ") + e.what() + "\n";
    return result;
  } catch (const caustics::Error& e) {
    result.exit_code = 3;
    result.diag = std::string("computation error: ") + e.what() + "\n";
    return result;
  } catch (const std::exception& e) {
    result.exit_code = 3;
    result.diag = std::string("computation error: ") + e.what() + "\n";
    return result;
  }
}

}  // namespace caustics::cli
