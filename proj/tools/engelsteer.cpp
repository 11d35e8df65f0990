// engelsteer: lift | steer | extend | lusin | check | probe over JSON/CSV
// files. Exit codes: 0 success, 1 I/O or parse error, 2 domain error.
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "engel/curve.hpp"
#include "engel/errors.hpp"
#include "engel/io.hpp"
#include "engel/steering.hpp"
#include "engel/whitney.hpp"

namespace {

using engel::io::json;

struct Options {
  std::string subcommand;
  std::string input;
  std::string output;
  double tol = 1e-10;
  int grid = 1001;
  long long seed = 42;
  double tau_dir = 1e-9;
  double epsilon = 0.1;
};

// The CSV goes to --output; the diagnostics JSON sits next to it.
std::string diag_path(const std::string& output) {
  if (output.size() > 4 && output.substr(output.size() - 4) == ".csv")
    return output.substr(0, output.size() - 4) + ".diag.json";
  return output + ".diag.json";
}

json k_to_json(const engel::CompactSet1D& K) {
  json out = json::array();
  for (const auto& iv : K.intervals()) out.push_back(std::vector<double>{iv[0], iv[1]});
  return out;
}

json r_table_to_json(const engel::WhitneyTable& t) {
  return json{{"etas", t.etas}, {"r", t.r}, {"monotone_decay", t.monotone_decay}};
}

void write_outputs(const Options& opt, const engel::SampledCurve& curve, json diag) {
  diag["schema"] = opt.subcommand + "_diagnostics";
  engel::io::write_file_atomic(opt.output, engel::io::curve_to_csv(curve));
  engel::io::write_file_atomic(diag_path(opt.output), diag.dump(2) + "\n");
}

int run_lift(const Options& opt) {
  engel::io::CurveInput in = engel::io::parse_curve(engel::io::load_json(opt.input));
  std::vector<double> grid =
      engel::uniform_grid(in.controls.t0(), in.controls.t1(), opt.grid);
  engel::SampledCurve curve = engel::lift(in.controls, in.start, grid);
  json diag{{"subcommand", "lift"},
            {"endpoint", std::vector<double>(curve.points.back().begin(),
                                             curve.points.back().end())},
            {"length", engel::curve_length(in.controls, opt.tol)},
            {"horizontality_residual", engel::horizontality_residual(curve)},
            {"grid", opt.grid}};
  write_outputs(opt, curve, std::move(diag));
  return 0;
}

int run_steer(const Options& opt) {
  engel::io::ProblemInput p = engel::io::parse_problem(engel::io::load_json(opt.input));
  double tol = p.tol != 1e-10 ? p.tol : opt.tol;
  engel::SteeringSolution sol =
      p.has_end_deriv
          ? engel::steer_full(p.a, p.b, p.end_deriv, p.target, tol, 50,
                              engel::kDefaultAMin, opt.grid)
          : engel::steer_position(p.a, p.b, p.target, tol, 50, engel::kDefaultAMin,
                                  opt.grid);
  std::vector<double> params;
  if (sol.extended)
    params.assign(sol.ext_family.params.begin(), sol.ext_family.params.end());
  else
    params.assign(sol.family.params.begin(), sol.family.params.end());
  json diag{{"subcommand", "steer"},
            {"a", p.a},
            {"b", p.b},
            {"extended", sol.extended},
            {"params", params},
            {"residual", sol.residual},
            {"iterations", sol.iterations},
            {"target", p.target.coords}};
  write_outputs(opt, sol.curve, std::move(diag));
  return 0;
}

int run_extend(const Options& opt) {
  engel::CurveFragment frag =
      engel::io::parse_fragment(engel::io::load_json(opt.input));
  engel::ExtendOptions eopt;
  eopt.tol = opt.tol;
  eopt.tau_dir = opt.tau_dir;
  engel::ExtensionResult res = engel::extend(frag, eopt);
  json per_gap = json::array();
  for (const auto& g : res.per_gap)
    per_gap.push_back(json{{"gap", std::vector<double>{g.gap[0], g.gap[1]}},
                           {"iterations", g.iterations},
                           {"residual", g.residual},
                           {"used_preroll_fallback", g.used_preroll_fallback}});
  json diag{{"subcommand", "extend"},
            {"r_table", r_table_to_json(res.r_table)},
            {"max_residual", res.max_horizontality_residual},
            {"max_derivative_jump", res.max_derivative_jump},
            {"per_gap", per_gap},
            {"K", k_to_json(frag.K)}};
  write_outputs(opt, res.Gamma, std::move(diag));
  return 0;
}

int run_lusin(const Options& opt) {
  engel::io::CurveInput in = engel::io::parse_curve(engel::io::load_json(opt.input));
  std::vector<double> grid =
      engel::uniform_grid(in.controls.t0(), in.controls.t1(), opt.grid);
  engel::SampledCurve curve = engel::lift(in.controls, in.start, grid);
  engel::LusinOptions lopt;
  lopt.epsilon = opt.epsilon;
  lopt.tau_dir = opt.tau_dir;
  lopt.tol = opt.tol;
  engel::LusinResult res = [&] {
    try {
      return engel::lusin_approximate(curve, lopt);
    } catch (const engel::Error& e) {
      if (e.code() != engel::ErrorCode::EmptyS) throw;
      return engel::lusin_degenerate(curve, lopt);
    }
  }();
  json diag{{"subcommand", "lusin"},
            {"agreement", res.agreement},
            {"m_S", res.m_S},
            {"degenerate", res.degenerate},
            {"epsilon", opt.epsilon},
            {"K", k_to_json(res.K)}};
  write_outputs(opt, res.Gamma, std::move(diag));
  return 0;
}

int run_check(const Options& opt) {
  engel::SampledCurve curve =
      engel::io::curve_from_csv(engel::io::read_file(opt.input));
  json diag{{"subcommand", "check"},
            {"schema", "check_diagnostics"},
            {"rows", curve.times.size()},
            {"horizontality_residual", engel::horizontality_residual(curve)}};
  engel::io::write_file_atomic(opt.output, diag.dump(2) + "\n");
  return 0;
}

int run_probe(const Options& opt) {
  engel::io::ProbeInput p = engel::io::parse_probe(engel::io::load_json(opt.input));
  engel::ObstructionReport rep = engel::x2_obstruction_probe(
      p.b, p.trials, static_cast<std::uint64_t>(opt.seed));
  json diag{{"subcommand", "probe"},
            {"schema", "probe_diagnostics"},
            {"b", p.b},
            {"trials", rep.trials},
            {"violations", rep.violations},
            {"min_abs_gamma4", rep.min_abs_gamma4},
            {"seed", opt.seed}};
  engel::io::write_file_atomic(opt.output, diag.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Horizontal-curve toolkit for the Engel group"};
  app.require_subcommand(1);
  const std::vector<std::string> names = {"lift", "steer", "extend",
                                          "lusin", "check", "probe"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", opt.input)->required();
    sub->add_option("--output", opt.output)->required();
    sub->add_option("--tol", opt.tol);
    sub->add_option("--grid", opt.grid)->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed);
    sub->add_option("--tau-dir", opt.tau_dir);
    sub->add_option("--epsilon", opt.epsilon);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  opt.subcommand = app.get_subcommands().front()->get_name();
  if (const char* env_seed = std::getenv("ENGELSTEER_SEED")) {
    try {
      opt.seed = std::stoll(env_seed);
    } catch (const std::exception&) {
      std::fprintf(stderr, "{\"error\":{\"code\":\"PARSE_ERROR\",\"message\":\"invalid ENGELSTEER_SEED\"}}\n");
      return 1;
    }
  }

  try {
    if (opt.subcommand == "lift") return run_lift(opt);
    if (opt.subcommand == "steer") return run_steer(opt);
    if (opt.subcommand == "extend") return run_extend(opt);
    if (opt.subcommand == "lusin") return run_lusin(opt);
    if (opt.subcommand == "check") return run_check(opt);
    if (opt.subcommand == "probe") return run_probe(opt);
    return 1;
  } catch (const engel::Error& e) {
    json err{{"error", {{"code", engel::to_string(e.code())}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return e.code() == engel::ErrorCode::ParseError ? 1 : 2;
  } catch (const std::exception& e) {
    json err{{"error", {{"code", "INTERNAL"}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  }
}
