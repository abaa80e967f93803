#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "jxlab/harness.hpp"

namespace jxlab::cli {

namespace {

// Pass thresholds of the verify checks.
constexpr double kIdentityTolerance = 1e-10;
// Allowed growth of C in budget <= C dx when dx is halved.
constexpr double kEntropySlopeGrowth = 1.1;

struct KeyHelp {
  std::string_view key;
  std::string_view alias;
  std::string_view text;
};

constexpr KeyHelp kKeyHelp[] = {
    {"eps", "", "relaxation parameter eps > 0"},
    {"lambda", "", "characteristic speed lambda > 0"},
    {"a", "", "advection speed of the linear flux"},
    {"flux", "", "linear | burgers"},
    {"n_cells", "nx", "number of cells"},
    {"x_min", "", "left end of the domain"},
    {"x_max", "", "right end of the domain"},
    {"cfl", "", "CFL number in (0, 1]"},
    {"t_final", "tfinal", "final time"},
    {"u_left", "", "Riemann state left of the midpoint"},
    {"u_right", "", "Riemann state right of the midpoint"},
    {"well_prepared", "", "start v on the discrete closure (true | false)"},
    {"scheme", "", "jpt | semi-discrete"},
    {"record_every", "", "profile/series stride in steps, 0 = first and last only"},
    {"grid_rule", "", "study grids: scaled (dx <= eps) | fixed"},
};

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"identity", "residuals", "theorem",
                                                 "entropy-ineq", "all"};
  return names;
}

struct KeyOption {
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

struct SubcommandState {
  CLI::App* app = nullptr;
  std::string config_path;
  std::vector<std::unique_ptr<KeyOption>> keys;
};

// Owns the CLI11 tree and the storage its options write into.
struct Parser {
  CLI::App app{"Jin-Xin relaxation lab: paired relaxation/limit runs, eps studies "
               "and relative-entropy checks.",
               "jxlab"};
  SubcommandState run, study, verify;
  std::string run_out = ".", study_out = ".";
  std::vector<double> epsilons;
  unsigned threads = 0;
  std::vector<std::string> checks = {"all"};
  std::uint64_t seed = VerifyCommand{}.seed;
  std::size_t pairs = VerifyCommand{}.identity_pairs;

  Parser() {
    app.require_subcommand(1);
    app.fallthrough(false);
    run.app = app.add_subcommand("run", "Advance the relaxation and limit systems side by side "
                                        "and write profile/series CSV files.");
    study.app = app.add_subcommand("study", "Sweep eps, write study.csv and fit the log-log "
                                            "slope of the squared L2 error.");
    verify.app = app.add_subcommand("verify", "Run the entropy checks and print PASS/FAIL "
                                              "per check.");
    for (SubcommandState* s : {&run, &study, &verify}) add_keys(*s);

    run.app->add_option("--out-dir", run_out, "directory for CSV outputs")->capture_default_str();
    study.app->add_option("--out-dir", study_out, "directory for study.csv")
        ->capture_default_str();
    study.app
        ->add_option("--eps-list", epsilons, "comma-separated eps values (default: 1e-1 ... 1.5e-3)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    study.app->add_option("--threads", threads, "worker threads, 0 = hardware concurrency")
        ->capture_default_str();
    verify.app->add_option("--check", checks, "identity | residuals | theorem | entropy-ineq | all")
        ->delimiter(',')
        ->check(CLI::IsMember(check_names()))
        ->capture_default_str();
    verify.app->add_option("--seed", seed, "seed for the random identity states")
        ->capture_default_str();
    verify.app->add_option("--pairs", pairs, "number of random identity state pairs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  void add_keys(SubcommandState& s) {
    s.app->add_option("--config", s.config_path, "config file of `key = value` lines")
        ->check(CLI::ExistingFile);
    for (const KeyHelp& k : kKeyHelp) {
      auto ko = std::make_unique<KeyOption>();
      ko->key = std::string(k.key);
      std::string names = "--" + ko->key;
      if (!k.alias.empty()) names += ",--" + std::string(k.alias);
      ko->option = s.app->add_option(names, ko->value, std::string(k.text));
      s.keys.push_back(std::move(ko));
    }
  }

  RunConfig config_for(const SubcommandState& s, std::string_view out_dir) const {
    RunConfig cfg;
    if (!s.config_path.empty()) {
      try {
        cfg = load_config_file(s.config_path);
      } catch (const ConfigError& e) {
        throw UsageError(std::string("--config: ") + e.what());
      }
    }
    for (const auto& ko : s.keys) {
      if (ko->option->count() == 0) continue;
      try {
        apply_setting(cfg, ko->key, ko->value);
      } catch (const ConfigError& e) {
        throw UsageError("--" + ko->key + ": " + e.what());
      }
    }
    cfg.out_dir = std::string(out_dir);
    try {
      validate(cfg);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }

  std::string full_help() const {
    std::string text = app.help();
    for (const SubcommandState* s : {&run, &study, &verify}) text += "\n" + s->app->help();
    return text;
  }
};

std::vector<Check> expand_checks(const std::vector<std::string>& names) {
  std::vector<Check> out;
  auto add = [&](Check c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  for (const auto& n : names) {
    if (n == "all") {
      for (Check c : {Check::Identity, Check::Residuals, Check::Theorem, Check::EntropyIneq})
        add(c);
    } else if (n == "identity") {
      add(Check::Identity);
    } else if (n == "residuals") {
      add(Check::Residuals);
    } else if (n == "theorem") {
      add(Check::Theorem);
    } else if (n == "entropy-ineq") {
      add(Check::EntropyIneq);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view to_string(Check check) {
  switch (check) {
    case Check::Identity: return "identity";
    case Check::Residuals: return "residuals";
    case Check::Theorem: return "theorem";
    case Check::EntropyIneq: return "entropy-ineq";
  }
  return "?";
}

const std::vector<double>& default_epsilons() {
  static const std::vector<double> eps = {1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3, 3.125e-3, 1.5e-3};
  return eps;
}

ParseResult parse_args(const std::vector<std::string>& args) {
  Parser parser;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    parser.app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    for (const SubcommandState* s : {&parser.run, &parser.study, &parser.verify})
      if (s->app->parsed()) return HelpRequest{s->app->help()};
    return HelpRequest{parser.full_help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (parser.run.app->parsed()) return Command{RunCommand{parser.config_for(parser.run, parser.run_out)}};
  if (parser.study.app->parsed()) {
    StudyCommand cmd{parser.config_for(parser.study, parser.study_out), parser.epsilons,
                     parser.threads};
    if (cmd.epsilons.empty()) cmd.epsilons = default_epsilons();
    return Command{std::move(cmd)};
  }
  VerifyCommand cmd{parser.config_for(parser.verify, "."), expand_checks(parser.checks),
                    parser.seed, parser.pairs};
  return Command{std::move(cmd)};
}

std::string help_text() { return Parser{}.full_help(); }

std::vector<std::string> accepted_flags() {
  Parser parser;
  std::vector<std::string> flags;
  auto collect = [&](const CLI::App& app) {
    for (const CLI::Option* opt : app.get_options())
      for (const auto& name : opt->get_lnames()) flags.push_back("--" + name);
  };
  collect(parser.app);
  for (const SubcommandState* s : {&parser.run, &parser.study, &parser.verify}) collect(*s->app);
  std::sort(flags.begin(), flags.end());
  flags.erase(std::unique(flags.begin(), flags.end()), flags.end());
  return flags;
}

namespace {

void print_config(std::ostream& out, const RunConfig& cfg) {
  const auto& p = cfg.params;
  out << "eps=" << p.eps << " lambda=" << p.lambda << " a=" << p.a << " flux=" << to_string(p.flux)
      << " n_cells=" << cfg.n_cells << " t_final=" << p.t_final << " scheme=" << to_string(cfg.scheme)
      << '\n';
}

int do_run(const RunCommand& cmd, std::ostream& out, std::ostream& err) {
  const RunResult r = run_pair(cmd.config);
  if (r.boundary_warning)
    err << "warning: lambda*t_final reaches the boundary; far-field states are not preserved\n";
  const auto files = write_outputs(r, cmd.config.out_dir);
  print_config(out, cmd.config);
  out << "steps=" << r.step.n_steps << " dt=" << r.step.dt << '\n';
  out << "l2err_sq=" << r.l2err_sq() << '\n';
  if (cmd.config.params.is_linear()) out << "phi(T)=" << r.series.phi.back() << '\n';
  if (r.budget)
    out << "identity mismatch (max relative)=" << r.budget->max_identity_mismatch << '\n';
  out << "wrote " << files.size() << " files to " << cmd.config.out_dir.string() << '\n';
  return 0;
}

int do_study(const StudyCommand& cmd, std::ostream& out, std::ostream& err) {
  const StudyResult s = convergence_study(cmd.config, cmd.epsilons, {cmd.threads});
  const auto path = cmd.config.out_dir / "study.csv";
  write_study(path, s);
  out << std::setw(12) << "eps" << std::setw(10) << "n_cells" << std::setw(24) << "l2err_sq\n";
  for (std::size_t k = 0; k < s.epsilons.size(); ++k)
    out << std::setw(12) << s.epsilons[k] << std::setw(10) << s.n_cells[k] << std::setw(24)
        << s.errors[k] << '\n';
  for (const auto& f : s.failures) err << "eps=" << f.eps << " failed: " << f.message << '\n';
  out << "slope=" << s.slope << " intercept=" << s.intercept << '\n';
  out << "wrote " << path.string() << '\n';
  return s.failures.empty() && std::isfinite(s.slope) ? 0 : 1;
}

void report(std::ostream& out, Check c, bool passed, const std::string& detail) {
  out << (passed ? "PASS " : "FAIL ") << to_string(c) << ": " << detail << '\n';
}

int do_verify(const VerifyCommand& cmd, std::ostream& out, std::ostream& err,
              const ExecuteOptions& options) {
  const RunConfig& cfg = cmd.config;
  std::optional<RunResult> semi;
  auto semi_run = [&]() -> const RunResult& {
    if (!semi) {
      RunConfig c = cfg;
      c.scheme = SchemeKind::SemiDiscrete;
      semi = run_pair(c);
    }
    return *semi;
  };

  bool all = true;
  for (Check c : cmd.checks) {
    std::ostringstream detail;
    detail << std::setprecision(6);
    bool passed = false;
    try {
      switch (c) {
        case Check::Identity: {
          const IdentitySweep sw = identity_sweep(cfg.params, cfg.grid(), cmd.identity_pairs,
                                                  cmd.seed, options.residual_fn);
          passed = sw.max_relative_mismatch <= kIdentityTolerance;
          detail << "max relative mismatch " << sw.max_relative_mismatch << " over " << sw.pairs
                 << " pairs (tol " << kIdentityTolerance << ")";
          break;
        }
        case Check::Residuals: {
          if (!cfg.params.is_linear()) throw std::domain_error("requires the linear flux");
          const BudgetSummary& b = *semi_run().budget;
          passed = b.residual_checks_every_level && b.final_report.all_passed();
          detail << (b.residual_checks_every_level ? "all levels"
                                                   : "first failure at level " +
                                                         std::to_string(*b.first_failing_level));
          for (const auto& e : b.final_report.checks)
            detail << "; " << e.name << (e.passed ? " ok" : " VIOLATED") << " (" << e.lhs
                   << (e.equality ? " = " : " <= ") << e.rhs << ")";
          break;
        }
        case Check::Theorem: {
          const RunResult& r = semi_run();
          const TheoremCheck t = theorem_bound_check(r.config.params, r.grid, r.series);
          passed = t.satisfied;
          detail << "sup phi " << t.sup_phi << " <= phi(0) " << t.phi0 << " + B " << t.b_meas
                 << " eps^4 = " << t.bound << " (margin " << t.margin << ")";
          break;
        }
        case Check::EntropyIneq: {
          const EntropyRefinement e = entropy_refinement(cfg);
          passed = e.ratio <= kEntropySlopeGrowth;
          detail << "C(dx) " << e.coarse.slope_constant() << ", C(dx/2) "
                 << e.fine.slope_constant() << ", ratio " << e.ratio << " (limit "
                 << kEntropySlopeGrowth << ")";
          break;
        }
      }
    } catch (const std::exception& e) {
      passed = false;
      detail.str("");
      detail << "error: " << e.what();
    }
    report(out, c, passed, detail.str());
    all = all && passed;
  }
  if (!all) err << "verify: at least one check failed\n";
  return all ? 0 : 1;
}

}  // namespace

int execute(const Command& cmd, std::ostream& out, std::ostream& err,
            const ExecuteOptions& options) {
  try {
    return std::visit(
        [&](const auto& c) -> int {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, RunCommand>)
            return do_run(c, out, err);
          else if constexpr (std::is_same_v<T, StudyCommand>)
            return do_study(c, out, err);
          else
            return do_verify(c, out, err, options);
        },
        cmd);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace jxlab::cli
