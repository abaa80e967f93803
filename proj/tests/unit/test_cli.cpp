#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "cli.hpp"

using namespace jxlab;
using namespace jxlab::cli;

namespace {

Command parse(std::vector<std::string> args) {
  ParseResult r = parse_args(args);
  REQUIRE(std::holds_alternative<Command>(r));
  return std::get<Command>(std::move(r));
}

std::string usage_error(std::vector<std::string> args) {
  try {
    parse_args(args);
  } catch (const UsageError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  const char* root = std::getenv("JXLAB_TEST_TMP");
  const auto dir = (root ? std::filesystem::path(root) : std::filesystem::temp_directory_path()) /
                   ("cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("run with the linear configuration flags") {
  const Command c =
      parse({"run", "--eps", "1", "--lambda", "0.72", "--a", "0.5", "--nx", "200", "--cfl", "0.95",
             "--tfinal", "0.1"});
  const auto& run = std::get<RunCommand>(c);
  CHECK(format_config(run.config) == format_config(RunConfig{}));
}

TEST_CASE("aliases and canonical names are interchangeable") {
  const auto a = std::get<RunCommand>(parse({"run", "--nx", "64", "--tfinal", "0.2"}));
  const auto b = std::get<RunCommand>(parse({"run", "--n_cells", "64", "--t_final", "0.2"}));
  CHECK(format_config(a.config) == format_config(b.config));
  CHECK(a.config.n_cells == 64);
}

TEST_CASE("study eps list") {
  const auto s = std::get<StudyCommand>(parse({"study", "--eps-list", "1e-1,5e-2,2.5e-2"}));
  CHECK(s.epsilons == std::vector<double>{1e-1, 5e-2, 2.5e-2});
  const auto d = std::get<StudyCommand>(parse({"study"}));
  CHECK(d.epsilons == default_epsilons());
  CHECK(d.epsilons.size() == 7);
  CHECK(usage_error({"study", "--eps-list", "0.1,-2"}).find("--eps-list") != std::string::npos);
}

TEST_CASE("invalid configurations are usage errors") {
  CHECK(usage_error({"run", "--lambda", "0.3", "--eps", "1", "--a", "0.5"})
            .find("subcharacteristic") != std::string::npos);
  CHECK(usage_error({"run", "--bogus", "1"}).find("--bogus") != std::string::npos);
  CHECK(usage_error({"run", "--eps", "x"}).find("--eps") != std::string::npos);
  CHECK(usage_error({"run", "--scheme", "rk2"}).find("--scheme") != std::string::npos);
  CHECK(usage_error({"verify", "--check", "nope"}).find("--check") != std::string::npos);
  CHECK(usage_error({"run", "--eps-list", "0.1"}).find("--eps-list") != std::string::npos);
  CHECK_FALSE(usage_error({}).empty());
  CHECK_FALSE(usage_error({"run", "study"}).empty());
}

TEST_CASE("config file merged under flag overrides") {
  const auto dir = scratch("config");
  const auto path = dir / "lab.cfg";
  std::ofstream(path) << "eps = 0.2\nn_cells = 80\nflux = linear\n";
  const auto r = std::get<RunCommand>(parse({"run", "--config", path.string(), "--nx", "120"}));
  CHECK(r.config.params.eps == 0.2);
  CHECK(r.config.n_cells == 120);

  std::ofstream(dir / "bad.cfg") << "epsilon = 0.2\n";
  CHECK(usage_error({"run", "--config", (dir / "bad.cfg").string()}).find("epsilon") !=
        std::string::npos);
  CHECK(usage_error({"run", "--config", (dir / "none.cfg").string()}).find("--config") !=
        std::string::npos);
}

TEST_CASE("verify check selection") {
  const auto all = std::get<VerifyCommand>(parse({"verify"}));
  CHECK(all.checks ==
        std::vector<Check>{Check::Identity, Check::Residuals, Check::Theorem, Check::EntropyIneq});
  const auto two = std::get<VerifyCommand>(parse({"verify", "--check", "theorem,identity"}));
  CHECK(two.checks == std::vector<Check>{Check::Identity, Check::Theorem});
  const auto rep = std::get<VerifyCommand>(
      parse({"verify", "--check", "identity", "--check", "identity"}));
  CHECK(rep.checks == std::vector<Check>{Check::Identity});
}

TEST_CASE("help lists every accepted flag") {
  const std::string help = help_text();
  const std::regex flag_re("--[a-z][a-z_-]*");
  std::set<std::string> in_help;
  for (auto it = std::sregex_iterator(help.begin(), help.end(), flag_re);
       it != std::sregex_iterator(); ++it)
    in_help.insert(it->str());

  const auto flags = accepted_flags();
  const std::set<std::string> accepted(flags.begin(), flags.end());
  CHECK(in_help == accepted);

  for (auto key : config_keys()) CHECK(accepted.count("--" + std::string(key)) == 1);
  for (const char* extra : {"--config", "--out-dir", "--eps-list", "--check", "--nx", "--tfinal"})
    CHECK(accepted.count(extra) == 1);

  CHECK(std::holds_alternative<HelpRequest>(parse_args({"--help"})));
  const ParseResult sub = parse_args({"study", "--help"});
  REQUIRE(std::holds_alternative<HelpRequest>(sub));
  CHECK(std::get<HelpRequest>(sub).text.find("--eps-list") != std::string::npos);
}

TEST_CASE("verify identity passes, and fails with a corrupted residual") {
  const Command cmd = parse({"verify", "--check", "identity", "--nx", "50"});
  std::ostringstream out, err;
  CHECK(execute(cmd, out, err) == 0);
  CHECK(out.str().rfind("PASS identity", 0) == 0);

  ExecuteOptions corrupt;
  corrupt.residual_fn = [](const ModelParams& p, const Grid& g, const HyperbolicState& w,
                           const LimitState& wb) {
    Residuals r = residuals(p, g, w, wb);
    for (double& x : r.r1) x *= 0.5;
    return r;
  };
  std::ostringstream out2, err2;
  CHECK(execute(cmd, out2, err2, corrupt) != 0);
  CHECK(out2.str().rfind("FAIL identity", 0) == 0);
}

TEST_CASE("verify reports every requested check") {
  const Command cmd = parse({"verify", "--eps", "0.1", "--nx", "100", "--well_prepared", "true"});
  std::ostringstream out, err;
  const int status = execute(cmd, out, err);
  INFO(out.str());
  CHECK(status == 0);
  for (const char* name : {"identity", "residuals", "theorem", "entropy-ineq"})
    CHECK(out.str().find(std::string("PASS ") + name) != std::string::npos);
}

TEST_CASE("verify of entropy checks with the Burgers flux fails cleanly") {
  const Command cmd =
      parse({"verify", "--flux", "burgers", "--lambda", "3", "--check", "residuals"});
  std::ostringstream out, err;
  CHECK(execute(cmd, out, err) == 1);
  CHECK(out.str().find("FAIL residuals") != std::string::npos);
}

TEST_CASE("run and study write their files") {
  const auto dir = scratch("outputs");
  std::ostringstream out, err;
  CHECK(execute(parse({"run", "--tfinal", "0.01", "--out-dir", dir.string()}), out, err) == 0);
  CHECK(std::filesystem::exists(dir / "series.csv"));
  CHECK(std::filesystem::exists(dir / "profile_00000000.csv"));

  CHECK(execute(parse({"study", "--eps-list", "0.1,0.05", "--tfinal", "0.01", "--out-dir",
                       dir.string()}),
                out, err) == 0);
  CHECK(std::filesystem::exists(dir / "study.csv"));
  CHECK(out.str().find("slope=") != std::string::npos);
}

TEST_CASE("runtime failures give exit status 1") {
  const auto dir = scratch("blocked");
  std::ofstream(dir / "file") << "x";
  std::ostringstream out, err;
  // out-dir below a regular file cannot be created
  CHECK(execute(parse({"run", "--tfinal", "0.01", "--out-dir", (dir / "file" / "sub").string()}),
                out, err) == 1);
  CHECK(err.str().find("error:") != std::string::npos);
}
