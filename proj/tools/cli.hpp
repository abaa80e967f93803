#pragma once

// Argument parsing and dispatch for the `jxlab` executable. Kept out of
// main.cpp so tests can drive both halves directly.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "jxlab/config.hpp"
#include "jxlab/diagnostics.hpp"

namespace jxlab::cli {

/// Bad flags, bad values or an invalid resulting configuration (exit status 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Check { Identity, Residuals, Theorem, EntropyIneq };

std::string_view to_string(Check check);

struct RunCommand {
  RunConfig config;
};

struct StudyCommand {
  RunConfig config;
  std::vector<double> epsilons;
  unsigned threads = 0;
};

struct VerifyCommand {
  RunConfig config;
  std::vector<Check> checks;  // deduplicated, in canonical order
  std::uint64_t seed = 20240607;
  std::size_t identity_pairs = 100;
};

using Command = std::variant<RunCommand, StudyCommand, VerifyCommand>;

struct HelpRequest {
  std::string text;
};

using ParseResult = std::variant<Command, HelpRequest>;

/// The sweep used by `study` when --eps-list is absent.
const std::vector<double>& default_epsilons();

/// Parses arguments (without the program name). The config file named by
/// --config is read first and flags override it. Throws UsageError naming
/// the offending flag or key.
ParseResult parse_args(const std::vector<std::string>& args);

/// Help for the top level and every subcommand.
std::string help_text();

/// Every long flag accepted by parse_args, with leading dashes.
std::vector<std::string> accepted_flags();

struct ExecuteOptions {
  ResidualFn residual_fn;  // replaces the residual formula in the identity check
};

/// Runs the command. Returns 0 when everything succeeded and every requested
/// check passed, 1 otherwise.
int execute(const Command& cmd, std::ostream& out, std::ostream& err,
            const ExecuteOptions& options = {});

}  // namespace jxlab::cli
