#pragma once

// Run configuration and the flat `key = value` config-file format.

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jxlab/model.hpp"

namespace jxlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SchemeKind { Jpt, SemiDiscrete };

/// How a convergence study picks the grid for each eps.
enum class GridRule {
  Scaled,  // n_cells = max(n_cells, ceil((x_max - x_min)/eps)), so dx <= eps
  Fixed,   // n_cells as configured for every eps
};

std::string_view to_string(SchemeKind kind);
std::string_view to_string(GridRule rule);

struct RunConfig {
  ModelParams params;
  std::size_t n_cells = 200;
  double x_min = 0.0;
  double x_max = 1.0;
  double u_left = 2.0;
  double u_right = 1.0;
  bool well_prepared = false;
  SchemeKind scheme = SchemeKind::Jpt;
  /// Profile and series stride in steps; 0 keeps only the first and last level.
  std::size_t record_every = 0;
  GridRule grid_rule = GridRule::Scaled;
  std::filesystem::path out_dir = ".";

  Grid grid() const { return Grid(n_cells, x_min, x_max); }
};

/// Keys accepted in config files (and, one-to-one, as CLI flags).
const std::vector<std::string_view>& config_keys();

/// Sets one key from its textual value. Throws ConfigError naming the key for
/// unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines on top of base. '#' starts a comment.
RunConfig parse_config_text(std::string_view text, RunConfig base = {});

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Renders cfg in the config-file format (parse_config_text round-trips it).
std::string format_config(const RunConfig& cfg);

/// Throws ConfigError unless parameters, grid and the subcharacteristic
/// condition are valid.
void validate(const RunConfig& cfg);

}  // namespace jxlab
