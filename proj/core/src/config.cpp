#include "jxlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace jxlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) +
                    " (expected " + expected + ")");
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) bad_value(key, value, "a number");
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "a non-negative integer");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "true|false");
}

}  // namespace

std::string_view to_string(SchemeKind kind) {
  return kind == SchemeKind::Jpt ? "jpt" : "semi-discrete";
}

std::string_view to_string(GridRule rule) {
  return rule == GridRule::Scaled ? "scaled" : "fixed";
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = {
      "eps",     "lambda",  "a",       "flux",          "n_cells", "x_min",
      "x_max",   "cfl",     "t_final", "u_left",        "u_right", "well_prepared",
      "scheme",  "record_every", "grid_rule"};
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  auto& p = cfg.params;
  if (key == "eps") {
    p.eps = parse_double(key, value);
  } else if (key == "lambda") {
    p.lambda = parse_double(key, value);
  } else if (key == "a") {
    p.a = parse_double(key, value);
  } else if (key == "flux") {
    try {
      p.flux = flux_kind_from_string(value);
    } catch (const std::invalid_argument&) {
      bad_value(key, value, "linear|burgers");
    }
  } else if (key == "n_cells") {
    cfg.n_cells = parse_count(key, value);
  } else if (key == "x_min") {
    cfg.x_min = parse_double(key, value);
  } else if (key == "x_max") {
    cfg.x_max = parse_double(key, value);
  } else if (key == "cfl") {
    p.cfl = parse_double(key, value);
  } else if (key == "t_final") {
    p.t_final = parse_double(key, value);
  } else if (key == "u_left") {
    cfg.u_left = parse_double(key, value);
  } else if (key == "u_right") {
    cfg.u_right = parse_double(key, value);
  } else if (key == "well_prepared") {
    cfg.well_prepared = parse_bool(key, value);
  } else if (key == "scheme") {
    if (value == "jpt")
      cfg.scheme = SchemeKind::Jpt;
    else if (value == "semi-discrete")
      cfg.scheme = SchemeKind::SemiDiscrete;
    else
      bad_value(key, value, "jpt|semi-discrete");
  } else if (key == "record_every") {
    cfg.record_every = parse_count(key, value);
  } else if (key == "grid_rule") {
    if (value == "scaled")
      cfg.grid_rule = GridRule::Scaled;
    else if (value == "fixed")
      cfg.grid_rule = GridRule::Fixed;
    else
      bad_value(key, value, "scaled|fixed");
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

RunConfig parse_config_text(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    try {
      apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str(), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << std::setprecision(17);
  const auto& p = cfg.params;
  out << "eps = " << p.eps << '\n'
      << "lambda = " << p.lambda << '\n'
      << "a = " << p.a << '\n'
      << "flux = " << to_string(p.flux) << '\n'
      << "n_cells = " << cfg.n_cells << '\n'
      << "x_min = " << cfg.x_min << '\n'
      << "x_max = " << cfg.x_max << '\n'
      << "cfl = " << p.cfl << '\n'
      << "t_final = " << p.t_final << '\n'
      << "u_left = " << cfg.u_left << '\n'
      << "u_right = " << cfg.u_right << '\n'
      << "well_prepared = " << (cfg.well_prepared ? "true" : "false") << '\n'
      << "scheme = " << to_string(cfg.scheme) << '\n'
      << "record_every = " << cfg.record_every << '\n'
      << "grid_rule = " << to_string(cfg.grid_rule) << '\n';
  return out.str();
}

void validate(const RunConfig& cfg) {
  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.n_cells < 3) throw ConfigError("n_cells must be at least 3");
  if (!(cfg.x_max > cfg.x_min)) throw ConfigError("x_max must exceed x_min");
  const double umax = std::max(std::abs(cfg.u_left), std::abs(cfg.u_right));
  if (!check_subcharacteristic(cfg.params, umax)) {
    std::ostringstream msg;
    msg << "subcharacteristic condition violated: lambda=" << cfg.params.lambda
        << " must exceed eps*" << (cfg.params.is_linear() ? "|a|" : "max|u|") << "="
        << cfg.params.eps * (cfg.params.is_linear() ? std::abs(cfg.params.a) : umax);
    throw ConfigError(msg.str());
  }
}

}  // namespace jxlab
