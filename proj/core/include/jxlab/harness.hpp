#pragma once

// Paired simulations (relaxation system vs. limit system), eps sweeps with a
// log-log rate fit, and the CSV outputs.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "jxlab/config.hpp"
#include "jxlab/diagnostics.hpp"
#include "jxlab/schemes.hpp"

namespace jxlab {

class IOError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True when a wave of speed lambda can reach the nearer boundary from the
/// midpoint jump before t_final.
bool boundary_warning(const RunConfig& cfg);

/// Identity and residual bookkeeping for semi-discrete runs with linear flux.
struct BudgetSummary {
  double max_identity_mismatch = 0.0;  // relative, over all time levels
  ResidualIntegrals integrals;
  ResidualReport final_report;
  bool residual_checks_every_level = true;
  std::optional<std::size_t> first_failing_level;
};

struct ProfileSnapshot {
  std::size_t step = 0;
  SolutionPair pair;
};

struct RunResult {
  RunConfig config;
  Grid grid;
  StepSize step;
  InitialStates initial;
  SolutionPair final_pair;
  ErrorSeries series;  // one entry per time level
  std::vector<ProfileSnapshot> snapshots;
  std::optional<BudgetSummary> budget;
  bool boundary_warning = false;

  double l2err_sq() const { return series.l2err_sq.back(); }
};

/// Validates cfg, then advances the relaxation and limit solutions from the
/// Riemann data with a common step (stable_dt for the splitting scheme,
/// semi_discrete_dt for RK4).
RunResult run_pair(const RunConfig& cfg);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least squares on (log eps, log error). Needs >= 2 points, all positive.
RateFit fit_rate(std::span<const double> eps, std::span<const double> errors);

struct StudyFailure {
  double eps = 0.0;
  std::string message;
};

struct StudyResult {
  std::vector<double> epsilons;  // strictly decreasing, successful runs only
  std::vector<std::size_t> n_cells;
  std::vector<double> errors;    // squared space-time L2 errors
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<StudyFailure> failures;
};

/// Cell count used for eps under the config's grid rule.
std::size_t study_cells(const RunConfig& base, double eps);

struct StudyOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Runs run_pair for every eps (independently, possibly concurrently) and
/// fits the rate. Per-eps failures are recorded and skipped.
StudyResult convergence_study(const RunConfig& base, std::vector<double> epsilons,
                              const StudyOptions& options = {});

/// Random smooth state pair: each of u, v, ubar is a constant plus three
/// cosine modes with random amplitudes and phases; vbar is the closure of ubar.
SolutionPair random_smooth_pair(const ModelParams& p, const Grid& grid, std::mt19937_64& rng);

struct IdentitySweep {
  std::size_t pairs = 0;
  double max_relative_mismatch = 0.0;
};

/// Largest relative mismatch of the discrete entropy law over `pairs` random
/// smooth state pairs drawn from a generator seeded with `seed`.
IdentitySweep identity_sweep(const ModelParams& p, const Grid& grid, std::size_t pairs,
                             std::uint64_t seed, const ResidualFn& residual_fn = {});

struct EntropyRefinement {
  EntropyInequalityReport coarse;  // n_cells
  EntropyInequalityReport fine;    // 2 n_cells
  /// fine.slope_constant() / coarse.slope_constant(); 1 means the positive
  /// part halves with dx. Zero when both positive parts vanish.
  double ratio = 0.0;
};

/// Entropy budget along the semi-discrete flow from smooth_initial(1.5, 0.5)
/// on cfg's grid and on the grid refined once.
EntropyRefinement entropy_refinement(const RunConfig& cfg);

// Output files. All numbers use 17 significant digits.

/// Header `x,u,v,ubar,vbar`, one row per cell.
void write_profile(const std::filesystem::path& path, const Grid& grid, const SolutionPair& pair);

/// Header `t,phi,l2err_sq,k_dvbar_sq,k_dxxvbar_sq`; every stride-th level
/// plus the last (stride 0 keeps the first and last).
void write_series(const std::filesystem::path& path, const ErrorSeries& series,
                  std::size_t stride);

/// Header `eps,n_cells,l2err_sq`, then `# slope=` and `# intercept=` footers.
void write_study(const std::filesystem::path& path, const StudyResult& study);

/// Writes profile_<step>.csv for every snapshot and series.csv into out_dir.
std::vector<std::filesystem::path> write_outputs(const RunResult& run,
                                                 const std::filesystem::path& out_dir);

}  // namespace jxlab
