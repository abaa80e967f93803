#include "jxlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

namespace jxlab {

namespace {

bool wants_snapshot(std::size_t step, std::size_t last, std::size_t stride) {
  return step == 0 || step == last || (stride > 0 && step % stride == 0);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IOError("cannot create directory '" + path.parent_path().string() +
                          "': " + ec.message());
  }
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw IOError("cannot open '" + path.string() + "' for writing");
  out << std::setprecision(17);
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IOError("write failed for '" + path.string() + "'");
}

}  // namespace

bool boundary_warning(const RunConfig& cfg) {
  const double mid = 0.5 * (cfg.x_min + cfg.x_max);
  const double distance = std::min(mid - cfg.x_min, cfg.x_max - mid);
  return cfg.params.lambda * cfg.params.t_final >= distance;
}

RunResult run_pair(const RunConfig& cfg) {
  validate(cfg);
  const ModelParams& p = cfg.params;
  const Grid grid = cfg.grid();
  const InitialStates init = riemann_initial(p, grid, cfg.u_left, cfg.u_right, cfg.well_prepared);

  RunResult res{cfg, grid, {}, init, {}, {}, {}, std::nullopt, boundary_warning(cfg)};
  const std::size_t stride = cfg.record_every;

  if (cfg.scheme == SchemeKind::Jpt) {
    res.step = stable_dt(p, grid);
    const std::size_t last = res.step.n_steps;
    const double dt = res.step.dt;
    SolutionPair cur{init.hyperbolic, init.limit};
    for (std::size_t n = 0;; ++n) {
      res.series.record(p, grid, cur.hyperbolic, cur.limit, dt);
      if (wants_snapshot(n, last, stride)) res.snapshots.push_back({n, cur});
      if (n == last) break;
      cur.hyperbolic = jpt_step(p, grid, cur.hyperbolic, dt);
      cur.limit = limit_step(p, grid, cur.limit, dt);
      // Accumulated t drifts by rounding; pin it to the step grid.
      cur.hyperbolic.t = cur.limit.t = static_cast<double>(n + 1) * dt;
    }
    res.final_pair = std::move(cur);
    return res;
  }

  res.step = semi_discrete_dt(p, grid);
  const std::size_t last = res.step.n_steps;
  const double dt = res.step.dt;
  const bool budgets = p.is_linear();
  if (budgets) res.budget.emplace();

  auto observe = [&](std::size_t n, const SolutionPair& s) {
    res.series.record(p, grid, s.hyperbolic, s.limit, dt);
    if (wants_snapshot(n, last, stride)) res.snapshots.push_back({n, s});
    if (!budgets) return;
    BudgetSummary& b = *res.budget;
    const EntropyBudget eb = identity_mismatch(p, grid, s.hyperbolic, s.limit);
    b.max_identity_mismatch = std::max(b.max_identity_mismatch, eb.max_relative_mismatch);
    // Integrals at level n cover [0, t_n); check them before adding level n.
    b.final_report = residual_sign_checks(p, grid, b.integrals);
    if (!b.final_report.all_passed() && b.residual_checks_every_level) {
      b.residual_checks_every_level = false;
      b.first_failing_level = n;
    }
    if (n < last) b.integrals.accumulate(p, grid, s.hyperbolic, s.limit, dt);
  };
  res.final_pair = integrate_semi_discrete(p, grid, {init.hyperbolic, init.limit}, res.step,
                                           observe);
  return res;
}

RateFit fit_rate(std::span<const double> eps, std::span<const double> errors) {
  if (eps.size() != errors.size()) throw std::invalid_argument("fit_rate: size mismatch");
  if (eps.size() < 2) throw std::invalid_argument("fit_rate: need at least two points");
  std::vector<double> x(eps.size()), y(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !(errors[i] > 0.0))
      throw std::invalid_argument("fit_rate: values must be positive");
    x[i] = std::log(eps[i]);
    y[i] = std::log(errors[i]);
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_rate: eps values must not all coincide");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

std::size_t study_cells(const RunConfig& base, double eps) {
  if (base.grid_rule == GridRule::Fixed) return base.n_cells;
  // The slack keeps L/eps = 250.00000000000003 from asking for 251 cells.
  const double ratio = (base.x_max - base.x_min) / eps;
  const auto needed = static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12)));
  return std::max(base.n_cells, needed);
}

StudyResult convergence_study(const RunConfig& base, std::vector<double> epsilons,
                              const StudyOptions& options) {
  if (epsilons.empty()) throw std::invalid_argument("convergence_study: empty eps list");
  for (double e : epsilons)
    if (!(e > 0.0)) throw std::invalid_argument("convergence_study: eps must be positive");
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  if (std::adjacent_find(epsilons.begin(), epsilons.end()) != epsilons.end())
    throw std::invalid_argument("convergence_study: duplicate eps values");

  struct Slot {
    std::size_t n_cells = 0;
    std::optional<double> error;
    std::string failure;
  };
  std::vector<Slot> slots(epsilons.size());

  auto run_one = [&](std::size_t k) {
    RunConfig cfg = base;
    cfg.params.eps = epsilons[k];
    cfg.n_cells = study_cells(base, epsilons[k]);
    slots[k].n_cells = cfg.n_cells;
    try {
      if (base.grid_rule == GridRule::Scaled) {
        const double dx = (cfg.x_max - cfg.x_min) / static_cast<double>(cfg.n_cells);
        if (dx > epsilons[k] * (1.0 + 1e-12)) throw std::logic_error("grid guard violated: dx > eps");
      }
      slots[k].error = run_pair(cfg).l2err_sq();
    } catch (const std::exception& e) {
      slots[k].failure = e.what();
    }
  };

  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(epsilons.size()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < epsilons.size(); k = next++) run_one(k);
      });
  }

  StudyResult out;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (slots[k].error && *slots[k].error > 0.0) {
      out.epsilons.push_back(epsilons[k]);
      out.n_cells.push_back(slots[k].n_cells);
      out.errors.push_back(*slots[k].error);
    } else {
      out.failures.push_back(
          {epsilons[k], slots[k].error ? "zero error (identical solutions)" : slots[k].failure});
    }
  }
  if (out.epsilons.size() >= 2) {
    const RateFit fit = fit_rate(out.epsilons, out.errors);
    out.slope = fit.slope;
    out.intercept = fit.intercept;
  } else {
    out.slope = out.intercept = std::nan("");
  }
  return out;
}

SolutionPair random_smooth_pair(const ModelParams& p, const Grid& grid, std::mt19937_64& rng) {
  constexpr double pi = 3.141592653589793238462643383279;
  std::uniform_real_distribution<double> level(-2.0, 2.0);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
  const double length = grid.x_max() - grid.x_min();
  auto field = [&] {
    CellField f(grid.size(), level(rng));
    for (int k = 1; k <= 3; ++k) {
      const double c = amp(rng) / k;
      const double ph = phase(rng);
      for (std::size_t i = 0; i < grid.size(); ++i)
        f[i] += c * std::cos(k * pi * (grid.center(i) - grid.x_min()) / length + ph);
    }
    return f;
  };
  SolutionPair pair;
  pair.hyperbolic.u = field();
  pair.hyperbolic.v = field();
  pair.limit.ubar = field();
  pair.limit.vbar = equilibrium_v(p, grid, pair.limit.ubar);
  return pair;
}

IdentitySweep identity_sweep(const ModelParams& p, const Grid& grid, std::size_t pairs,
                             std::uint64_t seed, const ResidualFn& residual_fn) {
  std::mt19937_64 rng(seed);
  IdentitySweep out{pairs, 0.0};
  for (std::size_t k = 0; k < pairs; ++k) {
    const SolutionPair s = random_smooth_pair(p, grid, rng);
    const EntropyBudget b = identity_mismatch(p, grid, s.hyperbolic, s.limit, residual_fn);
    out.max_relative_mismatch = std::max(out.max_relative_mismatch, b.max_relative_mismatch);
  }
  return out;
}

namespace {

EntropyInequalityReport smooth_budget(const ModelParams& p, const Grid& grid) {
  const InitialStates init = smooth_initial(p, grid, 1.5, 0.5);
  const StepSize step = semi_discrete_dt(p, grid);
  // Keep roughly 100 levels to bound memory on fine grids.
  const std::size_t stride = std::max<std::size_t>(1, step.n_steps / 100);
  std::vector<HyperbolicState> states;
  integrate_semi_discrete(p, grid, {init.hyperbolic, init.limit}, step,
                          [&](std::size_t n, const SolutionPair& s) {
                            if (n % stride == 0 || n == step.n_steps)
                              states.push_back(s.hyperbolic);
                          });
  return entropy_inequality_check(p, grid, states);
}

}  // namespace

EntropyRefinement entropy_refinement(const RunConfig& cfg) {
  validate(cfg);
  EntropyRefinement out;
  out.coarse = smooth_budget(cfg.params, cfg.grid());
  out.fine = smooth_budget(cfg.params, Grid(2 * cfg.n_cells, cfg.x_min, cfg.x_max));
  if (out.coarse.max_positive > 0.0)
    out.ratio = out.fine.slope_constant() / out.coarse.slope_constant();
  else if (out.fine.max_positive > 0.0)
    out.ratio = std::numeric_limits<double>::infinity();
  return out;
}

void write_profile(const std::filesystem::path& path, const Grid& grid, const SolutionPair& pair) {
  auto out = open_for_write(path);
  out << "x,u,v,ubar,vbar\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << grid.center(i) << ',' << pair.hyperbolic.u[i] << ',' << pair.hyperbolic.v[i] << ','
        << pair.limit.ubar[i] << ',' << pair.limit.vbar[i] << '\n';
  finish(out, path);
}

void write_series(const std::filesystem::path& path, const ErrorSeries& series,
                  std::size_t stride) {
  auto out = open_for_write(path);
  out << "t,phi,l2err_sq,k_dvbar_sq,k_dxxvbar_sq\n";
  const std::size_t n = series.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!wants_snapshot(k, n - 1, stride)) continue;
    out << series.t[k] << ',' << series.phi[k] << ',' << series.l2err_sq[k] << ','
        << series.k_dvbar_sq[k] << ',' << series.k_dxxvbar_sq[k] << '\n';
  }
  finish(out, path);
}

void write_study(const std::filesystem::path& path, const StudyResult& study) {
  auto out = open_for_write(path);
  out << "eps,n_cells,l2err_sq\n";
  for (std::size_t k = 0; k < study.epsilons.size(); ++k)
    out << study.epsilons[k] << ',' << study.n_cells[k] << ',' << study.errors[k] << '\n';
  out << "# slope=" << study.slope << '\n' << "# intercept=" << study.intercept << '\n';
  finish(out, path);
}

std::vector<std::filesystem::path> write_outputs(const RunResult& run,
                                                 const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& snap : run.snapshots) {
    char name[40];
    std::snprintf(name, sizeof name, "profile_%08zu.csv", snap.step);
    written.push_back(out_dir / name);
    write_profile(written.back(), run.grid, snap.pair);
  }
  written.push_back(out_dir / "series.csv");
  write_series(written.back(), run.series, run.config.record_every);
  return written;
}

}  // namespace jxlab
