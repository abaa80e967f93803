#include "jxlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jxlab {

namespace {

using Index = std::ptrdiff_t;

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

void require_linear(const ModelParams& p, const char* what) {
  if (!p.is_linear())
    throw std::domain_error(std::string(what) + ": only defined for the linear flux");
}

void require_matching(const Grid& grid, const HyperbolicState& w, const LimitState& wbar) {
  const std::size_t n = grid.size();
  if (w.u.size() != n || w.v.size() != n || wbar.ubar.size() != n || wbar.vbar.size() != n)
    throw std::invalid_argument("states do not match the grid");
}

struct Differences {
  CellField du;
  CellField dv;
};

Differences differences(const HyperbolicState& w, const LimitState& wbar) {
  Differences d{CellField(w.u.size()), CellField(w.v.size())};
  for (std::size_t i = 0; i < w.u.size(); ++i) {
    d.du[i] = w.u[i] - wbar.ubar[i];
    d.dv[i] = w.v[i] - wbar.vbar[i];
  }
  return d;
}

double sum_sq_weighted(std::span<const double> f, double dx) {
  double s = 0.0;
  for (double x : f) s += dx * x * x;
  return s;
}

// sum over interior interfaces of dx * ((f_{i+1} - f_i)/dx)^2; the ghost
// interfaces contribute nothing under the zero-gradient closure.
double gradient_sq(std::span<const double> f, double dx) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double g = (f[i + 1] - f[i]) / dx;
    s += dx * g * g;
  }
  return s;
}

}  // namespace

double cell_relative_entropy(const ModelParams& p, StatePoint w, StatePoint wbar) {
  return relative_entropy(p, w, wbar);
}

double phi_total(const ModelParams& p, const Grid& grid, const HyperbolicState& w,
                 const LimitState& wbar) {
  require_matching(grid, w, wbar);
  double phi = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    phi += grid.dx() *
           cell_relative_entropy(p, {w.u[i], w.v[i]}, {wbar.ubar[i], wbar.vbar[i]});
  return phi;
}

double discrete_re_flux(const ModelParams& p, StatePoint w_i, StatePoint w_ip1,
                        StatePoint wbar_i, StatePoint wbar_ip1) {
  require_linear(p, "discrete_re_flux");
  const double l2 = p.lambda * p.lambda;
  const double e2 = p.eps * p.eps;
  const double du0 = w_i.u - wbar_i.u, dv0 = w_i.v - wbar_i.v;
  const double du1 = w_ip1.u - wbar_ip1.u, dv1 = w_ip1.v - wbar_ip1.v;
  return -0.5 * e2 * p.a * dv0 * dv1 - 0.5 * l2 * p.a * du0 * du1 +
         0.5 * l2 * (du0 * dv1 + du1 * dv0);
}

CellField second_difference(const Grid& grid, std::span<const double> f) {
  const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
  const auto n = static_cast<Index>(f.size());
  CellField out(f.size());
  for (Index i = 0; i < n; ++i)
    out[at(i)] = (ghosted(f, i + 1) - 2.0 * f[at(i)] + ghosted(f, i - 1)) * inv_dx2;
  return out;
}

Residuals residuals(const ModelParams& p, const Grid& grid, const HyperbolicState& w,
                    const LimitState& wbar) {
  require_linear(p, "residuals");
  require_matching(grid, w, wbar);
  const Differences d = differences(w, wbar);
  const CellField d2u = second_difference(grid, d.du);
  const CellField d2v = second_difference(grid, d.dv);
  const CellField d2vbar = second_difference(grid, wbar.vbar);

  const double dx = grid.dx();
  const double l = p.lambda;
  const double e2 = p.eps * p.eps;
  const double c1 = 0.5 * l * l * l * dx;
  const double c2 = 0.5 * e2 * l * dx;
  const double c4 = -0.5 * e2 * p.a * l * dx;

  const std::size_t n = grid.size();
  Residuals r{CellField(n), CellField(n), CellField(n), CellField(n)};
  for (std::size_t i = 0; i < n; ++i) {
    r.r1[i] = c1 * d.du[i] * d2u[i];
    r.r2[i] = c2 * d.dv[i] * d2v[i];
    r.r3[i] = c2 * (d.dv[i] - p.a * d.du[i]) * d2vbar[i];
    r.r4[i] = c4 * (d.dv[i] * d2u[i] + d.du[i] * d2v[i]);
  }
  return r;
}

EntropyBudget identity_mismatch(const ModelParams& p, const Grid& grid,
                                const HyperbolicState& w, const LimitState& wbar,
                                const ResidualFn& residual_fn) {
  require_linear(p, "identity_mismatch");
  require_matching(grid, w, wbar);
  const Rhs hyp = semi_discrete_rhs(p, grid, w);
  const Rhs lim = limit_semi_discrete_rhs(p, grid, wbar);
  const Differences d = differences(w, wbar);

  const std::size_t n = grid.size();
  const auto ni = static_cast<Index>(n);
  const double dx = grid.dx();
  const double l2 = p.lambda * p.lambda;
  const double e2 = p.eps * p.eps;

  EntropyBudget b;
  b.res = residual_fn ? residual_fn(p, grid, w, wbar) : residuals(p, grid, w, wbar);
  b.rel_entropy.resize(n);
  b.flux.resize(n + 1);
  b.dissipation.resize(n);
  b.forcing.resize(n);
  b.entropy_rate.resize(n);
  b.mismatch.resize(n);
  b.term_scale.resize(n);

  for (Index k = 0; k <= ni; ++k) {
    const StatePoint wl{ghosted(w.u, k - 1), ghosted(w.v, k - 1)};
    const StatePoint wr{ghosted(w.u, k), ghosted(w.v, k)};
    const StatePoint bl{ghosted(wbar.ubar, k - 1), ghosted(wbar.vbar, k - 1)};
    const StatePoint br{ghosted(wbar.ubar, k), ghosted(wbar.vbar, k)};
    b.flux[at(k)] = discrete_re_flux(p, wl, wr, bl, br);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double du = d.du[i], dv = d.dv[i];
    const double rate_du = hyp.du[i] - lim.du[i];
    const double rate_dv = hyp.dv[i] - lim.dv[i];
    const double part_u = (l2 * du - e2 * p.a * dv) * rate_du;
    const double part_v = (e2 * dv - e2 * p.a * du) * rate_dv;
    const double gap = p.a * du - dv;

    b.rel_entropy[i] = cell_relative_entropy(p, {w.u[i], w.v[i]}, {wbar.ubar[i], wbar.vbar[i]});
    b.entropy_rate[i] = part_u + part_v;
    b.dissipation[i] = -gap * gap;
    b.forcing[i] = e2 * gap * lim.dv[i];

    const double divergence = (b.flux[i + 1] - b.flux[i]) / dx;
    const double rsum = b.res.r1[i] + b.res.r2[i] + b.res.r3[i] + b.res.r4[i];
    const double lhs = b.entropy_rate[i] + divergence;
    const double rhs = b.dissipation[i] + b.forcing[i] + rsum;
    b.mismatch[i] = lhs - rhs;

    const double scale = std::max({std::abs(part_u), std::abs(part_v),
                                   std::abs(b.flux[i + 1] / dx), std::abs(b.flux[i] / dx),
                                   std::abs(b.dissipation[i]), std::abs(b.forcing[i]),
                                   std::abs(b.res.r1[i]), std::abs(b.res.r2[i]),
                                   std::abs(b.res.r3[i]), std::abs(b.res.r4[i])});
    b.term_scale[i] = scale;
    b.max_mismatch = std::max(b.max_mismatch, std::abs(b.mismatch[i]));
    b.max_relative_mismatch =
        std::max(b.max_relative_mismatch, std::abs(b.mismatch[i]) / (1.0 + scale));
  }
  return b;
}

void ResidualIntegrals::accumulate(const ModelParams& p, const Grid& grid,
                                   const HyperbolicState& w, const LimitState& wbar,
                                   double dt) {
  const Residuals r = residuals(p, grid, w, wbar);
  const Differences d = differences(w, wbar);
  const double dx = grid.dx();
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s1 += dx * r.r1[i];
    s2 += dx * r.r2[i];
    s3 += dx * r.r3[i];
    s4 += dx * r.r4[i];
    const double g = d.dv[i] - p.a * d.du[i];
    gap += dx * g * g;
  }
  r1 += dt * s1;
  r2 += dt * s2;
  r3 += dt * s3;
  r4 += dt * s4;
  gap_sq += dt * gap;
  dx_du_sq += dt * gradient_sq(d.du, dx);
  dx_dv_sq += dt * gradient_sq(d.dv, dx);
  dxx_vbar_sq += dt * sum_sq_weighted(second_difference(grid, wbar.vbar), dx);
  t += dt;
}

bool ResidualReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

ResidualReport residual_sign_checks(const ModelParams& p, const Grid& grid,
                                    const ResidualIntegrals& in) {
  require_linear(p, "residual_sign_checks");
  constexpr double equality_tol = 1e-12;
  // Inequalities are compared with a rounding allowance proportional to the
  // magnitudes of the summed terms.
  constexpr double rounding = 1e-12;
  constexpr double theta = 0.5;

  const double dx = grid.dx();
  const double l = p.lambda;
  const double e2 = p.eps * p.eps;

  auto equality = [&](std::string name, double lhs, double rhs) {
    EstimateCheck c{std::move(name), lhs, rhs, true, false, lhs - rhs};
    c.passed = std::abs(lhs - rhs) <= equality_tol * std::max(std::abs(lhs), std::abs(rhs));
    return c;
  };
  auto inequality = [&](std::string name, double lhs, double rhs, double scale) {
    EstimateCheck c{std::move(name), lhs, rhs, false, false, lhs - rhs};
    c.passed = lhs <= rhs + rounding * scale;
    return c;
  };

  ResidualReport rep;
  rep.checks.push_back(equality("estimR1", in.r1, -0.5 * l * l * l * dx * in.dx_du_sq));
  rep.checks.push_back(equality("estimR2", in.r2, -0.5 * e2 * l * dx * in.dx_dv_sq));
  const double r3_bound =
      e2 * e2 * l * l / (8.0 * theta) * dx * dx * in.dxx_vbar_sq + 0.5 * theta * in.gap_sq;
  rep.checks.push_back(
      inequality("estimR3", in.r3, r3_bound, std::abs(in.r3) + std::abs(r3_bound)));
  const double r4_bound = 0.5 * l * l * l * dx * in.dx_du_sq + 0.5 * l * e2 * dx * in.dx_dv_sq;
  rep.checks.push_back(
      inequality("estimR4", in.r4, r4_bound, std::abs(in.r4) + std::abs(r4_bound)));
  rep.checks.push_back(inequality("sum_R1_R2_R4", in.r1 + in.r2 + in.r4, 0.0,
                                  std::abs(in.r1) + std::abs(in.r2) + std::abs(in.r4)));
  return rep;
}

double l2_error_spacetime(const Grid& grid, const Trajectory& trajectory) {
  double total = 0.0;
  for (std::size_t n = 0; n + 1 < trajectory.size(); ++n) {
    const auto& s = trajectory[n];
    require_matching(grid, s.hyperbolic, s.limit);
    const double dt = trajectory[n + 1].hyperbolic.t - s.hyperbolic.t;
    double level = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double du = s.hyperbolic.u[i] - s.limit.ubar[i];
      const double dv = s.hyperbolic.v[i] - s.limit.vbar[i];
      level += grid.dx() * (du * du + dv * dv);
    }
    total += dt * level;
  }
  return total;
}

void ErrorSeries::record(const ModelParams& p, const Grid& grid, const HyperbolicState& w,
                         const LimitState& wbar, double dt) {
  require_matching(grid, w, wbar);
  t.push_back(w.t);
  phi.push_back(p.is_linear() ? phi_total(p, grid, w, wbar)
                              : std::numeric_limits<double>::quiet_NaN());
  l2err_sq.push_back(run_l2_);
  k_dvbar_sq.push_back(run_dvbar_);
  k_dxxvbar_sq.push_back(run_dxx_);

  const double dx = grid.dx();
  double level = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double du = w.u[i] - wbar.ubar[i];
    const double dv = w.v[i] - wbar.vbar[i];
    level += dx * (du * du + dv * dv);
  }
  const Rhs rates = limit_semi_discrete_rhs(p, grid, wbar);
  run_l2_ += dt * level;
  run_dvbar_ += dt * sum_sq_weighted(rates.dv, dx);
  run_dxx_ += dt * sum_sq_weighted(second_difference(grid, wbar.vbar), dx);
}

TheoremCheck theorem_bound_check(const ModelParams& p, const Grid& grid,
                                 const ErrorSeries& series) {
  require_linear(p, "theorem_bound_check");
  if (series.size() == 0) throw std::invalid_argument("theorem_bound_check: empty series");
  TheoremCheck c;
  c.phi0 = series.phi.front();
  c.sup_phi = *std::max_element(series.phi.begin(), series.phi.end());
  const double dx = grid.dx();
  c.b_meas = series.k_dvbar_sq.back() +
             0.25 * p.lambda * p.lambda * dx * dx * series.k_dxxvbar_sq.back();
  const double e4 = std::pow(p.eps, 4);
  c.bound = c.phi0 + c.b_meas * e4;
  c.margin = c.bound - c.sup_phi;
  c.satisfied = c.sup_phi <= c.bound * (1.0 + 1e-8);
  return c;
}

CellField entropy_budget(const ModelParams& p, const Grid& grid, const HyperbolicState& w) {
  require_linear(p, "entropy_budget");
  const Rhs rates = semi_discrete_rhs(p, grid, w);
  const auto n = static_cast<Index>(grid.size());
  const double inv2dx = 1.0 / (2.0 * grid.dx());
  CellField budget(grid.size());
  for (Index i = 0; i < n; ++i) {
    const double u = w.u[at(i)], v = w.v[at(i)];
    const StatePoint grad = entropy_gradient(p, u, v);
    const double fr = entropy_flux(p, ghosted(w.u, i + 1), ghosted(w.v, i + 1));
    const double fl = entropy_flux(p, ghosted(w.u, i - 1), ghosted(w.v, i - 1));
    const double relax = p.a * u - v;
    budget[at(i)] = grad.u * rates.du[at(i)] + grad.v * rates.dv[at(i)] + (fr - fl) * inv2dx +
                    relax * relax;
  }
  return budget;
}

EntropyInequalityReport entropy_inequality_check(const ModelParams& p, const Grid& grid,
                                                 const std::vector<HyperbolicState>& states,
                                                 double boundary_band) {
  if (!(boundary_band >= 0.0 && boundary_band < 0.5))
    throw std::invalid_argument("entropy_inequality_check: boundary_band must lie in [0, 0.5)");
  EntropyInequalityReport rep;
  rep.dx = grid.dx();
  rep.max_budget = -std::numeric_limits<double>::infinity();
  rep.min_budget = std::numeric_limits<double>::infinity();
  const double width = grid.x_max() - grid.x_min();
  const double lo = grid.x_min() + boundary_band * width;
  const double hi = grid.x_max() - boundary_band * width;
  for (const auto& s : states) {
    const CellField budget = entropy_budget(p, grid, s);
    for (std::size_t i = 0; i < budget.size(); ++i) {
      const double x = grid.center(i);
      if (x < lo || x > hi) continue;
      const double b = budget[i];
      rep.max_budget = std::max(rep.max_budget, b);
      rep.min_budget = std::min(rep.min_budget, b);
      rep.max_positive = std::max(rep.max_positive, b);
    }
  }
  return rep;
}

}  // namespace jxlab
