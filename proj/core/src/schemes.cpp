#include "jxlab/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jxlab {

namespace {

using Index = std::ptrdiff_t;

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

void require_finite(const HyperbolicState& s, const char* where) {
  if (!all_finite(s.u) || !all_finite(s.v))
    throw NumericalError(std::string(where) + ": non-finite value at t=" +
                         std::to_string(s.t));
}

void require_finite(const LimitState& s, const char* where) {
  if (!all_finite(s.ubar) || !all_finite(s.vbar))
    throw NumericalError(std::string(where) + ": non-finite value at t=" +
                         std::to_string(s.t));
}

void require_sizes(const Grid& grid, std::span<const double> a, std::span<const double> b) {
  if (a.size() != grid.size() || b.size() != grid.size())
    throw std::invalid_argument("state size does not match grid");
}

// dubar/dt of the limit system for a vbar assumed to satisfy the closure.
CellField limit_ubar_rate(const ModelParams& p, const Grid& grid, std::span<const double> ubar,
                          std::span<const double> vbar) {
  const double inv2dx = 1.0 / (2.0 * grid.dx());
  const double visc = p.lambda * inv2dx;
  const auto n = static_cast<Index>(ubar.size());
  CellField rate(ubar.size());
  for (Index i = 0; i < n; ++i) {
    const double c = ubar[at(i)];
    rate[at(i)] = -inv2dx * (ghosted(vbar, i + 1) - ghosted(vbar, i - 1)) +
                  visc * (ghosted(ubar, i + 1) - 2.0 * c + ghosted(ubar, i - 1));
  }
  return rate;
}

CellField closure_rate(const ModelParams& p, const Grid& grid, std::span<const double> ubar,
                       std::span<const double> dubar) {
  const double coef = p.lambda * p.lambda / (2.0 * grid.dx());
  const auto n = static_cast<Index>(ubar.size());
  CellField rate(ubar.size());
  for (Index i = 0; i < n; ++i)
    rate[at(i)] = p.df(ubar[at(i)]) * dubar[at(i)] -
                  coef * (ghosted(dubar, i + 1) - ghosted(dubar, i - 1));
  return rate;
}

Rhs hyperbolic_rhs(const ModelParams& p, const Grid& grid, std::span<const double> u,
                   std::span<const double> v) {
  const double inv2dx = 1.0 / (2.0 * grid.dx());
  const double visc = p.lambda * inv2dx;
  const double inv_e2 = 1.0 / (p.eps * p.eps);
  const double l2 = p.lambda * p.lambda;
  const auto n = static_cast<Index>(u.size());
  Rhs r{CellField(u.size()), CellField(u.size())};
  for (Index i = 0; i < n; ++i) {
    const double ul = ghosted(u, i - 1), uc = u[at(i)], ur = ghosted(u, i + 1);
    const double vl = ghosted(v, i - 1), vc = v[at(i)], vr = ghosted(v, i + 1);
    r.du[at(i)] = -inv2dx * (vr - vl) + visc * (ur - 2.0 * uc + ul);
    r.dv[at(i)] = -l2 * inv_e2 * inv2dx * (ur - ul) + visc * (vr - 2.0 * vc + vl) +
                  inv_e2 * (p.f(uc) - vc);
  }
  return r;
}

// y + h*k, elementwise.
CellField axpy(std::span<const double> y, double h, std::span<const double> k) {
  CellField out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
  return out;
}

}  // namespace

StepSize land_on_final_time(double dt_limit, double t_final) {
  if (!(dt_limit > 0.0) || !(t_final > 0.0))
    throw std::invalid_argument("step size and final time must be positive");
  // The small relative slack keeps an exact divisor from gaining a step.
  const double ratio = t_final / dt_limit;
  auto n = static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12)));
  n = std::max<std::size_t>(n, 1);
  return {t_final / static_cast<double>(n), n, dt_limit};
}

StepSize cfl_dt(const ModelParams& p, const Grid& grid) {
  return land_on_final_time(p.cfl * grid.dx() / (2.0 * p.lambda), p.t_final);
}

StepSize stable_dt(const ModelParams& p, const Grid& grid) {
  const double dx = grid.dx();
  const double hyperbolic = dx / (2.0 * p.lambda);
  const double parabolic = dx * dx / (p.lambda * p.lambda + p.lambda * dx);
  return land_on_final_time(p.cfl * std::min(hyperbolic, parabolic), p.t_final);
}

StepSize semi_discrete_dt(const ModelParams& p, const Grid& grid) {
  const StepSize base = stable_dt(p, grid);
  const double relax = 0.5 * p.eps * p.eps;
  const double waves = p.eps * grid.dx() / (2.0 * p.lambda);
  const double limit = std::min({base.dt_limit, p.cfl * relax, p.cfl * waves});
  return land_on_final_time(limit, p.t_final);
}

HllFlux hll_interface_flux(const ModelParams& p, StatePoint left, StatePoint right) {
  const double l = p.lambda;
  return {0.5 * (left.v + right.v) - 0.5 * l * (right.u - left.u),
          0.5 * l * l * (left.u + right.u) - 0.5 * l * (right.v - left.v)};
}

HyperbolicState hll_convection_step(const ModelParams& p, const Grid& grid,
                                    const HyperbolicState& state, double dt) {
  require_sizes(grid, state.u, state.v);
  const auto n = static_cast<Index>(grid.size());
  const double r = dt / grid.dx();

  // Interface k sits between cells k-1 and k, k = 0 .. n.
  std::vector<HllFlux> flux(grid.size() + 1);
  for (Index k = 0; k <= n; ++k) {
    const StatePoint left{ghosted(state.u, k - 1), ghosted(state.v, k - 1)};
    const StatePoint right{ghosted(state.u, k), ghosted(state.v, k)};
    flux[at(k)] = hll_interface_flux(p, left, right);
  }

  HyperbolicState out{CellField(grid.size()), CellField(grid.size()), state.t};
  for (Index i = 0; i < n; ++i) {
    out.u[at(i)] = state.u[at(i)] - r * (flux[at(i + 1)].fu - flux[at(i)].fu);
    out.v[at(i)] = state.v[at(i)] - r * (flux[at(i + 1)].fv - flux[at(i)].fv);
  }
  require_finite(out, "hll_convection_step");
  return out;
}

HyperbolicState relaxation_step(const ModelParams& p, const Grid& grid,
                                const HyperbolicState& half_state, double dt) {
  require_sizes(grid, half_state.u, half_state.v);
  const double e2 = p.eps * p.eps;
  // v + pull*(target - v) rather than keep*v + pull*target: keep + pull is not
  // exactly 1 in floating point, and equilibrium must be a fixed point.
  const double pull = dt / (e2 + dt);
  const CellField target = equilibrium_v(p, grid, half_state.u, 1.0 - e2);

  HyperbolicState out{half_state.u, CellField(grid.size()), half_state.t + dt};
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.v[i] = half_state.v[i] + pull * (target[i] - half_state.v[i]);
  require_finite(out, "relaxation_step");
  return out;
}

HyperbolicState jpt_step(const ModelParams& p, const Grid& grid, const HyperbolicState& state,
                         double dt) {
  return relaxation_step(p, grid, hll_convection_step(p, grid, state, dt), dt);
}

LimitState limit_step(const ModelParams& p, const Grid& grid, const LimitState& state,
                      double dt) {
  require_sizes(grid, state.ubar, state.vbar);
  const CellField rate = limit_ubar_rate(p, grid, state.ubar, state.vbar);
  LimitState out;
  out.ubar = axpy(state.ubar, dt, rate);
  out.vbar = equilibrium_v(p, grid, out.ubar);
  out.t = state.t + dt;
  require_finite(out, "limit_step");
  return out;
}

Rhs semi_discrete_rhs(const ModelParams& p, const Grid& grid, const HyperbolicState& state) {
  require_sizes(grid, state.u, state.v);
  if (!(p.eps > 0.0)) throw std::invalid_argument("semi_discrete_rhs requires eps > 0");
  return hyperbolic_rhs(p, grid, state.u, state.v);
}

Rhs limit_semi_discrete_rhs(const ModelParams& p, const Grid& grid, const LimitState& state) {
  require_sizes(grid, state.ubar, state.vbar);
  const CellField closure = equilibrium_v(p, grid, state.ubar);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(std::abs(closure[i] - state.vbar[i]) <= 1e-12))
      throw std::invalid_argument("limit state violates the algebraic closure at cell " +
                                  std::to_string(i));
  }
  Rhs r;
  r.du = limit_ubar_rate(p, grid, state.ubar, state.vbar);
  r.dv = closure_rate(p, grid, state.ubar, r.du);
  return r;
}

SolutionPair integrate_semi_discrete(const ModelParams& p, const Grid& grid,
                                     const SolutionPair& initial, const StepSize& step,
                                     const StepObserver& observer) {
  if (!(p.eps > 0.0)) throw std::invalid_argument("semi-discrete integration requires eps > 0");
  const auto& h0 = initial.hyperbolic;
  const auto& l0 = initial.limit;
  require_sizes(grid, h0.u, h0.v);
  require_sizes(grid, l0.ubar, l0.vbar);

  SolutionPair cur = initial;
  const double t0 = h0.t;
  const double dt = step.dt;
  if (observer) observer(0, cur);

  auto limit_rate = [&](std::span<const double> ub) {
    const CellField vb = equilibrium_v(p, grid, ub);
    return limit_ubar_rate(p, grid, ub, vb);
  };

  for (std::size_t n = 0; n < step.n_steps; ++n) {
    const CellField& u = cur.hyperbolic.u;
    const CellField& v = cur.hyperbolic.v;
    const CellField& ub = cur.limit.ubar;

    const Rhs k1 = hyperbolic_rhs(p, grid, u, v);
    const CellField q1 = limit_rate(ub);
    const Rhs k2 = hyperbolic_rhs(p, grid, axpy(u, 0.5 * dt, k1.du), axpy(v, 0.5 * dt, k1.dv));
    const CellField q2 = limit_rate(axpy(ub, 0.5 * dt, q1));
    const Rhs k3 = hyperbolic_rhs(p, grid, axpy(u, 0.5 * dt, k2.du), axpy(v, 0.5 * dt, k2.dv));
    const CellField q3 = limit_rate(axpy(ub, 0.5 * dt, q2));
    const Rhs k4 = hyperbolic_rhs(p, grid, axpy(u, dt, k3.du), axpy(v, dt, k3.dv));
    const CellField q4 = limit_rate(axpy(ub, dt, q3));

    SolutionPair next;
    next.hyperbolic.u.resize(grid.size());
    next.hyperbolic.v.resize(grid.size());
    next.limit.ubar.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      next.hyperbolic.u[i] =
          u[i] + dt / 6.0 * (k1.du[i] + 2.0 * k2.du[i] + 2.0 * k3.du[i] + k4.du[i]);
      next.hyperbolic.v[i] =
          v[i] + dt / 6.0 * (k1.dv[i] + 2.0 * k2.dv[i] + 2.0 * k3.dv[i] + k4.dv[i]);
      next.limit.ubar[i] = ub[i] + dt / 6.0 * (q1[i] + 2.0 * q2[i] + 2.0 * q3[i] + q4[i]);
    }
    next.limit.vbar = equilibrium_v(p, grid, next.limit.ubar);
    const double t = t0 + static_cast<double>(n + 1) * dt;
    next.hyperbolic.t = t;
    next.limit.t = t;
    require_finite(next.hyperbolic, "integrate_semi_discrete");
    require_finite(next.limit, "integrate_semi_discrete");
    cur = std::move(next);
    if (observer) observer(n + 1, cur);
  }
  return cur;
}

Trajectory integrate_semi_discrete(const ModelParams& p, const Grid& grid,
                                   const SolutionPair& initial, const StepSize& step) {
  Trajectory traj;
  traj.reserve(step.n_steps + 1);
  integrate_semi_discrete(p, grid, initial, step,
                          [&](std::size_t, const SolutionPair& s) { traj.push_back(s); });
  return traj;
}

}  // namespace jxlab
