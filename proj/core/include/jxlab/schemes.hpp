#pragma once

// Time advancement for the relaxation system and its diffusive limit:
// the two-step splitting scheme (HLL convection + implicit relaxation), its
// eps -> 0 limit, and the semi-discrete (method of lines) systems advanced by
// classical RK4.

#include <cstddef>
#include <functional>
#include <vector>

#include "jxlab/model.hpp"

namespace jxlab {

struct StepSize {
  double dt = 0.0;       // step actually used, dt * n_steps == t_final
  std::size_t n_steps = 0;
  double dt_limit = 0.0;  // stability bound before landing on t_final
};

/// Shrinks dt_limit so that an integer number of steps lands exactly on t_final.
StepSize land_on_final_time(double dt_limit, double t_final);

/// Hyperbolic CFL step dt = cfl*dx/(2 lambda). Independent of eps.
StepSize cfl_dt(const ModelParams& p, const Grid& grid);

/// Step used by the harness for the splitting and limit schemes: the
/// hyperbolic CFL combined with the explicit-diffusion bound of the limit
/// scheme, cfl*dx^2/(lambda^2 + lambda dx). Independent of eps.
StepSize stable_dt(const ModelParams& p, const Grid& grid);

/// Step for RK4 on the semi-discrete systems; additionally resolves the
/// relaxation time eps^2 and the wave speed lambda/eps.
StepSize semi_discrete_dt(const ModelParams& p, const Grid& grid);

/// Interface fluxes of the HLL convection step (returned for inspection).
struct HllFlux {
  double fu = 0.0;
  double fv = 0.0;
};

HllFlux hll_interface_flux(const ModelParams& p, StatePoint left, StatePoint right);

/// Convection half step  w^{n+1/2} = w^n - dt/dx (F_{i+1/2} - F_{i-1/2}).
HyperbolicState hll_convection_step(const ModelParams& p, const Grid& grid,
                                    const HyperbolicState& state, double dt);

/// Closed-form implicit relaxation: u unchanged,
/// v <- eps^2/(eps^2+dt) v + dt/(eps^2+dt) (f(u) - (1-eps^2) lambda^2 D_c u).
/// Well defined at eps = 0.
HyperbolicState relaxation_step(const ModelParams& p, const Grid& grid,
                                const HyperbolicState& half_state, double dt);

HyperbolicState jpt_step(const ModelParams& p, const Grid& grid,
                         const HyperbolicState& state, double dt);

/// eps -> 0 limit of jpt_step: explicit update of ubar, then vbar from the
/// discrete closure.
LimitState limit_step(const ModelParams& p, const Grid& grid, const LimitState& state,
                      double dt);

struct Rhs {
  CellField du;
  CellField dv;
};

/// Right-hand side of the semi-discrete relaxation system (HLL fluxes,
/// continuous in time). Requires eps > 0.
Rhs semi_discrete_rhs(const ModelParams& p, const Grid& grid, const HyperbolicState& state);

/// Right-hand side of the semi-discrete limit system; dvbar/dt is obtained by
/// differentiating the algebraic closure. Throws std::invalid_argument when
/// vbar violates the closure by more than 1e-12.
Rhs limit_semi_discrete_rhs(const ModelParams& p, const Grid& grid, const LimitState& state);

struct SolutionPair {
  HyperbolicState hyperbolic;
  LimitState limit;
};

using Trajectory = std::vector<SolutionPair>;

/// Called with the step index and the pair at t_n (n = 0 .. n_steps).
using StepObserver = std::function<void(std::size_t, const SolutionPair&)>;

/// Advances both semi-discrete systems with RK4 and the same dt, invoking
/// observer at every time level. Returns the final pair.
SolutionPair integrate_semi_discrete(const ModelParams& p, const Grid& grid,
                                     const SolutionPair& initial, const StepSize& step,
                                     const StepObserver& observer);

/// Convenience overload recording the whole trajectory.
Trajectory integrate_semi_discrete(const ModelParams& p, const Grid& grid,
                                   const SolutionPair& initial, const StepSize& step);

}  // namespace jxlab
