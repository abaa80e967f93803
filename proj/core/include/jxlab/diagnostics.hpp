#pragma once

// Relative-entropy measurements comparing a relaxation solution w = (u, v)
// with a limit solution wbar = (ubar, vbar) on the same grid. The entropy
// quantities are restricted to the linear flux f(u) = a u and throw
// std::domain_error otherwise; the L2 error series works for any flux.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "jxlab/model.hpp"
#include "jxlab/schemes.hpp"

namespace jxlab {

/// E_i = E(w_i | wbar_i).
double cell_relative_entropy(const ModelParams& p, StatePoint w, StatePoint wbar);

/// phi = sum_i dx E_i.
double phi_total(const ModelParams& p, const Grid& grid, const HyperbolicState& w,
                 const LimitState& wbar);

/// Discrete relative entropy flux at the interface between cells i and i+1.
double discrete_re_flux(const ModelParams& p, StatePoint w_i, StatePoint w_ip1,
                        StatePoint wbar_i, StatePoint wbar_ip1);

/// Second difference (f_{i+1} - 2 f_i + f_{i-1}) / dx^2 with ghost closure.
CellField second_difference(const Grid& grid, std::span<const double> f);

struct Residuals {
  CellField r1;
  CellField r2;
  CellField r3;
  CellField r4;
};

/// Numerical-viscosity residuals R^1 .. R^4 of the discrete entropy law.
Residuals residuals(const ModelParams& p, const Grid& grid, const HyperbolicState& w,
                    const LimitState& wbar);

/// Hook for substituting the residual formula (used to check that the
/// identity test detects a wrong formula).
using ResidualFn = std::function<Residuals(const ModelParams&, const Grid&,
                                           const HyperbolicState&, const LimitState&)>;

struct EntropyBudget {
  CellField rel_entropy;   // E_i
  CellField flux;          // F_{i+1/2}, n+1 interfaces; entry k is between cells k-1 and k
  Residuals res;
  CellField dissipation;   // -[a(u-ubar) - (v-vbar)]^2
  CellField forcing;       // eps^2 [a(u-ubar) - (v-vbar)] dvbar/dt
  CellField entropy_rate;  // dE_i/dt by the chain rule
  CellField mismatch;      // LHS - RHS of the discrete entropy law
  CellField term_scale;    // largest |term| entering cell i
  double max_mismatch = 0.0;
  double max_relative_mismatch = 0.0;  // max_i |mismatch_i| / (1 + term_scale_i)
};

/// Evaluates both sides of the discrete relative entropy law
///   dE_i/dt + (F_{i+1/2} - F_{i-1/2})/dx
///     = -[a du - dv]^2 + eps^2 [a du - dv] dvbar_i/dt + R1 + R2 + R3 + R4
/// with time derivatives from the semi-discrete right-hand sides.
EntropyBudget identity_mismatch(const ModelParams& p, const Grid& grid,
                                const HyperbolicState& w, const LimitState& wbar,
                                const ResidualFn& residual_fn = {});

/// Left-endpoint time integrals of the residual sums and of the norms used to
/// bound them.
struct ResidualIntegrals {
  double t = 0.0;
  double r1 = 0.0;  // int sum dx R^1
  double r2 = 0.0;
  double r3 = 0.0;
  double r4 = 0.0;
  double dx_du_sq = 0.0;   // ||D_x(u - ubar)||^2_{L2(Q_t)}
  double dx_dv_sq = 0.0;   // ||D_x(v - vbar)||^2_{L2(Q_t)}
  double dxx_vbar_sq = 0.0;  // ||D_xx vbar||^2_{L2(Q_t)}
  double gap_sq = 0.0;     // int sum dx [(v-vbar) - a(u-ubar)]^2

  void accumulate(const ModelParams& p, const Grid& grid, const HyperbolicState& w,
                  const LimitState& wbar, double dt);
};

struct EstimateCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool equality = false;  // equality checks use a relative tolerance
  bool passed = false;
  double excess = 0.0;    // lhs - rhs (how far an inequality is violated when > 0)
};

struct ResidualReport {
  std::vector<EstimateCheck> checks;
  bool all_passed() const;
};

/// Checks, for time-integrated sums with theta = 1/2:
///  estimR1, estimR2 as equalities (relative tolerance 1e-12),
///  sum(R1+R2+R4) <= 0, and the estimR3 bound.
ResidualReport residual_sign_checks(const ModelParams& p, const Grid& grid,
                                    const ResidualIntegrals& integrals);

/// Sum_n dt Sum_i dx (|u-ubar|^2 + |v-vbar|^2) over all but the last time
/// level of a uniformly sampled trajectory.
double l2_error_spacetime(const Grid& grid, const Trajectory& trajectory);

/// Per-time-level records. Cumulative entries at level n integrate over
/// [0, t_n) with the left-endpoint rule.
struct ErrorSeries {
  std::vector<double> t;
  std::vector<double> phi;           // NaN for the Burgers flux
  std::vector<double> l2err_sq;
  std::vector<double> k_dvbar_sq;    // ||dvbar/dt||^2_{L2(Q_t)}
  std::vector<double> k_dxxvbar_sq;  // ||D_xx vbar||^2_{L2(Q_t)}

  std::size_t size() const { return t.size(); }

  /// Appends time level t_n, then adds that level's contribution (weighted by
  /// dt, the step to t_{n+1}) to the running space-time sums.
  void record(const ModelParams& p, const Grid& grid, const HyperbolicState& w,
              const LimitState& wbar, double dt);

 private:
  double run_l2_ = 0.0;
  double run_dvbar_ = 0.0;
  double run_dxx_ = 0.0;
};

struct TheoremCheck {
  double phi0 = 0.0;
  double sup_phi = 0.0;
  double b_meas = 0.0;
  double bound = 0.0;   // phi0 + b_meas eps^4
  double margin = 0.0;  // bound - sup_phi
  bool satisfied = false;
};

/// B_meas = ||dvbar/dt||^2 + (lambda^2 dx^2 / 4) ||D_xx vbar||^2 over Q_T and
/// the check sup_t phi(t) <= phi(0) + B_meas eps^4.
TheoremCheck theorem_bound_check(const ModelParams& p, const Grid& grid,
                                 const ErrorSeries& series);

struct EntropyInequalityReport {
  double max_budget = 0.0;  // max over time levels and cells
  double min_budget = 0.0;
  double max_positive = 0.0;
  double dx = 0.0;
  /// max_positive / dx, the constant C in budget <= C dx.
  double slope_constant() const { return max_positive / dx; }
};

/// Per-cell entropy budget dE(w_i)/dt + (F(w_{i+1}) - F(w_{i-1}))/(2dx) + (a u_i - v_i)^2
/// along the semi-discrete flow of the relaxation system.
CellField entropy_budget(const ModelParams& p, const Grid& grid, const HyperbolicState& w);

/// Extremes of the budget over all states. Cells within boundary_band * (x_max - x_min)
/// of either end are skipped: copy ghosts reflect the fast waves into a grid-scale layer
/// whose budget is O(1).
EntropyInequalityReport entropy_inequality_check(const ModelParams& p, const Grid& grid,
                                                 const std::vector<HyperbolicState>& states,
                                                 double boundary_band = 0.2);

}  // namespace jxlab
