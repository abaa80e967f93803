#pragma once

// Parameters, grid and the closed-form entropy algebra of the linear
// Jin-Xin relaxation system
//
//   u_t + v_x = 0,
//   eps^2 v_t + lambda^2 u_x = f(u) - v,
//
// and of its convection-diffusion limit  ubar_t + f(ubar)_x = lambda^2 ubar_xx,
// vbar = f(ubar) - lambda^2 ubar_x.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jxlab {

/// Thrown when a time step produces non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FluxKind { Linear, Burgers };

std::string_view to_string(FluxKind kind);
FluxKind flux_kind_from_string(std::string_view name);

/// f(u) = a*u for the linear flux, u^2/2 for Burgers.
double flux_eval(FluxKind kind, double a, double u);

/// f'(u).
double flux_derivative(FluxKind kind, double a, double u);

struct ModelParams {
  double eps = 1.0;
  double lambda = 0.72;
  double a = 0.5;
  FluxKind flux = FluxKind::Linear;
  double cfl = 0.95;
  double t_final = 0.1;

  double f(double u) const { return flux_eval(flux, a, u); }
  double df(double u) const { return flux_derivative(flux, a, u); }
  bool is_linear() const { return flux == FluxKind::Linear; }

  /// Throws std::invalid_argument unless eps, lambda, t_final > 0 and cfl in (0,1].
  void validate() const;
};

/// True iff lambda > eps*|a| (linear flux) or lambda > eps*max_abs_u (Burgers,
/// where max_abs_u bounds the initial data).
bool check_subcharacteristic(const ModelParams& p, double max_abs_u = 0.0);

/// Uniform 1-D mesh; cell i covers [x_min + i*dx, x_min + (i+1)*dx].
class Grid {
 public:
  Grid(std::size_t n_cells, double x_min, double x_max);

  std::size_t size() const { return n_cells_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  double center(std::size_t i) const { return centers_[i]; }
  std::span<const double> centers() const { return centers_; }
  double midpoint() const { return 0.5 * (x_min_ + x_max_); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_cells_;
  double x_min_;
  double x_max_;
  double dx_;
  std::vector<double> centers_;
};

using CellField = std::vector<double>;

/// Zero-gradient ghost closure: indices -1 and n map to the boundary cells.
inline double ghosted(std::span<const double> f, std::ptrdiff_t i) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  if (i < 0) return f.front();
  if (i >= n) return f.back();
  return f[static_cast<std::size_t>(i)];
}

/// A point (u, v) of the state space.
struct StatePoint {
  double u = 0.0;
  double v = 0.0;
};

/// Constant far-field states w- (left) and w+ (right).
struct BoundaryStates {
  StatePoint left;
  StatePoint right;
};

struct ConvexityBounds {
  double beta0 = 0.0;
  double beta1 = 0.0;
};

// Entropy pair and relative entropy. All of these reject the Burgers flux
// with std::domain_error: the entropy of the nonlinear system is not explicit.

/// E(u,v) = lambda^2 u^2/2 + eps^2 v^2/2 - eps^2 a u v.
double entropy(const ModelParams& p, double u, double v);

/// F(u,v) = -lambda^2 a u^2/2 - eps^2 a v^2/2 + lambda^2 u v.
double entropy_flux(const ModelParams& p, double u, double v);

/// Gradient of E at (u, v).
StatePoint entropy_gradient(const ModelParams& p, double u, double v);

/// E(w|wbar) = E(w) - E(wbar) - grad E(wbar).(w - wbar), written out as the
/// quadratic form in the differences.
double relative_entropy(const ModelParams& p, StatePoint w, StatePoint wbar);

double relative_entropy_flux(const ModelParams& p, StatePoint w, StatePoint wbar);

/// Eigenvalues of the constant Hessian [[lambda^2, -eps^2 a], [-eps^2 a, eps^2]].
/// Throws std::domain_error when the subcharacteristic condition fails.
ConvexityBounds convexity_bounds(const ModelParams& p);

/// vbar_i = f(ubar_i) - scale*lambda^2 (ubar_{i+1} - ubar_{i-1}) / (2 dx).
/// scale = 1 is the discrete closure of the limit system; the relaxation
/// step of the splitting scheme uses scale = 1 - eps^2.
CellField equilibrium_v(const ModelParams& p, const Grid& grid,
                        std::span<const double> ubar, double scale = 1.0);

struct HyperbolicState {
  CellField u;
  CellField v;
  double t = 0.0;
};

struct LimitState {
  CellField ubar;
  CellField vbar;
  double t = 0.0;
};

struct InitialStates {
  HyperbolicState hyperbolic;
  LimitState limit;
  BoundaryStates far_field;
};

/// Riemann data with the jump at the domain midpoint. The hyperbolic v is
/// f(u) (local equilibrium) unless well_prepared, in which case it equals the
/// discrete closure of the limit state and the initial relative entropy is 0.
InitialStates riemann_initial(const ModelParams& p, const Grid& grid, double u_left,
                              double u_right, bool well_prepared);

/// Smooth data u = mean + amplitude*cos(2 pi (x - x_min)/L), which has zero
/// slope at both ends. v = f(u); the limit state uses the discrete closure.
InitialStates smooth_initial(const ModelParams& p, const Grid& grid, double mean,
                             double amplitude);

/// Largest |value| in the field, NaN-propagating.
double max_abs(std::span<const double> f);

/// True iff every entry is finite.
bool all_finite(std::span<const double> f);

}  // namespace jxlab
