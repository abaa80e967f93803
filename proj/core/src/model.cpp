#include "jxlab/model.hpp"

#include <algorithm>
#include <cmath>

namespace jxlab {

std::string_view to_string(FluxKind kind) {
  return kind == FluxKind::Linear ? "linear" : "burgers";
}

FluxKind flux_kind_from_string(std::string_view name) {
  if (name == "linear") return FluxKind::Linear;
  if (name == "burgers") return FluxKind::Burgers;
  throw std::invalid_argument("unknown flux '" + std::string(name) +
                              "' (expected linear|burgers)");
}

double flux_eval(FluxKind kind, double a, double u) {
  return kind == FluxKind::Linear ? a * u : 0.5 * u * u;
}

double flux_derivative(FluxKind kind, double a, double u) {
  return kind == FluxKind::Linear ? a : u;
}

void ModelParams::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must be in (0, 1]");
  if (!(t_final > 0.0)) throw std::invalid_argument("t_final must be > 0");
  if (!std::isfinite(a)) throw std::invalid_argument("a must be finite");
}

bool check_subcharacteristic(const ModelParams& p, double max_abs_u) {
  const double speed = p.is_linear() ? std::abs(p.a) : std::abs(max_abs_u);
  return p.lambda > p.eps * speed;
}

Grid::Grid(std::size_t n_cells, double x_min, double x_max)
    : n_cells_(n_cells), x_min_(x_min), x_max_(x_max), dx_(0.0) {
  if (n_cells < 3) throw std::invalid_argument("grid needs at least 3 cells");
  if (!(x_max > x_min)) throw std::invalid_argument("grid needs x_max > x_min");
  dx_ = (x_max - x_min) / static_cast<double>(n_cells);
  centers_.resize(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i)
    centers_[i] = x_min + (static_cast<double>(i) + 0.5) * dx_;
}

namespace {

void require_linear(const ModelParams& p, const char* what) {
  if (!p.is_linear())
    throw std::domain_error(std::string(what) +
                            ": entropy pair is only explicit for the linear flux");
}

}  // namespace

double entropy(const ModelParams& p, double u, double v) {
  require_linear(p, "entropy");
  const double l2 = p.lambda * p.lambda;
  const double e2 = p.eps * p.eps;
  return 0.5 * l2 * u * u + 0.5 * e2 * v * v - e2 * p.a * u * v;
}

double entropy_flux(const ModelParams& p, double u, double v) {
  require_linear(p, "entropy_flux");
  const double l2 = p.lambda * p.lambda;
  const double e2 = p.eps * p.eps;
  return -0.5 * l2 * p.a * u * u - 0.5 * e2 * p.a * v * v + l2 * u * v;
}

StatePoint entropy_gradient(const ModelParams& p, double u, double v) {
  require_linear(p, "entropy_gradient");
  const double l2 = p.lambda * p.lambda;
  const double e2 = p.eps * p.eps;
  return {l2 * u - e2 * p.a * v, e2 * v - e2 * p.a * u};
}

double relative_entropy(const ModelParams& p, StatePoint w, StatePoint wbar) {
  return entropy(p, w.u - wbar.u, w.v - wbar.v);
}

double relative_entropy_flux(const ModelParams& p, StatePoint w, StatePoint wbar) {
  return entropy_flux(p, w.u - wbar.u, w.v - wbar.v);
}

ConvexityBounds convexity_bounds(const ModelParams& p) {
  require_linear(p, "convexity_bounds");
  if (!check_subcharacteristic(p))
    throw std::domain_error("convexity_bounds: subcharacteristic condition violated");
  const double l2 = p.lambda * p.lambda;
  const double e2 = p.eps * p.eps;
  const double trace = l2 + e2;
  const double det = l2 * e2 - e2 * e2 * p.a * p.a;
  const double disc = std::sqrt(std::max(0.0, trace * trace - 4.0 * det));
  const double beta1 = 0.5 * (trace + disc);
  // det/beta1 avoids the cancellation in (trace - disc)/2 when eps is small.
  return {det / beta1, beta1};
}

CellField equilibrium_v(const ModelParams& p, const Grid& grid,
                        std::span<const double> ubar, double scale) {
  if (ubar.size() != grid.size())
    throw std::invalid_argument("equilibrium_v: field size does not match grid");
  const double coef = scale * p.lambda * p.lambda / (2.0 * grid.dx());
  const auto n = static_cast<std::ptrdiff_t>(ubar.size());
  CellField vbar(ubar.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double grad = ghosted(ubar, i + 1) - ghosted(ubar, i - 1);
    vbar[static_cast<std::size_t>(i)] = p.f(ubar[static_cast<std::size_t>(i)]) - coef * grad;
  }
  return vbar;
}

InitialStates riemann_initial(const ModelParams& p, const Grid& grid, double u_left,
                              double u_right, bool well_prepared) {
  const double mid = grid.midpoint();
  CellField u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    u[i] = grid.center(i) < mid ? u_left : u_right;

  InitialStates out;
  out.limit.ubar = u;
  out.limit.vbar = equilibrium_v(p, grid, u);
  out.hyperbolic.u = u;
  if (well_prepared) {
    out.hyperbolic.v = out.limit.vbar;
  } else {
    out.hyperbolic.v.resize(u.size());
    std::transform(u.begin(), u.end(), out.hyperbolic.v.begin(),
                   [&](double x) { return p.f(x); });
  }
  out.far_field = {{u_left, p.f(u_left)}, {u_right, p.f(u_right)}};
  return out;
}

InitialStates smooth_initial(const ModelParams& p, const Grid& grid, double mean,
                             double amplitude) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double length = grid.x_max() - grid.x_min();
  CellField u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    u[i] = mean + amplitude * std::cos(two_pi * (grid.center(i) - grid.x_min()) / length);

  InitialStates out;
  out.limit.ubar = u;
  out.limit.vbar = equilibrium_v(p, grid, u);
  out.hyperbolic.u = u;
  out.hyperbolic.v.resize(u.size());
  std::transform(u.begin(), u.end(), out.hyperbolic.v.begin(), [&](double x) { return p.f(x); });
  out.far_field = {{u.front(), p.f(u.front())}, {u.back(), p.f(u.back())}};
  return out;
}

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) {
    if (std::isnan(x)) return x;
    m = std::max(m, std::abs(x));
  }
  return m;
}

bool all_finite(std::span<const double> f) {
  return std::all_of(f.begin(), f.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace jxlab
