#include <doctest.h>

#include <cmath>
#include <numeric>

#include "jxlab/schemes.hpp"

using namespace jxlab;
using doctest::Approx;

namespace {

ModelParams linear_params(double eps = 1.0) {
  ModelParams p;
  p.eps = eps;
  return p;
}

HyperbolicState constant_equilibrium(const ModelParams& p, std::size_t n, double c) {
  return {CellField(n, c), CellField(n, p.f(c)), 0.0};
}

double total(const CellField& f) { return std::accumulate(f.begin(), f.end(), 0.0); }

}  // namespace

TEST_CASE("cfl step before and after landing on t_final") {
  const ModelParams p = linear_params();
  const StepSize s = cfl_dt(p, Grid(200, 0.0, 1.0));
  CHECK(s.dt_limit == Approx(0.003298611111111111).epsilon(1e-14));
  CHECK(s.n_steps == 31);
  CHECK(s.dt * static_cast<double>(s.n_steps) == Approx(0.1).epsilon(1e-15));
  CHECK(s.dt <= s.dt_limit);

  ModelParams q;
  q.cfl = 1.0;
  q.lambda = 1.0;
  q.t_final = 0.1;
  const StepSize t = cfl_dt(q, Grid(10, 0.0, 1.0));
  CHECK(t.dt_limit == Approx(0.05));
  CHECK(t.n_steps == 2);  // an exact divisor does not gain a step
}

TEST_CASE("land_on_final_time") {
  const StepSize s = land_on_final_time(0.3, 1.0);
  CHECK(s.n_steps == 4);
  CHECK(s.dt == 0.25);
  CHECK(land_on_final_time(5.0, 1.0).n_steps == 1);
  CHECK_THROWS_AS(land_on_final_time(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("harness steps are eps independent and respect the parabolic bound") {
  const Grid g(200, 0.0, 1.0);
  const StepSize s1 = stable_dt(linear_params(1.0), g);
  const StepSize s2 = stable_dt(linear_params(1e-6), g);
  CHECK(s1.dt == s2.dt);
  CHECK(s1.dt_limit <= cfl_dt(linear_params(), g).dt_limit);
  const double lam = 0.72, dx = 0.005;
  CHECK(s1.dt_limit == Approx(0.95 * dx * dx / (lam * lam + lam * dx)).epsilon(1e-14));

  const StepSize sd = semi_discrete_dt(linear_params(0.01), g);
  CHECK(sd.dt_limit <= 0.95 * 0.5 * 1e-4);
  CHECK(sd.dt_limit <= s1.dt_limit);
}

TEST_CASE("HLL interface flux by hand") {
  const HllFlux f = hll_interface_flux(linear_params(), {1.0, 0.5}, {1.0, 0.5});
  CHECK(f.fu == Approx(0.5).epsilon(1e-15));
  CHECK(f.fv == Approx(0.5184).epsilon(1e-15));

  const HllFlux g = hll_interface_flux(linear_params(), {2.0, 1.0}, {1.0, 0.5});
  CHECK(g.fu == Approx(0.75 + 0.36));
  CHECK(g.fv == Approx(0.5184 * 1.5 + 0.36 * 0.5));
}

TEST_CASE("convection step keeps constant states") {
  const ModelParams p = linear_params();
  const Grid g(50, 0.0, 1.0);
  const HyperbolicState c{CellField(50, 1.3), CellField(50, -0.4), 0.25};
  const HyperbolicState out = hll_convection_step(p, g, c, 1e-3);
  CHECK(out.u == c.u);
  CHECK(out.v == c.v);
  CHECK(out.t == 0.25);
}

TEST_CASE("relaxation step") {
  const Grid g(50, 0.0, 1.0);
  const HyperbolicState s{CellField(50, 1.0), CellField(50, 3.0), 0.0};

  const HyperbolicState big = relaxation_step(linear_params(1e6), g, s, 1e-3);
  for (double v : big.v) CHECK(v == Approx(3.0).epsilon(1e-12));
  CHECK(big.t == Approx(1e-3));

  // eps = 0 projects onto the equilibrium.
  const HyperbolicState zero = relaxation_step(linear_params(0.0), g, s, 1e-3);
  for (double v : zero.v) CHECK(v == Approx(0.5));
  CHECK(zero.u == s.u);

  const ModelParams p = linear_params(0.3);
  const HyperbolicState eq = constant_equilibrium(p, 50, 1.7);
  CHECK(relaxation_step(p, g, eq, 1e-3).v == eq.v);
}

TEST_CASE("constant equilibrium states are fixed points of every scheme") {
  const Grid g(40, 0.0, 1.0);
  for (double eps : {1.0, 0.1, 1e-8}) {
    const ModelParams p = linear_params(eps);
    const double dt = stable_dt(p, g).dt;
    HyperbolicState h = constant_equilibrium(p, 40, 1.25);
    LimitState l{CellField(40, 1.25), CellField(40, p.f(1.25)), 0.0};
    for (int n = 0; n < 100; ++n) {
      h = jpt_step(p, g, h, dt);
      l = limit_step(p, g, l, dt);
    }
    for (std::size_t i = 0; i < 40; ++i) {
      CHECK(std::abs(h.u[i] - 1.25) <= 1e-14);
      CHECK(std::abs(h.v[i] - 0.625) <= 1e-14);
      CHECK(std::abs(l.ubar[i] - 1.25) <= 1e-14);
      CHECK(std::abs(l.vbar[i] - 0.625) <= 1e-14);
    }
  }
}

TEST_CASE("limit step on quadratic data") {
  // ubar = x^2 with a = 0: centered differences are exact, so
  // ubar^{n+1} - ubar^n = dt (2 lambda^2 + lambda dx) away from the boundary.
  ModelParams p = linear_params();
  p.a = 0.0;
  const Grid g(20, 0.0, 1.0);
  CellField ub(20);
  for (std::size_t i = 0; i < 20; ++i) ub[i] = g.center(i) * g.center(i);
  const LimitState s{ub, equilibrium_v(p, g, ub), 0.0};
  const double dt = 1e-4;
  const LimitState out = limit_step(p, g, s, dt);
  for (std::size_t i = 2; i + 2 < 20; ++i)
    CHECK((out.ubar[i] - ub[i]) / dt ==
          Approx(2.0 * 0.72 * 0.72 + 0.72 * g.dx()).epsilon(1e-9));
  CHECK(out.vbar == equilibrium_v(p, g, out.ubar));
  CHECK(out.t == dt);
}

TEST_CASE("splitting and limit schemes conserve mass away from the boundary") {
  ModelParams p = linear_params(0.2);
  p.a = 0.0;
  const Grid g(200, 0.0, 1.0);
  CellField u(200, 1.0);
  for (std::size_t i = 95; i < 105; ++i) u[i] = 3.0;
  HyperbolicState h{u, equilibrium_v(p, g, u), 0.0};
  LimitState l{u, h.v, 0.0};
  const double m0 = total(u);
  const double dt = stable_dt(p, g).dt;
  for (int n = 0; n < 20; ++n) {
    h = jpt_step(p, g, h, dt);
    l = limit_step(p, g, l, dt);
  }
  CHECK(std::abs(total(h.u) - m0) <= 1e-12 * m0);
  CHECK(std::abs(total(l.ubar) - m0) <= 1e-12 * m0);
}

TEST_CASE("mass changes only through the boundary fluxes") {
  const ModelParams p = linear_params(0.1);
  const Grid g(100, 0.0, 1.0);
  HyperbolicState h = riemann_initial(p, g, 2.0, 1.0, false).hyperbolic;
  const double dt = stable_dt(p, g).dt;
  const double m0 = g.dx() * total(h.u);
  double boundary = 0.0;
  for (int n = 0; n < 200; ++n) {
    const HllFlux left = hll_interface_flux(p, {h.u.front(), h.v.front()}, {h.u.front(), h.v.front()});
    const HllFlux right = hll_interface_flux(p, {h.u.back(), h.v.back()}, {h.u.back(), h.v.back()});
    boundary += dt * (left.fu - right.fu);
    h = jpt_step(p, g, h, dt);
  }
  CHECK(boundary != 0.0);
  CHECK(std::abs(g.dx() * total(h.u) - m0 - boundary) <= 1e-12 * m0);
}

TEST_CASE("one splitting step approaches one limit step as eps vanishes") {
  const ModelParams p = linear_params(1e-8);
  const Grid g(200, 0.0, 1.0);
  const InitialStates init = riemann_initial(p, g, 2.0, 1.0, true);
  const double dt = stable_dt(p, g).dt;
  const HyperbolicState h = jpt_step(p, g, init.hyperbolic, dt);
  const LimitState l = limit_step(p, g, init.limit, dt);
  for (std::size_t i = 0; i < 200; ++i) {
    CHECK(h.u[i] == Approx(l.ubar[i]).epsilon(1e-6));
    CHECK(h.v[i] == Approx(l.vbar[i]).epsilon(1e-6));
  }
}

TEST_CASE("semi-discrete right-hand sides") {
  const ModelParams p = linear_params(0.3);
  const Grid g(30, 0.0, 1.0);

  const Rhs zero = semi_discrete_rhs(p, g, constant_equilibrium(p, 30, 0.8));
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(zero.du[i] == 0.0);
    CHECK(zero.dv[i] == 0.0);
  }

  // u = x, v = a u: second differences vanish inside and du/dt = -a.
  HyperbolicState lin{CellField(30), CellField(30), 0.0};
  for (std::size_t i = 0; i < 30; ++i) {
    lin.u[i] = g.center(i);
    lin.v[i] = 0.5 * lin.u[i];
  }
  const Rhs r = semi_discrete_rhs(p, g, lin);
  for (std::size_t i = 1; i + 1 < 30; ++i) CHECK(r.du[i] == Approx(-0.5).epsilon(1e-12));

  const CellField ub(30, 0.8);
  const Rhs lz = limit_semi_discrete_rhs(p, g, {ub, equilibrium_v(p, g, ub), 0.0});
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(lz.du[i] == 0.0);
    CHECK(lz.dv[i] == 0.0);
  }

  CellField bad = equilibrium_v(p, g, ub);
  bad[3] += 1e-6;
  CHECK_THROWS_AS(limit_semi_discrete_rhs(p, g, {ub, bad, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(semi_discrete_rhs(linear_params(0.0), g, lin), std::invalid_argument);
}

TEST_CASE("semi-discrete integration") {
  const ModelParams p = linear_params(0.5);
  const Grid g(50, 0.0, 1.0);

  SUBCASE("constant equilibrium stays constant") {
    const CellField c(50, 2.0);
    const SolutionPair init{constant_equilibrium(p, 50, 2.0), {c, equilibrium_v(p, g, c), 0.0}};
    const Trajectory traj = integrate_semi_discrete(p, g, init, land_on_final_time(1e-3, 0.01));
    CHECK(traj.size() == 11);
    for (const auto& s : traj) {
      CHECK(s.hyperbolic.u == init.hyperbolic.u);
      CHECK(s.limit.ubar == init.limit.ubar);
    }
    CHECK(traj.back().hyperbolic.t == Approx(0.01));
  }

  SUBCASE("classical RK4 is fourth order in time") {
    ModelParams q = p;
    q.t_final = 0.05;
    const InitialStates init = smooth_initial(q, g, 1.5, 0.5);
    const double dt0 = semi_discrete_dt(q, g).dt;
    auto solve = [&](double dt) {
      return integrate_semi_discrete(q, g, {init.hyperbolic, init.limit},
                                     land_on_final_time(dt, q.t_final), {});
    };
    const SolutionPair a = solve(dt0), b = solve(dt0 / 2), c = solve(dt0 / 4);
    double dab = 0.0, dbc = 0.0, lab = 0.0, lbc = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
      dab = std::max(dab, std::abs(a.hyperbolic.v[i] - b.hyperbolic.v[i]));
      dbc = std::max(dbc, std::abs(b.hyperbolic.v[i] - c.hyperbolic.v[i]));
      lab = std::max(lab, std::abs(a.limit.ubar[i] - b.limit.ubar[i]));
      lbc = std::max(lbc, std::abs(b.limit.ubar[i] - c.limit.ubar[i]));
    }
    const double rate = std::log2(dab / dbc);
    const double limit_rate = std::log2(lab / lbc);
    MESSAGE("RK4 observed order: relaxation " << rate << ", limit " << limit_rate);
    CHECK(rate == Approx(4.0).epsilon(0.05));
    CHECK(limit_rate == Approx(4.0).epsilon(0.05));
  }

  SUBCASE("observer sees every level in order") {
    const InitialStates init = smooth_initial(p, g, 1.0, 0.1);
    std::vector<std::size_t> seen;
    integrate_semi_discrete(p, g, {init.hyperbolic, init.limit}, land_on_final_time(1e-3, 5e-3),
                            [&](std::size_t n, const SolutionPair&) { seen.push_back(n); });
    CHECK(seen == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  }
}

TEST_CASE("unstable steps raise NumericalError") {
  const ModelParams p = linear_params(1e-3);
  const Grid g(100, 0.0, 1.0);
  HyperbolicState h = riemann_initial(p, g, 2.0, 1.0, false).hyperbolic;
  const double dt = 50.0 * stable_dt(p, g).dt;
  auto blow_up = [&] {
    for (int n = 0; n < 100000; ++n) h = jpt_step(p, g, h, dt);
  };
  CHECK_THROWS_AS(blow_up(), NumericalError);
}
