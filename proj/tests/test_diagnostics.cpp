// Functionals, energy-budget audit, weak residuals, CSV layout.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnsfv/diagnostics.hpp"
#include "cnsfv/fields.hpp"
#include "cnsfv/model.hpp"
#include "cnsfv/numerics.hpp"
#include "cnsfv/transport.hpp"
#include "doctest.h"

using namespace cnsfv;

namespace {

constexpr double kPi = 3.14159265358979323846;

ModelParams base_params() {
  ModelParams p;
  p.kinetics = kinetics_linear();
  return p;
}

// c = c0 + amp * cos(pi x / Lx) * cos(pi y / Ly): satisfies the zero-flux
// walls exactly, and every centered difference of it has a closed trig form.
void fill_cos_mode(const Grid& g, ScalarField& f, double c0, double amp) {
  const double ax = kPi / g.extent(0), ay = kPi / g.extent(1);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      f(i, j, 0) = c0 + amp * std::cos(ax * g.cell_center(0, i)) *
                            std::cos(ay * g.cell_center(1, j));
}

}  // namespace

TEST_CASE("uniform state: closed-form functionals, zero dissipation") {
  Grid g = Grid::make_2d(8, 6, 2.0, 1.5, BcMode::box);
  const double omega = 2.0 * 1.5;
  State s = State::zeros(g);
  s.n.fill(0.7);
  s.c.fill(2.0);
  ModelParams p = base_params();
  p.energy_weight = 2.0;

  DiagnosticsRecord r = evaluate(g, s, p);
  CHECK(r.mass == doctest::Approx(0.7 * omega).epsilon(1e-14));
  CHECK(r.n_max == 0.7);
  CHECK(r.n_min == 0.7);
  CHECK(r.c_max == 2.0);
  CHECK(r.c_min == 2.0);
  CHECK(r.entropy ==
        doctest::Approx(omega * 0.7 * std::log(0.7)).epsilon(1e-14));
  CHECK(r.psi_energy == 0.0);
  CHECK(r.kinetic == 0.0);
  CHECK(r.combined_energy == doctest::Approx(r.entropy).epsilon(1e-15));
  CHECK(r.d1 == 0.0);
  CHECK(r.d2 == 0.0);
  CHECK(r.d3 == 0.0);
  CHECK(r.d4 == 0.0);
  CHECK(r.i1 == 0.0);
  CHECK(r.i3 == 0.0);
  CHECK(r.floored_cells == 0);
  for (double acc : {r.a1, r.a2, r.a3, r.a4, r.a5, r.a6, r.a7})
    CHECK(acc == 0.0);

  // i2 is the (n+eps)^((3m+2)/3) integral; power 1 collapses to mass+eps|O|
  const double pw = (3.0 * p.m + 2.0) / 3.0;
  CHECK(r.i2 == doctest::Approx(power_integral(g, s.n, p.eps, pw))
                    .epsilon(1e-15));
  CHECK(r.i2 ==
        doctest::Approx(omega * std::pow(0.7 + p.eps, pw)).epsilon(1e-14));
  CHECK(power_integral(g, s.n, p.eps, 1.0) ==
        doctest::Approx(r.mass + p.eps * omega).epsilon(1e-13));

  // vacuum cells contribute 0 to the entropy (s ln s -> 0)
  s.n(3, 2, 0) = 0.0;
  DiagnosticsRecord rv = evaluate(g, s, p);
  CHECK(rv.n_min == 0.0);
  CHECK(std::isfinite(rv.entropy));
  CHECK(rv.entropy ==
        doctest::Approx(r.entropy - g.cell_volume() * 0.7 * std::log(0.7))
            .epsilon(1e-12));
}

TEST_CASE("cos-mode signal: psi energy and c-dissipation match trig sums") {
  // hx = hy = 1/32 by construction
  Grid g = Grid::make_2d(32, 24, 1.0, 0.75, BcMode::box);
  const double C0 = 1.2, B = 0.5;
  const double ax = kPi / g.extent(0), ay = kPi / g.extent(1);
  const double hx = g.hx, hy = g.hy, vol = g.cell_volume();

  State s = State::zeros(g);
  fill_cos_mode(g, s.c, C0, B);
  ModelParams p = base_params();
  DiagnosticsRecord r = evaluate(g, s, p);

  // face-difference factors for a cosine of discrete wavenumber a
  const double kx = 2.0 * std::sin(0.5 * ax * hx) / hx;  // first difference
  const double ky = 2.0 * std::sin(0.5 * ay * hy) / hy;
  const double mx = std::cos(0.5 * ax * hx);  // face-mean attenuation
  const double my = std::cos(0.5 * ay * hy);
  const double lx = kx * kx;  // 4 sin^2(a h/2)/h^2, second-difference factor
  const double ly = ky * ky;
  const double wx = std::sin(ax * hx) / hx;  // wide (2h) centered difference
  const double wy = std::sin(ay * hy) / hy;

  // psi_energy = 0.5 sum vol * (dc)^2 / g(face-mean c) over interior faces
  double psi_ref = 0.0;
  for (int fi = 1; fi < g.nx; ++fi)
    for (int j = 0; j < g.ny; ++j) {
      double xf = fi * hx, yc = g.cell_center(1, j);
      double dc = -B * kx * std::sin(ax * xf) * std::cos(ay * yc);
      double cf = C0 + B * mx * std::cos(ax * xf) * std::cos(ay * yc);
      psi_ref += 0.5 * vol * dc * dc / cf;
    }
  for (int fj = 1; fj < g.ny; ++fj)
    for (int i = 0; i < g.nx; ++i) {
      double xc = g.cell_center(0, i), yf = fj * hy;
      double dc = -B * ky * std::cos(ax * xc) * std::sin(ay * yf);
      double cf = C0 + B * my * std::cos(ax * xc) * std::cos(ay * yf);
      psi_ref += 0.5 * vol * dc * dc / cf;
    }
  CHECK(r.psi_energy == doctest::Approx(psi_ref).epsilon(1e-11));

  // d2: the mirrored ghosts reproduce the even extension of the cosine, so
  // second differences obey the exact eigen-recurrences at every cell
  double d2_ref = 0.0, d3_ref = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double xc = g.cell_center(0, i), yc = g.cell_center(1, j);
      double cosx = std::cos(ax * xc), cosy = std::cos(ay * yc);
      double sinx = std::sin(ax * xc), siny = std::sin(ay * yc);
      double cv = C0 + B * cosx * cosy;
      double sxx = -lx * B * cosx * cosy;
      double syy = -ly * B * cosx * cosy;
      double sxy = B * wx * wy * sinx * siny;
      d2_ref += vol * (sxx * sxx + syy * syy + 2.0 * sxy * sxy) / cv;

      // cell average of the two adjacent face gradients
      double gx = -B * kx * mx * sinx * cosy;
      double gy = -B * ky * my * cosx * siny;
      double g2 = gx * gx + gy * gy;
      d3_ref += vol * g2 * g2 / (cv * cv * cv);
    }
  CHECK(r.d2 == doctest::Approx(d2_ref).epsilon(1e-11));
  CHECK(r.d3 == doctest::Approx(d3_ref).epsilon(1e-11));
  CHECK(r.floored_cells == 0);
}

TEST_CASE("density dissipation: trig closed form and m=2 coincidences") {
  Grid g = Grid::make_2d(24, 16, 1.0, 1.0, BcMode::box);
  ModelParams p = base_params();

  SUBCASE("d1 for m=1.5 against the face-mean power sum") {
    p.m = 1.5;
    p.eps = 0.01;
    const double ax = kPi, hx = g.hx, vol = g.cell_volume();
    State s = State::zeros(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        s.n(i, j, 0) = 1.0 + 0.4 * std::cos(ax * g.cell_center(0, i));
    s.c.fill(1.0);
    DiagnosticsRecord r = evaluate(g, s, p);

    const double kx = 2.0 * std::sin(0.5 * ax * hx) / hx;
    const double mx = std::cos(0.5 * ax * hx);
    double d1_ref = 0.0;
    for (int fi = 1; fi < g.nx; ++fi)
      for (int j = 0; j < g.ny; ++j) {
        double xf = fi * hx;
        double dn = -0.4 * kx * std::sin(ax * xf);
        double nf = 1.0 + 0.4 * mx * std::cos(ax * xf);
        d1_ref += vol * std::pow(nf + p.eps, p.m - 2.0) * dn * dn;
      }
    CHECK(r.d1 == doctest::Approx(d1_ref).epsilon(1e-11));
    CHECK(r.d1 > 0.0);
  }

  SUBCASE("m=2 collapses i1 onto d1 exactly") {
    p.m = 2.0;
    State s = State::zeros(g);
    std::mt19937_64 eng(404);
    for (double& v : s.n.data()) v = uniform_real(eng, 0.5, 1.5);
    s.c.fill(1.0);
    DiagnosticsRecord r = evaluate(g, s, p);
    // (n+eps)^(m-2) == 1 and grad(n^(m/2)) == grad n term by term
    CHECK(r.i1 == doctest::Approx(r.d1).epsilon(1e-15));
    CHECK(r.i1 > 0.0);
  }
}

TEST_CASE("velocity functionals on a uniform periodic stream") {
  Grid g = Grid::make_2d(8, 8, 1.0, 1.0, BcMode::periodic);
  State s = State::zeros(g);
  s.u.comp(0).fill(1.0);
  s.c.fill(1.0);
  ModelParams p = base_params();
  p.energy_weight = 2.0;

  DiagnosticsRecord r = evaluate(g, s, p);
  CHECK(r.kinetic == doctest::Approx(2.0).epsilon(1e-14));   // K |u|^2 |O|
  CHECK(r.i3 == doctest::Approx(1.0).epsilon(1e-14));        // |u|^(10/3) |O|
  CHECK(r.d4 == 0.0);
  CHECK(r.combined_energy == doctest::Approx(r.kinetic).epsilon(1e-14));
}

TEST_CASE("signal floor: counting and clamped denominators") {
  Grid g = Grid::make_2d(8, 8, 1.0, 1.0, BcMode::box);
  ModelParams p = base_params();
  p.c_floor = 0.5;

  State s = State::zeros(g);
  s.n.fill(1.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      s.c(i, j, 0) = (j < 4) ? 0.2 : 1.0;

  DiagnosticsRecord r = evaluate(g, s, p);
  CHECK(r.floored_cells == 32);
  CHECK(r.c_min == 0.2);
  CHECK(std::isfinite(r.psi_energy));
  CHECK(std::isfinite(r.d2));
  CHECK(std::isfinite(r.d3));

  // fully extinguished signal with a sharp density spike: nothing blows up
  s.c.fill(0.0);
  s.n(4, 4, 0) = 50.0;
  DiagnosticsRecord rz = evaluate(g, s, p);
  CHECK(rz.floored_cells == 64);
  CHECK(rz.psi_energy == 0.0);
  CHECK(rz.d2 == 0.0);
  CHECK(rz.d3 == 0.0);
  CHECK(std::isfinite(rz.entropy));
  CHECK(std::isfinite(rz.d1));
}

TEST_CASE("accumulators: trapezoid advance, chaining, time-order guard") {
  Grid g = Grid::make_2d(16, 16, 1.0, 1.0, BcMode::box);
  ModelParams p = base_params();
  State s = State::zeros(g);
  fill_cos_mode(g, s.c, 1.1, 0.3);
  fill_cos_mode(g, s.n, 0.9, 0.2);

  DiagnosticsRecord r0 = evaluate(g, s, p);
  CHECK(r0.a4 == 0.0);

  s.t = 0.3;  // same fields, later time: trapezoid is dt * value
  DiagnosticsRecord r1 = evaluate(g, s, p, &r0);
  CHECK(r1.a1 == doctest::Approx(0.3 * r0.i1).epsilon(1e-14));
  CHECK(r1.a2 == doctest::Approx(0.3 * r0.i2).epsilon(1e-14));
  CHECK(r1.a3 == doctest::Approx(0.3 * r0.i3).epsilon(1e-14));
  CHECK(r1.a4 == doctest::Approx(0.3 * r0.d1).epsilon(1e-14));
  CHECK(r1.a5 == doctest::Approx(0.3 * r0.d2).epsilon(1e-14));
  CHECK(r1.a6 == doctest::Approx(0.3 * r0.d3).epsilon(1e-14));
  CHECK(r1.a7 == doctest::Approx(0.3 * r0.d4).epsilon(1e-14));

  s.t = 0.5;
  DiagnosticsRecord r2 = evaluate(g, s, p, &r1);
  CHECK(r2.a4 == doctest::Approx(0.5 * r0.d1).epsilon(1e-14));
  CHECK(r2.a5 == doctest::Approx(0.5 * r0.d2).epsilon(1e-14));

  s.t = 0.1;  // stepping backwards from r2 must be rejected
  CHECK_THROWS_AS(evaluate(g, s, p, &r2), std::invalid_argument);

  // shape mismatch guard
  Grid g2 = Grid::make_2d(8, 8, 1.0, 1.0, BcMode::box);
  State s2 = State::zeros(g2);
  CHECK_THROWS_AS(evaluate(g, s2, p), std::invalid_argument);
}

TEST_CASE("energy budget audit") {
  ModelParams p = base_params();

  auto rec = [](double t, double E) {
    DiagnosticsRecord r;
    r.t = t;
    r.combined_energy = E;
    return r;
  };

  SUBCASE("hand-computed rates, quartiles, and the trend verdict") {
    // dt=1, K=1, a=1; only d4=2 dissipates: rate_k = dE_k + 1
    p.energy_weight = 1.0;
    std::vector<DiagnosticsRecord> recs = {rec(0.0, 4.0), rec(1.0, 3.0),
                                           rec(2.0, 2.5), rec(3.0, 2.4)};
    for (auto& r : recs) r.d4 = 2.0;

    BudgetReport rep = energy_budget_check(recs, p, false, 1e-8);
    CHECK(rep.implied_constant == doctest::Approx(0.9).epsilon(1e-13));
    CHECK(rep.first_quartile_max == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(rep.last_quartile_max == doctest::Approx(0.9).epsilon(1e-13));
    CHECK_FALSE(rep.pass);  // 0.9 > 2*0 + 1e-8

    BudgetReport loose = energy_budget_check(recs, p, false, 1.0);
    CHECK(loose.pass);
  }

  SUBCASE("diffusion weight a and kinetic weight K enter the rate") {
    p.a = 2.0;
    p.energy_weight = 1.0;
    std::vector<DiagnosticsRecord> recs = {rec(0.0, 1.0), rec(1.0, 1.0),
                                           rec(2.0, 1.0)};
    for (auto& r : recs) r.d1 = 3.0;
    BudgetReport rep = energy_budget_check(recs, p, false, 1e-8);
    // rate = 0 + 0.5*(6+6)/2 = 3 on every interval
    CHECK(rep.implied_constant == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(rep.pass);  // flat trend: 3 <= 2*3 + slack
  }

  SUBCASE("quartile window widens with the record count") {
    // 9 records -> 8 intervals -> quartile size 2
    std::vector<double> de = {-1.0, -1.0, -0.9, -0.9, -0.8, -0.8, -0.5, -0.5};
    std::vector<DiagnosticsRecord> recs;
    double E = 10.0;
    recs.push_back(rec(0.0, E));
    for (std::size_t k = 0; k < de.size(); ++k) {
      E += de[k];
      recs.push_back(rec(double(k + 1), E));
    }
    BudgetReport rep = energy_budget_check(recs, p, false, 1e-8);
    CHECK(rep.first_quartile_max == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(rep.last_quartile_max == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK_FALSE(rep.pass);  // -0.5 > 2*(-1) + slack
    CHECK(energy_budget_check(recs, p, false, 2.0).pass);
  }

  SUBCASE("constant potential demands monotone decay") {
    std::vector<DiagnosticsRecord> down = {rec(0.0, 2.0), rec(0.5, 1.9),
                                           rec(1.0, 1.9)};
    BudgetReport ok = energy_budget_check(down, p, true, 1e-8);
    CHECK(ok.pass);
    CHECK(ok.max_energy_increase == doctest::Approx(0.0).epsilon(1e-13));

    std::vector<DiagnosticsRecord> up = {rec(0.0, 2.0), rec(0.5, 1.9),
                                         rec(1.0, 2.1)};
    BudgetReport bad = energy_budget_check(up, p, true, 1e-8);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_energy_increase == doctest::Approx(0.2).epsilon(1e-12));
  }

  SUBCASE("rejects degenerate sampling") {
    std::vector<DiagnosticsRecord> one = {rec(0.0, 1.0)};
    CHECK_THROWS_AS(energy_budget_check(one, p, true, 1e-8),
                    std::invalid_argument);
    std::vector<DiagnosticsRecord> flat = {rec(0.0, 1.0), rec(0.0, 1.0)};
    CHECK_THROWS_AS(energy_budget_check(flat, p, true, 1e-8),
                    std::invalid_argument);
    std::vector<DiagnosticsRecord> ragged = {rec(0.0, 1.0), rec(1.0, 1.0),
                                             rec(2.5, 1.0)};
    CHECK_THROWS_AS(energy_budget_check(ragged, p, true, 1e-8),
                    std::invalid_argument);
  }
}

namespace {

// phi(x,t) = (T - t), constant in space
TestFunction const_test_function(double T) {
  TestFunction phi;
  phi.value = [T](const std::array<double, 3>&, double t) { return T - t; };
  phi.grad = [](const std::array<double, 3>&, double) {
    return std::array<double, 3>{0.0, 0.0, 0.0};
  };
  return phi;
}

// stream function sin^2(pi x) sin^2(pi y): solenoidal, vanishes with its
// tangential components on every wall, and shuts off linearly at t = T
VectorTestFunction curl_test_function(double T) {
  VectorTestFunction v;
  v.value = [T](const std::array<double, 3>& x, double t) {
    double th = (T - t) / T;
    double s2x = std::sin(kPi * x[0]) * std::sin(kPi * x[0]);
    double s2y = std::sin(kPi * x[1]) * std::sin(kPi * x[1]);
    return std::array<double, 3>{
        kPi * s2x * std::sin(2.0 * kPi * x[1]) * th,
        -kPi * std::sin(2.0 * kPi * x[0]) * s2y * th, 0.0};
  };
  v.grad = [T](const std::array<double, 3>& x, double t) {
    double th = (T - t) / T;
    double s2x = std::sin(kPi * x[0]) * std::sin(kPi * x[0]);
    double s2y = std::sin(kPi * x[1]) * std::sin(kPi * x[1]);
    double pp = kPi * kPi;
    std::array<std::array<double, 3>, 3> gm{};
    gm[0][0] = pp * std::sin(2.0 * kPi * x[0]) * std::sin(2.0 * kPi * x[1]) * th;
    gm[0][1] = 2.0 * pp * s2x * std::cos(2.0 * kPi * x[1]) * th;
    gm[1][0] = -2.0 * pp * std::cos(2.0 * kPi * x[0]) * s2y * th;
    gm[1][1] = -pp * std::sin(2.0 * kPi * x[0]) * std::sin(2.0 * kPi * x[1]) * th;
    return gm;
  };
  return v;
}

}  // namespace

TEST_CASE("weak residuals: exact zeros on stationary data") {
  Grid g = Grid::make_2d(12, 12, 1.0, 1.0, BcMode::box);
  ModelParams p = base_params();

  const double dt = 0.02;
  const int K = 5;
  const double T = dt * (K - 1);
  std::vector<State> traj;
  for (int k = 0; k < K; ++k) {
    State s = State::zeros(g);
    s.n.fill(0.8);  // c = 0: no consumption, no gradients, no motion
    s.t = k * dt;
    traj.push_back(std::move(s));
  }

  TestFunction phi = const_test_function(T);
  CHECK(weak_residual(g, traj, p, phi, WeakEquation::density) <= 1e-13);
  CHECK(weak_residual(g, traj, p, phi, WeakEquation::signal) <= 1e-13);
  CHECK(weak_residual_momentum(g, traj, p, curl_test_function(T)) <= 1e-13);
}

TEST_CASE("weak residuals: hand-checkable single defects") {
  Grid g = Grid::make_2d(12, 12, 1.0, 1.0, BcMode::box);
  ModelParams p = base_params();
  const double dt = 0.05;

  SUBCASE("density time term carries the test-function weight") {
    State s0 = State::zeros(g);
    s0.n.fill(0.8);
    State s1 = s0;
    s1.n.fill(0.9);
    s1.t = dt;
    double res =
        weak_residual(g, {s0, s1}, p, const_test_function(dt),
                      WeakEquation::density);
    // |integral (n1 - n0) phi(t0)| = 0.1 * |O| * dt
    CHECK(res == doctest::Approx(0.1 * dt).epsilon(1e-12));
  }

  SUBCASE("signal consumption uses the saturated density at the old time") {
    State s0 = State::zeros(g);
    s0.n.fill(0.8);
    s0.c.fill(1.3);
    State s1 = s0;
    s1.t = dt;
    double res = weak_residual(g, {s0, s1}, p, const_test_function(dt),
                               WeakEquation::signal);
    double expect = dt * F_eps(p.eps, 0.8) * 1.3 * dt;  // f(c) = c
    CHECK(res == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("momentum buoyancy term against a direct quadrature") {
    ModelParams pg = p;
    pg.phi_grad = {0.0, -0.1, 0.0};
    const double T = 2.0 * dt;
    std::vector<State> traj;
    for (int k = 0; k < 3; ++k) {
      State s = State::zeros(g);
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          s.n(i, j, 0) = g.cell_center(0, i);  // x-ramp density
      s.c.fill(1.0);
      s.t = k * dt;
      traj.push_back(std::move(s));
    }
    VectorTestFunction vphi = curl_test_function(T);
    double expect = 0.0;
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          std::array<double, 3> pos = {g.cell_center(0, i),
                                       g.cell_center(1, j), 0.0};
          auto ph = vphi.value(pos, k * dt);
          double buoy = pg.phi_grad[0] * ph[0] + pg.phi_grad[1] * ph[1];
          expect -= dt * g.cell_volume() * pos[0] * buoy;
        }
    double res = weak_residual_momentum(g, traj, pg, vphi);
    CHECK(res == doctest::Approx(std::abs(expect)).epsilon(1e-10));
    CHECK(res > 1e-6);  // the term is genuinely active
  }
}

TEST_CASE("weak residuals: precondition screening") {
  Grid g = Grid::make_2d(12, 12, 1.0, 1.0, BcMode::box);
  ModelParams p = base_params();
  State s = State::zeros(g);
  s.n.fill(0.5);

  SUBCASE("momentum test function must be solenoidal") {
    VectorTestFunction bad;
    bad.value = [](const std::array<double, 3>& x, double) {
      return std::array<double, 3>{std::sin(kPi * x[0]) * std::sin(kPi * x[1]),
                                   0.0, 0.0};
    };
    bad.grad = [](const std::array<double, 3>& x, double) {
      std::array<std::array<double, 3>, 3> gm{};
      gm[0][0] = kPi * std::cos(kPi * x[0]) * std::sin(kPi * x[1]);
      gm[0][1] = kPi * std::sin(kPi * x[0]) * std::cos(kPi * x[1]);
      return gm;
    };
    WeakResidualAccumulator acc(g, p, bad);
    CHECK_THROWS_AS(acc.add_state(s), std::invalid_argument);
  }

  SUBCASE("momentum test function must vanish on the walls") {
    VectorTestFunction bad;  // constant drift: solenoidal but wall-violating
    bad.value = [](const std::array<double, 3>&, double) {
      return std::array<double, 3>{1.0, 0.0, 0.0};
    };
    bad.grad = [](const std::array<double, 3>&, double) {
      return std::array<std::array<double, 3>, 3>{};
    };
    WeakResidualAccumulator acc(g, p, bad);
    CHECK_THROWS_AS(acc.add_state(s), std::invalid_argument);
  }

  SUBCASE("support must shut off near the final time") {
    TestFunction phi;
    phi.value = [](const std::array<double, 3>&, double) { return 1.0; };
    phi.grad = [](const std::array<double, 3>&, double) {
      return std::array<double, 3>{0.0, 0.0, 0.0};
    };
    WeakResidualAccumulator acc(g, p, WeakEquation::density, phi);
    State s1 = s;
    acc.add_state(s);
    s1.t = 0.1;
    acc.add_state(s1);
    CHECK_THROWS_AS(acc.residual(), std::invalid_argument);
  }

  SUBCASE("sampling must be uniform and time-ordered") {
    TestFunction phi = const_test_function(1.0);
    WeakResidualAccumulator acc(g, p, WeakEquation::density, phi);
    acc.add_state(s);
    State s1 = s;
    s1.t = 0.1;
    acc.add_state(s1);
    State s2 = s;
    s2.t = 0.25;  // dt jumps from 0.1 to 0.15
    CHECK_THROWS_AS(acc.add_state(s2), std::invalid_argument);

    WeakResidualAccumulator acc2(g, p, WeakEquation::density, phi);
    acc2.add_state(s);
    State sb = s;  // equal time: not an increase
    CHECK_THROWS_AS(acc2.add_state(sb), std::invalid_argument);
  }

  SUBCASE("residual needs at least two states") {
    TestFunction phi = const_test_function(1.0);
    WeakResidualAccumulator acc(g, p, WeakEquation::signal, phi);
    CHECK_THROWS_AS(acc.residual(), std::logic_error);
    acc.add_state(s);
    CHECK_THROWS_AS(acc.residual(), std::logic_error);
    CHECK(acc.states_seen() == 1);
  }
}

TEST_CASE("diagnostics CSV: header, column count, 17-digit round trip") {
  std::ostringstream hs;
  write_diagnostics_header(hs);
  CHECK(hs.str() ==
        "t,mass,c_max,c_min,n_max,entropy,psi_energy,kinetic,"
        "combined_energy,d1,d2,d3,d4,A1,A2,A3,A4,A5,A6,A7,floored_cells\n");

  DiagnosticsRecord r;
  r.t = 0.1 + 1e-17;
  r.mass = kPi;
  r.c_max = 1.0 / 3.0;
  r.c_min = 1e-300;
  r.n_max = 6.02214076e23;
  r.entropy = -0.6931471805599453;
  r.psi_energy = 2.718281828459045;
  r.kinetic = 1.4142135623730951;
  r.combined_energy = r.entropy + r.psi_energy + r.kinetic;
  r.d1 = 0.1;
  r.d2 = 0.2;
  r.d3 = 0.3;
  r.d4 = 0.4;
  r.a1 = 1.0 / 7.0;
  r.a2 = 2.0 / 7.0;
  r.a3 = 3.0 / 7.0;
  r.a4 = 4.0 / 7.0;
  r.a5 = 5.0 / 7.0;
  r.a6 = 6.0 / 7.0;
  r.a7 = 1.0 - 1e-16;
  r.floored_cells = 7;
  r.n_min = 0.123;  // off-CSV field: must not appear in the row

  std::ostringstream rs;
  write_diagnostics_row(rs, r);
  std::string row = rs.str();
  REQUIRE(!row.empty());
  CHECK(row.back() == '\n');
  row.pop_back();

  std::vector<std::string> tok;
  std::stringstream ss(row);
  std::string piece;
  while (std::getline(ss, piece, ',')) tok.push_back(piece);
  REQUIRE(tok.size() == 21);

  const double expect[20] = {r.t,  r.mass,    r.c_max,   r.c_min, r.n_max,
                             r.entropy, r.psi_energy, r.kinetic,
                             r.combined_energy, r.d1, r.d2, r.d3, r.d4,
                             r.a1, r.a2, r.a3, r.a4, r.a5, r.a6, r.a7};
  for (int i = 0; i < 20; ++i)
    CHECK(std::stod(tok[i]) == expect[i]);  // %.17g round-trips exactly
  CHECK(tok[20] == "7");

  std::ostringstream full;
  write_diagnostics_csv(full, {r, r});
  std::string text = full.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
