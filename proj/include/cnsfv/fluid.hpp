#pragma once

#include <utility>

#include "cnsfv/fields.hpp"
#include "cnsfv/model.hpp"
#include "cnsfv/transport.hpp"

namespace cnsfv {

struct FluidStepReport {
  double div_inf = 0.0;    // max |div u| after projection
  double kinetic = 0.0;    // 0.5 * integral |u|^2 of the new velocity
  double enstrophy = 0.0;  // integral |grad u|^2 of the new velocity
  int poisson_iterations = 0;
  int helmholtz_iterations = 0;
};

/// Iteration seeds carried across steps (warm starts only; results do not
/// depend on the seeds beyond solver tolerance).
struct FluidWorkspace {
  ScalarField pressure_seed;
  VectorField yosida_seed;
  bool has_pressure = false;
  bool has_yosida = false;
};

/// Resolvent smoothing: w solves (I - eps*Lap) w' = u componentwise with
/// no-slip values, then w = leray projection of w'. L2-nonexpansive, with
/// max|div w| <= tol_div, and w -> projection(u) as eps -> 0.
VectorField yosida_smooth(const Grid& g, const VectorField& u, double eps,
                          double tol_div, double tol_helmholtz = 1e-12,
                          int max_iter = 20000, FluidWorkspace* ws = nullptr);

/// Leray projection: subtracts the discrete gradient of the potential that
/// solves Lap(p) = div(u_star). Returns (u, p) with max|div u| <= tol_div.
/// Exact energy split: |u_star|^2 = |u|^2 + |grad p|^2 up to solver residual.
std::pair<VectorField, ScalarField> project(const Grid& g,
                                            const VectorField& u_star,
                                            double tol_div,
                                            int max_iter = 20000,
                                            const ScalarField* seed = nullptr,
                                            int* iterations = nullptr);

/// One momentum step at fixed density field n:
///   explicit conservative upwind convection by kappa * yosida_smooth(u),
///   buoyancy dt * n_face * grad(Phi), implicit viscosity (I - dt*Lap),
///   projection. kappa == 0 skips the smoothing entirely (bitwise identical
///   to a convection-free step). Walls stay no-slip throughout.
VectorField fluid_step(const Grid& g, const State& s, const ModelParams& p,
                       double dt, const SolverOptions& opt,
                       ScalarField* pressure_out = nullptr,
                       FluidStepReport* report = nullptr,
                       FluidWorkspace* ws = nullptr);

/// Quadrature of the squared velocity gradient on the staggered layout
/// (one-sided half-spacing differences against the no-slip walls).
double velocity_gradient_sq(const Grid& g, const VectorField& u);

}  // namespace cnsfv
