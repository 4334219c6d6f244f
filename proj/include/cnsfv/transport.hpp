#pragma once

#include "cnsfv/fields.hpp"
#include "cnsfv/linsolve.hpp"
#include "cnsfv/model.hpp"

namespace cnsfv {

/// Shared tolerances for the implicit pieces of a step.
struct SolverOptions {
  double tol_project = 1e-10;    // absolute bound on max|div u| after projection
  double tol_helmholtz = 1e-12;  // relative residual for velocity solves
  double tol_scalar = 1e-14;     // relative residual for the oxygen solve
  int max_iter = 20000;
};

/// Full simulation state. n: cell density, c: oxygen, u: MAC velocity,
/// p: potential from the last projection.
struct State {
  ScalarField n;
  ScalarField c;
  ScalarField p;
  VectorField u;
  double t = 0.0;

  static State zeros(const Grid& g);
};

/// Face drift flux n*F_eps'(n)*chi(c)*grad(c). The mobility n*F_eps'(n) is
/// taken from the donor cell (sign of the drift), chi from the face-mean c.
/// Bounded by (1/eps)*max chi*max|grad c| regardless of n.
VectorField chemotaxis_flux(const Grid& g, const ScalarField& n,
                            const ScalarField& c, const ModelParams& p);

/// Face diffusive flux D_eps(n_face)*grad(n) with n_face the arithmetic mean
/// of the adjacent cells.
VectorField diffusive_flux_n(const Grid& g, const ScalarField& n,
                             const ModelParams& p);

/// One conservative explicit update of n: advection by u (donor cell),
/// chemotactic drift, nonlinear diffusion. Errors on Courant numbers above 1
/// and on negativity below -1e-13 (a flux/CFL bug, not clamped silently).
ScalarField update_n(const Grid& g, const State& s, const ModelParams& p,
                     double dt);

/// Oxygen update: (i) conservative upwind advection by u, (ii) implicit
/// diffusion (I - dt*Lap), (iii) implicit consumption
/// c <- c*/(1 + dt*F_eps(n)*lambda(c*)) with lambda(c) = f(c)/c.
/// Non-increasing max, non-negative, no spatial coupling added by (iii).
ScalarField update_c(const Grid& g, const State& s, const ModelParams& p,
                     double dt, const SolverOptions& opt = {});

/// Stable step size: safety * min over axes of
///   { h/max|u|, h^2/(2*dim*max D_eps(n)), h/max|F_eps'(n)*chi(c)*grad c| }
/// (the diffusive bound generalizes to 1/(2*maxD*sum h_a^-2) off uniform
/// grids). Always finite and positive for valid params.
double cfl_dt(const Grid& g, const State& s, const ModelParams& p,
              double safety = 0.4);

/// 1 / max over cells of the total outflow rate of the explicit n update.
/// Steps below this keep the update a convex combination (n stays >= 0 even
/// when the per-axis bounds of cfl_dt line up adversarially).
double positivity_dt_bound(const Grid& g, const State& s,
                           const ModelParams& p);

}  // namespace cnsfv
