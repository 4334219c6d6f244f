#pragma once

#include "cnsfv/fields.hpp"

namespace cnsfv {

struct SolveStats {
  int iterations = 0;
  double residual_inf = 0.0;
};

/// Solves Lap(phi) = rhs on cells with zero-flux walls (box) or wrap-around
/// (periodic) by conjugate gradients on the mean-free subspace.
///
/// rhs must be discretely compatible: |mean rhs| <= 1e-10 * max|rhs|.
/// The returned phi is mean-free and satisfies
///   max|Lap(phi) - (rhs - mean rhs)| <= tol * max|rhs|.
/// x0, when given, seeds the iteration (its mean is discarded).
ScalarField poisson_neumann_solve(const Grid& g, const ScalarField& rhs,
                                  double tol, int max_iter = 20000,
                                  const ScalarField* x0 = nullptr,
                                  SolveStats* stats = nullptr);

/// Componentwise solve of (I - sigma*Lap) w = rhs on the staggered velocity
/// grids. Box mode pins wall values to zero: nodes on a wall are true
/// boundary nodes, walls half a spacing away enter through reflected ghosts.
/// Per component: max|residual| <= tol * max|rhs component|.
VectorField helmholtz_dirichlet_solve(const Grid& g, const VectorField& rhs,
                                      double sigma, double tol,
                                      int max_iter = 20000,
                                      const VectorField* x0 = nullptr,
                                      SolveStats* stats = nullptr);

/// (I - sigma*Lap) solve on cells with zero-flux walls; the implicit
/// diffusion step for cell scalars. max|residual| <= tol * max|rhs|.
ScalarField helmholtz_neumann_solve(const Grid& g, const ScalarField& rhs,
                                    double sigma, double tol,
                                    int max_iter = 20000,
                                    const ScalarField* x0 = nullptr,
                                    SolveStats* stats = nullptr);

}  // namespace cnsfv
