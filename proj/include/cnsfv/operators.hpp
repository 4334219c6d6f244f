#pragma once

#include "cnsfv/fields.hpp"

namespace cnsfv {

// ---------------------------------------------------------------------------
// Differential operators (MAC grid).
//
// gradient: cell scalar -> faces. Box mode leaves wall faces at zero (the
// zero-flux wall condition); periodic mode wraps and keeps the duplicated
// face synced.
//
// divergence: faces -> cell scalar, using the stored face values as the
// normal fluxes (wall fluxes are whatever the caller put there).
//
// divergence(gradient(c)) reproduces the standard compact Laplacian stencil
// exactly, and <a, div F> = -<grad a, F> holds to round-off whenever F has
// zero normal wall components.
// ---------------------------------------------------------------------------

VectorField gradient(const Grid& g, const ScalarField& c);
ScalarField divergence(const Grid& g, const VectorField& f);

/// Compact cell Laplacian with zero-flux walls (mirror ghosts) in box mode,
/// wrap-around in periodic mode. out may not alias x.
void apply_scalar_laplacian(const Grid& g, const ScalarField& x,
                            ScalarField& out);

/// One conservative donor-cell transport step: q <- q - dt*div(q_donor * vel).
/// Requires per-axis Courant numbers dt*max|vel_a|/h_a <= 1 and, in box mode,
/// exactly zero wall-normal velocities.
ScalarField upwind_advect(const Grid& g, const ScalarField& q,
                          const VectorField& vel, double dt);

// ---------------------------------------------------------------------------
// Quadrature and norms. Cell sums weight every cell by the cell volume; face
// sums weight interior faces by the cell volume and box wall faces by half of
// it (periodic grids own faces 0..n-1 only). All reductions are compensated.
// ---------------------------------------------------------------------------

double integrate_cells(const Grid& g, const ScalarField& f);
double mean_cells(const Grid& g, const ScalarField& f);
double min_cells(const ScalarField& f);
double max_cells(const ScalarField& f);
double max_abs_cells(const ScalarField& f);

double l1_diff_cells(const Grid& g, const ScalarField& a, const ScalarField& b);
double l2_diff_cells(const Grid& g, const ScalarField& a, const ScalarField& b);

/// Integral of |v|^2 with the face quadrature described above.
double l2_sq_faces(const Grid& g, const VectorField& v);
double l2_diff_faces(const Grid& g, const VectorField& a, const VectorField& b);

/// Largest |component a| over the faces owned by the grid.
double max_abs_face(const Grid& g, const VectorField& v, int axis);

inline int wrap_index(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

}  // namespace cnsfv
