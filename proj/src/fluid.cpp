#include "cnsfv/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cnsfv/errors.hpp"
#include "cnsfv/linsolve.hpp"
#include "cnsfv/numerics.hpp"
#include "cnsfv/operators.hpp"
#include "face_iter.hpp"

namespace cnsfv {

namespace {

// Conservative donor-cell transport of every staggered component of q by the
// face field kappa*w over one step of length dt. Own-axis fluxes live at the
// primal cell centers, cross-axis fluxes at the corners between neighbouring
// q faces; both use the average of the two adjacent w faces, so a discretely
// divergence-free w moves momentum without creating or destroying it.
VectorField convect_velocity(const Grid& g, const VectorField& q,
                             const VectorField& w, double kappa, double dt) {
  for (int b = 0; b < g.dim; ++b) {
    double cour = dt * std::abs(kappa) * max_abs_face(g, w, b) / g.spacing(b);
    if (cour > 1.0 + 1e-12)
      throw InvariantError("fluid_step: convective Courant number above 1");
  }

  VectorField out = q;
  const bool per = g.periodic();
  const int ncell[3] = {g.nx, g.ny, g.dim == 3 ? g.nz : 1};

  for (int a = 0; a < g.dim; ++a) {
    ScalarField& o = out.comp(a);
    const ScalarField& qa = q.comp(a);
    const int na = g.cells(a);

    {
      const ScalarField& wa = w.comp(a);
      const double r = dt / g.spacing(a);
      for (int k = 0; k < ncell[2]; ++k)
        for (int j = 0; j < ncell[1]; ++j)
          for (int i = 0; i < ncell[0]; ++i) {
            int lo[3] = {i, j, k};
            int hi[3] = {i, j, k};
            ++hi[a];
            double vel = 0.5 * kappa *
                         (wa(lo[0], lo[1], lo[2]) + wa(hi[0], hi[1], hi[2]));
            if (vel == 0.0) continue;
            double donor = vel > 0.0 ? qa(lo[0], lo[1], lo[2])
                                     : qa(hi[0], hi[1], hi[2]);
            double fl = r * vel * donor;
            if (per || lo[a] >= 1) o(lo[0], lo[1], lo[2]) -= fl;
            if (per) hi[a] = wrap_index(hi[a], na);
            if (per || hi[a] <= na - 1) o(hi[0], hi[1], hi[2]) += fl;
          }
    }

    for (int b = 0; b < g.dim; ++b) {
      if (b == a) continue;
      const ScalarField& wb = w.comp(b);
      const double r = dt / g.spacing(b);
      const int nb = g.cells(b);

      int beg[3] = {0, 0, 0};
      int end[3] = {ncell[0] - 1, ncell[1] - 1, ncell[2] - 1};
      beg[a] = per ? 0 : 1;
      end[a] = na - 1;
      beg[b] = per ? 0 : 1;  // wall corners carry exactly zero velocity
      end[b] = nb - 1;

      for (int k = beg[2]; k <= end[2]; ++k)
        for (int j = beg[1]; j <= end[1]; ++j)
          for (int i = beg[0]; i <= end[0]; ++i) {
            int pos[3] = {i, j, k};
            int ca[3] = {i, j, k};  // cell row below the q face along a
            ca[a] = per ? wrap_index(pos[a] - 1, na) : pos[a] - 1;
            double vel =
                0.5 * kappa *
                (wb(ca[0], ca[1], ca[2]) + wb(pos[0], pos[1], pos[2]));
            if (vel == 0.0) continue;
            int qlo[3] = {i, j, k};
            qlo[b] = per ? wrap_index(pos[b] - 1, nb) : pos[b] - 1;
            double donor = vel > 0.0 ? qa(qlo[0], qlo[1], qlo[2])
                                     : qa(pos[0], pos[1], pos[2]);
            double fl = r * vel * donor;
            o(qlo[0], qlo[1], qlo[2]) -= fl;
            o(pos[0], pos[1], pos[2]) += fl;
          }
    }
  }

  out.sync_wrap(g);
  return out;
}

void add_buoyancy(const Grid& g, const ScalarField& n,
                  const std::array<double, 3>& gphi, double dt,
                  VectorField& u) {
  for (int a = 0; a < g.dim; ++a) {
    if (gphi[a] == 0.0) continue;
    ScalarField& ua = u.comp(a);
    const double s = dt * gphi[a];
    detail::for_each_flux_face(g, a,
                               [&](int fi, int fj, int fk, int li, int lj,
                                   int lk, int hi, int hj, int hk) {
                                 ua(fi, fj, fk) +=
                                     s * 0.5 * (n(li, lj, lk) + n(hi, hj, hk));
                               });
  }
  u.sync_wrap(g);
}

}  // namespace

std::pair<VectorField, ScalarField> project(const Grid& g,
                                            const VectorField& u_star,
                                            double tol_div, int max_iter,
                                            const ScalarField* seed,
                                            int* iterations) {
  if (!(tol_div > 0.0))
    throw std::invalid_argument("project: tol_div must be > 0");
  if (iterations) *iterations = 0;

  ScalarField rhs = divergence(g, u_star);
  double d0 = max_abs_cells(rhs);
  if (d0 <= tol_div) return {u_star, ScalarField::cell_centered(g)};

  SolveStats st;
  ScalarField phi =
      poisson_neumann_solve(g, rhs, tol_div / d0, max_iter, seed, &st);
  if (iterations) *iterations = st.iterations;

  VectorField gp = gradient(g, phi);
  VectorField u = u_star;
  for (int a = 0; a < g.dim; ++a) {
    auto dst = u.comp(a).data();
    auto src = gp.comp(a).data();
    for (std::size_t m = 0; m < dst.size(); ++m) dst[m] -= src[m];
  }
  u.sync_wrap(g);
  return {u, phi};
}

VectorField yosida_smooth(const Grid& g, const VectorField& u, double eps,
                          double tol_div, double tol_helmholtz, int max_iter,
                          FluidWorkspace* ws) {
  if (!(eps > 0.0))
    throw std::invalid_argument("yosida_smooth: eps must be > 0");
  SolveStats st;
  const VectorField* x0 = ws && ws->has_yosida ? &ws->yosida_seed : nullptr;
  VectorField w =
      helmholtz_dirichlet_solve(g, u, eps, tol_helmholtz, max_iter, x0, &st);
  if (ws) {
    ws->yosida_seed = w;
    ws->has_yosida = true;
  }
  return project(g, w, tol_div, max_iter).first;
}

VectorField fluid_step(const Grid& g, const State& s, const ModelParams& p,
                       double dt, const SolverOptions& opt,
                       ScalarField* pressure_out, FluidStepReport* report,
                       FluidWorkspace* ws) {
  p.require_valid();
  if (!(dt > 0.0)) throw std::invalid_argument("fluid_step: dt must be > 0");
  if (s.n.nx() != g.nx || s.n.ny() != g.ny || s.n.nz() != g.nz)
    throw std::invalid_argument("fluid_step: state shape mismatch");

  VectorField u1 = s.u;
  if (p.kappa != 0.0) {
    VectorField v = yosida_smooth(g, s.u, p.eps, opt.tol_project,
                                  opt.tol_helmholtz, opt.max_iter, ws);
    u1 = convect_velocity(g, s.u, v, p.kappa, dt);
  }
  add_buoyancy(g, s.n, p.phi_grad, dt, u1);

  SolveStats hs;
  VectorField u2 = helmholtz_dirichlet_solve(g, u1, dt, opt.tol_helmholtz,
                                             opt.max_iter, &u1, &hs);

  int piters = 0;
  const ScalarField* seed = ws && ws->has_pressure ? &ws->pressure_seed : nullptr;
  auto projected = project(g, u2, opt.tol_project, opt.max_iter, seed, &piters);
  VectorField& u3 = projected.first;
  ScalarField& phi = projected.second;
  if (ws) {
    ws->pressure_seed = phi;
    ws->has_pressure = true;
  }
  if (pressure_out) *pressure_out = phi;

  if (report) {
    report->div_inf = max_abs_cells(divergence(g, u3));
    report->kinetic = 0.5 * l2_sq_faces(g, u3);
    report->enstrophy = velocity_gradient_sq(g, u3);
    report->poisson_iterations = piters;
    report->helmholtz_iterations = hs.iterations;
  }
  return u3;
}

double velocity_gradient_sq(const Grid& g, const VectorField& u) {
  const bool per = g.periodic();
  const double vol = g.cell_volume();
  const int ncell[3] = {g.nx, g.ny, g.dim == 3 ? g.nz : 1};
  KahanSum total;

  for (int a = 0; a < g.dim; ++a) {
    const ScalarField& qa = u.comp(a);
    const double ha = g.spacing(a);
    const int na = g.cells(a);

    // own-axis derivative, one sample per primal cell
    for (int k = 0; k < ncell[2]; ++k)
      for (int j = 0; j < ncell[1]; ++j)
        for (int i = 0; i < ncell[0]; ++i) {
          int lo[3] = {i, j, k};
          int hi[3] = {i, j, k};
          ++hi[a];
          double d = (qa(hi[0], hi[1], hi[2]) - qa(lo[0], lo[1], lo[2])) / ha;
          total.add(vol * d * d);
        }

    // cross-axis derivatives at the corners; wall-normal rows of the
    // component vanish identically and are skipped
    for (int b = 0; b < g.dim; ++b) {
      if (b == a) continue;
      const double hb = g.spacing(b);
      const int nb = g.cells(b);

      int beg[3] = {0, 0, 0};
      int end[3] = {ncell[0] - 1, ncell[1] - 1, ncell[2] - 1};
      beg[a] = per ? 0 : 1;
      end[a] = na - 1;
      beg[b] = per ? 0 : 1;
      end[b] = nb - 1;

      for (int k = beg[2]; k <= end[2]; ++k)
        for (int j = beg[1]; j <= end[1]; ++j)
          for (int i = beg[0]; i <= end[0]; ++i) {
            int pos[3] = {i, j, k};
            int lo[3] = {i, j, k};
            lo[b] = per ? wrap_index(pos[b] - 1, nb) : pos[b] - 1;
            double d =
                (qa(pos[0], pos[1], pos[2]) - qa(lo[0], lo[1], lo[2])) / hb;
            total.add(vol * d * d);
          }

      if (!per) {
        // one-sided shear against the two walls normal to b, half-cell weight
        for (int side = 0; side < 2; ++side) {
          int cbeg[3] = {0, 0, 0};
          int cend[3] = {ncell[0] - 1, ncell[1] - 1, ncell[2] - 1};
          cbeg[a] = 1;
          cend[a] = na - 1;
          cbeg[b] = cend[b] = side == 0 ? 0 : nb - 1;
          for (int k = cbeg[2]; k <= cend[2]; ++k)
            for (int j = cbeg[1]; j <= cend[1]; ++j)
              for (int i = cbeg[0]; i <= cend[0]; ++i) {
                double d = 2.0 * qa(i, j, k) / hb;
                total.add(0.5 * vol * d * d);
              }
        }
      }
    }
  }
  return total.value();
}

}  // namespace cnsfv
