#include "cnsfv/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cnsfv/errors.hpp"
#include "cnsfv/operators.hpp"
#include "face_iter.hpp"

namespace cnsfv {
using detail::for_each_flux_face;

State State::zeros(const Grid& g) {
  State s;
  s.n = ScalarField::cell_centered(g);
  s.c = ScalarField::cell_centered(g);
  s.p = ScalarField::cell_centered(g);
  s.u = VectorField::face_centered(g);
  return s;
}

namespace {

void require_cells(const Grid& g, const ScalarField& f, const char* what) {
  if (f.nx() != g.nx || f.ny() != g.ny || f.nz() != g.nz)
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

}  // namespace

VectorField chemotaxis_flux(const Grid& g, const ScalarField& n,
                            const ScalarField& c, const ModelParams& p) {
  require_cells(g, n, "chemotaxis_flux");
  require_cells(g, c, "chemotaxis_flux");
  p.require_valid();
  VectorField flux = VectorField::face_centered(g);
  VectorField gc = gradient(g, c);
  for (int a = 0; a < g.dim; ++a) {
    ScalarField& out = flux.comp(a);
    const ScalarField& dc = gc.comp(a);
    const double eps = p.eps;
    for_each_flux_face(g, a, [&](int fi, int fj, int fk, int li, int lj,
                                 int lk, int hi, int hj, int hk) {
      double grad = dc(fi, fj, fk);
      if (grad == 0.0) return;
      double cf = 0.5 * (c(li, lj, lk) + c(hi, hj, hk));
      double drift = p.kinetics.chi(cf) * grad;
      double nd = drift > 0.0 ? n(li, lj, lk) : n(hi, hj, hk);
      out(fi, fj, fk) = drift * (nd / (1.0 + eps * nd));
    });
  }
  flux.sync_wrap(g);
  return flux;
}

VectorField diffusive_flux_n(const Grid& g, const ScalarField& n,
                             const ModelParams& p) {
  require_cells(g, n, "diffusive_flux_n");
  p.require_valid();
  VectorField flux = VectorField::face_centered(g);
  for (int a = 0; a < g.dim; ++a) {
    ScalarField& out = flux.comp(a);
    const double h = g.spacing(a);
    for_each_flux_face(g, a, [&](int fi, int fj, int fk, int li, int lj,
                                 int lk, int hi, int hj, int hk) {
      double nl = n(li, lj, lk), nh = n(hi, hj, hk);
      double grad = (nh - nl) / h;
      if (grad == 0.0) return;
      out(fi, fj, fk) = D_eps(p, 0.5 * (nl + nh)) * grad;
    });
  }
  flux.sync_wrap(g);
  return flux;
}

ScalarField update_n(const Grid& g, const State& s, const ModelParams& p,
                     double dt) {
  require_cells(g, s.n, "update_n");
  require_cells(g, s.c, "update_n");
  p.require_valid();
  if (!(dt > 0.0)) throw std::invalid_argument("update_n: dt must be > 0");

  for (int a = 0; a < g.dim; ++a) {
    double cour = dt * max_abs_face(g, s.u, a) / g.spacing(a);
    if (cour > 1.0 + 1e-12)
      throw InvariantError("update_n: advective Courant number above 1");
  }

  VectorField chem = chemotaxis_flux(g, s.n, s.c, p);
  VectorField diff = diffusive_flux_n(g, s.n, p);

  ScalarField out = s.n;
  for (int a = 0; a < g.dim; ++a) {
    const ScalarField& ua = s.u.comp(a);
    const ScalarField& ch = chem.comp(a);
    const ScalarField& df = diff.comp(a);
    const double r = dt / g.spacing(a);
    for_each_flux_face(g, a, [&](int fi, int fj, int fk, int li, int lj,
                                 int lk, int hi, int hj, int hk) {
      double uv = ua(fi, fj, fk);
      double adv =
          uv > 0.0 ? uv * s.n(li, lj, lk) : uv < 0.0 ? uv * s.n(hi, hj, hk) : 0.0;
      double total = adv + ch(fi, fj, fk) - df(fi, fj, fk);
      if (total == 0.0) return;
      out(li, lj, lk) -= r * total;
      out(hi, hj, hk) += r * total;
    });
  }

  double mn = min_cells(out);
  if (mn < -1e-13)
    throw InvariantError("update_n: negativity " + std::to_string(mn) +
                         " exceeds round-off band (CFL/flux bug)");
  if (mn < 0.0)
    for (double& v : out.data())
      if (v < 0.0) v = 0.0;
  return out;
}

ScalarField update_c(const Grid& g, const State& s, const ModelParams& p,
                     double dt, const SolverOptions& opt) {
  require_cells(g, s.c, "update_c");
  require_cells(g, s.n, "update_c");
  p.require_valid();
  if (!(dt > 0.0)) throw std::invalid_argument("update_c: dt must be > 0");

  ScalarField adv = upwind_advect(g, s.c, s.u, dt);
  ScalarField dif = helmholtz_neumann_solve(g, adv, dt, opt.tol_scalar,
                                            opt.max_iter, &adv);

  // The solve is an M-matrix inverse: anything below zero by more than the
  // solver tolerance is a bug, the rest is round-off.
  double band = 1e-12 * std::max(1.0, max_abs_cells(adv));
  double mn = min_cells(dif);
  if (mn < -band)
    throw InvariantError("update_c: maximum principle violated by " +
                         std::to_string(mn));
  if (mn < 0.0)
    for (double& v : dif.data())
      if (v < 0.0) v = 0.0;

  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double cs = dif(i, j, k);
        double rate = F_eps(p.eps, s.n(i, j, k)) * p.kinetics.lambda(cs);
        dif(i, j, k) = cs / (1.0 + dt * rate);
      }
  return dif;
}

double cfl_dt(const Grid& g, const State& s, const ModelParams& p,
              double safety) {
  require_cells(g, s.n, "cfl_dt");
  require_cells(g, s.c, "cfl_dt");
  p.require_valid();
  if (!(safety > 0.0) || safety > 1.0)
    throw std::invalid_argument("cfl_dt: safety must lie in (0,1]");

  double bound = 1e300;

  for (int a = 0; a < g.dim; ++a) {
    double umax = max_abs_face(g, s.u, a);
    if (umax > 0.0) bound = std::min(bound, g.spacing(a) / umax);
  }

  double dmax = 0.0;
  for (double v : s.n.data()) dmax = std::max(dmax, D_eps(p, v));
  double sum_ih2 = 0.0;
  for (int a = 0; a < g.dim; ++a)
    sum_ih2 += 1.0 / (g.spacing(a) * g.spacing(a));
  bound = std::min(bound, 1.0 / (2.0 * dmax * sum_ih2));

  VectorField gc = gradient(g, s.c);
  for (int a = 0; a < g.dim; ++a) {
    const ScalarField& dc = gc.comp(a);
    double drift_max = 0.0;
    for_each_flux_face(g, a, [&](int fi, int fj, int fk, int li, int lj,
                                 int lk, int hi, int hj, int hk) {
      double grad = dc(fi, fj, fk);
      if (grad == 0.0) return;
      double cf = 0.5 * (s.c(li, lj, lk) + s.c(hi, hj, hk));
      double fp = 1.0 / (1.0 + p.eps * std::min(s.n(li, lj, lk),
                                                s.n(hi, hj, hk)));
      drift_max = std::max(drift_max,
                           std::abs(fp * p.kinetics.chi(cf) * grad));
    });
    if (drift_max > 0.0) bound = std::min(bound, g.spacing(a) / drift_max);
  }

  return safety * bound;
}

double positivity_dt_bound(const Grid& g, const State& s,
                           const ModelParams& p) {
  require_cells(g, s.n, "positivity_dt_bound");
  require_cells(g, s.c, "positivity_dt_bound");
  p.require_valid();

  VectorField gc = gradient(g, s.c);
  ScalarField rate = ScalarField::cell_centered(g);

  for (int a = 0; a < g.dim; ++a) {
    const ScalarField& ua = s.u.comp(a);
    const ScalarField& dc = gc.comp(a);
    const double h = g.spacing(a);
    for_each_flux_face(g, a, [&](int fi, int fj, int fk, int li, int lj,
                                 int lk, int hi, int hj, int hk) {
      double uv = ua(fi, fj, fk);
      double nl = s.n(li, lj, lk), nh = s.n(hi, hj, hk);
      double dcoef = D_eps(p, 0.5 * (nl + nh)) / (h * h);
      rate(li, lj, lk) += std::max(uv, 0.0) / h + dcoef;
      rate(hi, hj, hk) += std::max(-uv, 0.0) / h + dcoef;
      double grad = dc(fi, fj, fk);
      if (grad != 0.0) {
        double cf = 0.5 * (s.c(li, lj, lk) + s.c(hi, hj, hk));
        double drift = p.kinetics.chi(cf) * grad;
        // the chemotactic loss of the donor cell is at most
        // drift * F'(n_donor) * n_donor, an effective outflow velocity.
        if (drift > 0.0)
          rate(li, lj, lk) += drift * F_eps_prime(p.eps, nl) / h;
        else
          rate(hi, hj, hk) += -drift * F_eps_prime(p.eps, nh) / h;
      }
    });
  }

  double rmax = max_cells(rate);
  return rmax > 0.0 ? 1.0 / rmax : 1e300;
}

}  // namespace cnsfv
