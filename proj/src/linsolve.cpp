#include "cnsfv/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cnsfv/errors.hpp"
#include "cnsfv/numerics.hpp"
#include "cnsfv/operators.hpp"

namespace cnsfv {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct CgOutcome {
  int iterations = 0;
  double residual_inf = 0.0;
  bool converged = false;
};

/// Plain CG with periodic true-residual refresh; stops on the infinity norm
/// of the (recomputed) residual.
CgOutcome conjugate_gradient(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>&
        apply,
    const std::vector<double>& b, std::vector<double>& x, double tol_abs,
    int max_iter) {
  const std::size_t n = b.size();
  std::vector<double> r(n), p(n), ap(n);

  apply(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  double rinf = inf_norm(r);
  if (rinf <= tol_abs) return {0, rinf, true};

  p = r;
  double rr = dot(r, r);
  for (int it = 1; it <= max_iter; ++it) {
    apply(p, ap);
    double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      // Search direction left the positive-definite subspace (stagnation).
      return {it, inf_norm(r), false};
    }
    double alpha = rr / pap;
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    if (it % 64 == 0) {
      apply(x, ap);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
    }
    rinf = inf_norm(r);
    if (rinf <= tol_abs) {
      apply(x, ap);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
      rinf = inf_norm(r);
      if (rinf <= tol_abs) return {it, rinf, true};
    }
    double rr_new = dot(r, r);
    double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  return {max_iter, rinf, false};
}

double compensated_mean(const std::vector<double>& v) {
  KahanSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

// Raw cell-grid Laplacian (zero-flux walls / wrap-around), x-fastest layout.
struct CellLaplacian {
  const Grid& g;
  void operator()(const std::vector<double>& x, std::vector<double>& out) const {
    const int nx = g.nx, ny = g.ny, nz = g.nz;
    const bool per = g.periodic();
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    const double ihz2 = g.dim == 3 ? 1.0 / (g.hz * g.hz) : 0.0;
    auto at = [&](int i, int j, int k) -> double {
      return x[static_cast<std::size_t>(i) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(j) +
                    static_cast<std::size_t>(ny) * static_cast<std::size_t>(k))];
    };
    std::size_t idx = 0;
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i, ++idx) {
          double v = x[idx];
          double acc = 0.0;
          if (per) {
            acc += (at(wrap_index(i - 1, nx), j, k) - 2.0 * v +
                    at(wrap_index(i + 1, nx), j, k)) *
                   ihx2;
            acc += (at(i, wrap_index(j - 1, ny), k) - 2.0 * v +
                    at(i, wrap_index(j + 1, ny), k)) *
                   ihy2;
            if (g.dim == 3)
              acc += (at(i, j, wrap_index(k - 1, nz)) - 2.0 * v +
                      at(i, j, wrap_index(k + 1, nz))) *
                     ihz2;
          } else {
            if (i > 0) acc += (at(i - 1, j, k) - v) * ihx2;
            if (i < nx - 1) acc += (at(i + 1, j, k) - v) * ihx2;
            if (j > 0) acc += (at(i, j - 1, k) - v) * ihy2;
            if (j < ny - 1) acc += (at(i, j + 1, k) - v) * ihy2;
            if (g.dim == 3) {
              if (k > 0) acc += (at(i, j, k - 1) - v) * ihz2;
              if (k < nz - 1) acc += (at(i, j, k + 1) - v) * ihz2;
            }
          }
          out[idx] = acc;
        }
  }
};

// One staggered velocity component as a packed unknown vector. Box mode packs
// the interior faces along the component's own axis (walls are pinned to 0);
// periodic mode packs the owned faces 0..n-1 on every axis.
struct ComponentGrid {
  const Grid& g;
  int axis;
  int ei, ej, ek;   // packed extents
  int oi, oj, ok;   // offset of packed origin inside the stored array

  ComponentGrid(const Grid& grid, int a) : g(grid), axis(a) {
    const bool per = g.periodic();
    ei = g.nx + (axis == 0 && !per ? -1 : 0);
    ej = g.ny + (axis == 1 && !per ? -1 : 0);
    ek = g.dim == 3 ? g.nz + (axis == 2 && !per ? -1 : 0) : 1;
    oi = (axis == 0 && !per) ? 1 : 0;
    oj = (axis == 1 && !per) ? 1 : 0;
    ok = (axis == 2 && !per) ? 1 : 0;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(ei) * ej * ek;
  }
  std::size_t pidx(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(ei) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(ej) * static_cast<std::size_t>(k));
  }

  void pack(const ScalarField& f, std::vector<double>& v) const {
    v.resize(size());
    for (int k = 0; k < ek; ++k)
      for (int j = 0; j < ej; ++j)
        for (int i = 0; i < ei; ++i)
          v[pidx(i, j, k)] = f(i + oi, j + oj, k + ok);
  }

  void unpack(const std::vector<double>& v, ScalarField& f) const {
    f.fill(0.0);
    for (int k = 0; k < ek; ++k)
      for (int j = 0; j < ej; ++j)
        for (int i = 0; i < ei; ++i)
          f(i + oi, j + oj, k + ok) = v[pidx(i, j, k)];
  }

  // (I - sigma*Lap) on the packed unknowns. Along the component's own axis a
  // wall is a true zero node; along the other axes the wall sits half a
  // spacing beyond the last face and enters as a reflected ghost (-value).
  void apply_helmholtz(double sigma, const std::vector<double>& x,
                       std::vector<double>& out) const {
    const bool per = g.periodic();
    const double ih2[3] = {1.0 / (g.hx * g.hx), 1.0 / (g.hy * g.hy),
                           g.dim == 3 ? 1.0 / (g.hz * g.hz) : 0.0};
    const int ext[3] = {ei, ej, ek};
    std::size_t idx = 0;
    for (int k = 0; k < ek; ++k)
      for (int j = 0; j < ej; ++j)
        for (int i = 0; i < ei; ++i, ++idx) {
          const double v = x[idx];
          const int pos[3] = {i, j, k};
          double lap = 0.0;
          int ndirs = g.dim;
          for (int d = 0; d < ndirs; ++d) {
            int lo[3] = {i, j, k}, hi[3] = {i, j, k};
            lo[d] -= 1;
            hi[d] += 1;
            double vlo, vhi;
            if (per) {
              lo[d] = wrap_index(lo[d], ext[d]);
              hi[d] = wrap_index(hi[d], ext[d]);
              vlo = x[pidx(lo[0], lo[1], lo[2])];
              vhi = x[pidx(hi[0], hi[1], hi[2])];
            } else if (d == axis) {
              vlo = pos[d] > 0 ? x[pidx(lo[0], lo[1], lo[2])] : 0.0;
              vhi = pos[d] < ext[d] - 1 ? x[pidx(hi[0], hi[1], hi[2])] : 0.0;
            } else {
              vlo = pos[d] > 0 ? x[pidx(lo[0], lo[1], lo[2])] : -v;
              vhi = pos[d] < ext[d] - 1 ? x[pidx(hi[0], hi[1], hi[2])] : -v;
            }
            lap += (vlo - 2.0 * v + vhi) * ih2[d];
          }
          out[idx] = v - sigma * lap;
        }
  }
};

}  // namespace

ScalarField poisson_neumann_solve(const Grid& g, const ScalarField& rhs,
                                  double tol, int max_iter,
                                  const ScalarField* x0, SolveStats* stats) {
  if (rhs.nx() != g.nx || rhs.ny() != g.ny || rhs.nz() != g.nz)
    throw std::invalid_argument("poisson_neumann_solve: rhs shape mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("poisson_neumann_solve: tol");

  std::vector<double> b(rhs.data().begin(), rhs.data().end());
  double scale = inf_norm(b);
  ScalarField phi = ScalarField::cell_centered(g);
  if (scale == 0.0) {
    if (stats) *stats = {0, 0.0};
    return phi;
  }
  double mean = compensated_mean(b);
  if (std::abs(mean) > 1e-10 * scale)
    throw InvariantError(
        "poisson_neumann_solve: incompatible rhs (nonzero mean " +
        std::to_string(mean) + ")");
  for (double& v : b) v = -(v - mean);

  std::vector<double> x(b.size(), 0.0);
  if (x0) {
    if (!x0->same_shape(rhs))
      throw std::invalid_argument("poisson_neumann_solve: x0 shape mismatch");
    x.assign(x0->data().begin(), x0->data().end());
    double m0 = compensated_mean(x);
    for (double& v : x) v -= m0;
  }

  CellLaplacian lap{g};
  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    lap(in, out);
    for (double& v : out) v = -v;
  };
  CgOutcome res = conjugate_gradient(apply, b, x, tol * scale, max_iter);
  if (!res.converged)
    throw SolverError("poisson_neumann_solve: no convergence after " +
                          std::to_string(res.iterations) + " iterations",
                      res.iterations, res.residual_inf);

  double mphi = compensated_mean(x);
  for (std::size_t i = 0; i < x.size(); ++i) phi.data()[i] = x[i] - mphi;
  if (stats) *stats = {res.iterations, res.residual_inf};
  return phi;
}

VectorField helmholtz_dirichlet_solve(const Grid& g, const VectorField& rhs,
                                      double sigma, double tol, int max_iter,
                                      const VectorField* x0,
                                      SolveStats* stats) {
  if (rhs.dim() != g.dim)
    throw std::invalid_argument("helmholtz_dirichlet_solve: dim mismatch");
  if (!(sigma >= 0.0) || !(tol > 0.0))
    throw std::invalid_argument("helmholtz_dirichlet_solve: bad sigma or tol");

  VectorField w = VectorField::face_centered(g);
  int iters = 0;
  double res_inf = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    ComponentGrid cg(g, a);
    std::vector<double> b;
    cg.pack(rhs.comp(a), b);
    double scale = inf_norm(b);
    std::vector<double> x(b.size(), 0.0);
    if (scale > 0.0) {
      if (x0) cg.pack(x0->comp(a), x);
      auto apply = [&](const std::vector<double>& in,
                       std::vector<double>& out) {
        cg.apply_helmholtz(sigma, in, out);
      };
      CgOutcome res = conjugate_gradient(apply, b, x, tol * scale, max_iter);
      if (!res.converged)
        throw SolverError("helmholtz_dirichlet_solve: no convergence on axis " +
                              std::to_string(a),
                          res.iterations, res.residual_inf);
      iters += res.iterations;
      res_inf = std::max(res_inf, res.residual_inf);
    }
    cg.unpack(x, w.comp(a));
  }
  w.sync_wrap(g);
  if (stats) *stats = {iters, res_inf};
  return w;
}

ScalarField helmholtz_neumann_solve(const Grid& g, const ScalarField& rhs,
                                    double sigma, double tol, int max_iter,
                                    const ScalarField* x0, SolveStats* stats) {
  if (rhs.nx() != g.nx || rhs.ny() != g.ny || rhs.nz() != g.nz)
    throw std::invalid_argument("helmholtz_neumann_solve: rhs shape mismatch");
  if (!(sigma >= 0.0) || !(tol > 0.0))
    throw std::invalid_argument("helmholtz_neumann_solve: bad sigma or tol");

  std::vector<double> b(rhs.data().begin(), rhs.data().end());
  double scale = inf_norm(b);
  ScalarField out = ScalarField::cell_centered(g);
  if (scale == 0.0) {
    if (stats) *stats = {0, 0.0};
    return out;
  }
  std::vector<double> x(b.size(), 0.0);
  if (x0) x.assign(x0->data().begin(), x0->data().end());

  CellLaplacian lap{g};
  auto apply = [&](const std::vector<double>& in, std::vector<double>& o) {
    lap(in, o);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = in[i] - sigma * o[i];
  };
  CgOutcome res = conjugate_gradient(apply, b, x, tol * scale, max_iter);
  if (!res.converged)
    throw SolverError("helmholtz_neumann_solve: no convergence",
                      res.iterations, res.residual_inf);
  std::copy(x.begin(), x.end(), out.data().begin());
  if (stats) *stats = {res.iterations, res.residual_inf};
  return out;
}

}  // namespace cnsfv
