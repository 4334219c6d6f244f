#include "cnsfv/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cnsfv/errors.hpp"
#include "cnsfv/numerics.hpp"

namespace cnsfv {

namespace {

void require_cell_shape(const Grid& g, const ScalarField& f,
                        const char* what) {
  if (f.nx() != g.nx || f.ny() != g.ny || f.nz() != g.nz)
    throw std::invalid_argument(std::string(what) +
                                ": field shape does not match grid");
}

void require_face_shape(const Grid& g, const VectorField& f,
                        const char* what) {
  bool ok = f.dim() == g.dim && f.comp(0).nx() == g.nx + 1 &&
            f.comp(0).ny() == g.ny && f.comp(0).nz() == g.nz &&
            f.comp(1).nx() == g.nx && f.comp(1).ny() == g.ny + 1 &&
            f.comp(1).nz() == g.nz;
  if (ok && g.dim == 3)
    ok = f.comp(2).nx() == g.nx && f.comp(2).ny() == g.ny &&
         f.comp(2).nz() == g.nz + 1;
  if (!ok)
    throw std::invalid_argument(std::string(what) +
                                ": face field shape does not match grid");
}

}  // namespace

VectorField gradient(const Grid& g, const ScalarField& c) {
  require_cell_shape(g, c, "gradient");
  VectorField out = VectorField::face_centered(g);
  const bool per = g.periodic();

  ScalarField& gx = out.comp(0);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j) {
      if (per) {
        for (int i = 0; i < g.nx; ++i)
          gx(i, j, k) = (c(i, j, k) - c(wrap_index(i - 1, g.nx), j, k)) / g.hx;
      } else {
        for (int i = 1; i < g.nx; ++i)
          gx(i, j, k) = (c(i, j, k) - c(i - 1, j, k)) / g.hx;
      }
    }

  ScalarField& gy = out.comp(1);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      if (per) {
        for (int j = 0; j < g.ny; ++j)
          gy(i, j, k) = (c(i, j, k) - c(i, wrap_index(j - 1, g.ny), k)) / g.hy;
      } else {
        for (int j = 1; j < g.ny; ++j)
          gy(i, j, k) = (c(i, j, k) - c(i, j - 1, k)) / g.hy;
      }
    }

  if (g.dim == 3) {
    ScalarField& gz = out.comp(2);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (per) {
          for (int k = 0; k < g.nz; ++k)
            gz(i, j, k) =
                (c(i, j, k) - c(i, j, wrap_index(k - 1, g.nz))) / g.hz;
        } else {
          for (int k = 1; k < g.nz; ++k)
            gz(i, j, k) = (c(i, j, k) - c(i, j, k - 1)) / g.hz;
        }
      }
  }

  out.sync_wrap(g);
  return out;
}

ScalarField divergence(const Grid& g, const VectorField& f) {
  require_face_shape(g, f, "divergence");
  ScalarField out = ScalarField::cell_centered(g);
  const ScalarField& fx = f.comp(0);
  const ScalarField& fy = f.comp(1);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double d = (fx(i + 1, j, k) - fx(i, j, k)) / g.hx +
                   (fy(i, j + 1, k) - fy(i, j, k)) / g.hy;
        if (g.dim == 3) {
          const ScalarField& fz = f.comp(2);
          d += (fz(i, j, k + 1) - fz(i, j, k)) / g.hz;
        }
        out(i, j, k) = d;
      }
  return out;
}

void apply_scalar_laplacian(const Grid& g, const ScalarField& x,
                            ScalarField& out) {
  require_cell_shape(g, x, "apply_scalar_laplacian");
  require_cell_shape(g, out, "apply_scalar_laplacian");
  const bool per = g.periodic();
  const double ihx2 = 1.0 / (g.hx * g.hx);
  const double ihy2 = 1.0 / (g.hy * g.hy);
  const double ihz2 = g.dim == 3 ? 1.0 / (g.hz * g.hz) : 0.0;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double v = x(i, j, k);
        double acc = 0.0;
        if (per) {
          acc += (x(wrap_index(i - 1, g.nx), j, k) - 2.0 * v +
                  x(wrap_index(i + 1, g.nx), j, k)) *
                 ihx2;
          acc += (x(i, wrap_index(j - 1, g.ny), k) - 2.0 * v +
                  x(i, wrap_index(j + 1, g.ny), k)) *
                 ihy2;
          if (g.dim == 3)
            acc += (x(i, j, wrap_index(k - 1, g.nz)) - 2.0 * v +
                    x(i, j, wrap_index(k + 1, g.nz))) *
                   ihz2;
        } else {
          if (i > 0) acc += (x(i - 1, j, k) - v) * ihx2;
          if (i < g.nx - 1) acc += (x(i + 1, j, k) - v) * ihx2;
          if (j > 0) acc += (x(i, j - 1, k) - v) * ihy2;
          if (j < g.ny - 1) acc += (x(i, j + 1, k) - v) * ihy2;
          if (g.dim == 3) {
            if (k > 0) acc += (x(i, j, k - 1) - v) * ihz2;
            if (k < g.nz - 1) acc += (x(i, j, k + 1) - v) * ihz2;
          }
        }
        out(i, j, k) = acc;
      }
}

ScalarField upwind_advect(const Grid& g, const ScalarField& q,
                          const VectorField& vel, double dt) {
  require_cell_shape(g, q, "upwind_advect");
  require_face_shape(g, vel, "upwind_advect");
  if (!(dt > 0.0)) throw std::invalid_argument("upwind_advect: dt must be > 0");

  for (int a = 0; a < g.dim; ++a) {
    double cour = dt * max_abs_face(g, vel, a) / g.spacing(a);
    if (cour > 1.0 + 1e-12)
      throw InvariantError("upwind_advect: Courant number above 1 on axis " +
                           std::to_string(a));
  }
  if (!g.periodic()) {
    const ScalarField& fx = vel.comp(0);
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        if (fx(0, j, k) != 0.0 || fx(g.nx, j, k) != 0.0)
          throw std::invalid_argument("upwind_advect: nonzero wall velocity");
    const ScalarField& fy = vel.comp(1);
    for (int k = 0; k < g.nz; ++k)
      for (int i = 0; i < g.nx; ++i)
        if (fy(i, 0, k) != 0.0 || fy(i, g.ny, k) != 0.0)
          throw std::invalid_argument("upwind_advect: nonzero wall velocity");
    if (g.dim == 3) {
      const ScalarField& fz = vel.comp(2);
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          if (fz(i, j, 0) != 0.0 || fz(i, j, g.nz) != 0.0)
            throw std::invalid_argument("upwind_advect: nonzero wall velocity");
    }
  }

  ScalarField out = q;
  const bool per = g.periodic();

  // x faces
  {
    const ScalarField& vx = vel.comp(0);
    const double r = dt / g.hx;
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j) {
        int f0 = per ? 0 : 1;
        for (int f = f0; f < g.nx; ++f) {
          double v = vx(f, j, k);
          if (v == 0.0) continue;
          int lo = per ? wrap_index(f - 1, g.nx) : f - 1;
          double flux = v > 0.0 ? v * q(lo, j, k) : v * q(f, j, k);
          out(lo, j, k) -= r * flux;
          out(f, j, k) += r * flux;
        }
      }
  }
  // y faces
  {
    const ScalarField& vy = vel.comp(1);
    const double r = dt / g.hy;
    for (int k = 0; k < g.nz; ++k)
      for (int i = 0; i < g.nx; ++i) {
        int f0 = per ? 0 : 1;
        for (int f = f0; f < g.ny; ++f) {
          double v = vy(i, f, k);
          if (v == 0.0) continue;
          int lo = per ? wrap_index(f - 1, g.ny) : f - 1;
          double flux = v > 0.0 ? v * q(i, lo, k) : v * q(i, f, k);
          out(i, lo, k) -= r * flux;
          out(i, f, k) += r * flux;
        }
      }
  }
  if (g.dim == 3) {
    const ScalarField& vz = vel.comp(2);
    const double r = dt / g.hz;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        int f0 = per ? 0 : 1;
        for (int f = f0; f < g.nz; ++f) {
          double v = vz(i, j, f);
          if (v == 0.0) continue;
          int lo = per ? wrap_index(f - 1, g.nz) : f - 1;
          double flux = v > 0.0 ? v * q(i, j, lo) : v * q(i, j, f);
          out(i, j, lo) -= r * flux;
          out(i, j, f) += r * flux;
        }
      }
  }
  return out;
}

double integrate_cells(const Grid& g, const ScalarField& f) {
  require_cell_shape(g, f, "integrate_cells");
  KahanSum s;
  for (double v : f.data()) s.add(v);
  return s.value() * g.cell_volume();
}

double mean_cells(const Grid& g, const ScalarField& f) {
  return integrate_cells(g, f) /
         (g.cell_volume() * static_cast<double>(g.cell_count()));
}

double min_cells(const ScalarField& f) {
  double m = f.data()[0];
  for (double v : f.data()) m = std::min(m, v);
  return m;
}

double max_cells(const ScalarField& f) {
  double m = f.data()[0];
  for (double v : f.data()) m = std::max(m, v);
  return m;
}

double max_abs_cells(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double l1_diff_cells(const Grid& g, const ScalarField& a,
                     const ScalarField& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("l1_diff_cells: shape mismatch");
  KahanSum s;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) s.add(std::abs(da[i] - db[i]));
  return s.value() * g.cell_volume();
}

double l2_diff_cells(const Grid& g, const ScalarField& a,
                     const ScalarField& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("l2_diff_cells: shape mismatch");
  KahanSum s;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    double d = da[i] - db[i];
    s.add(d * d);
  }
  return std::sqrt(s.value() * g.cell_volume());
}

namespace {

// weight of face index f on an axis with n cells: periodic grids own faces
// 0..n-1; box grids count wall faces at half a cell.
double face_weight(bool periodic, int f, int n) {
  if (periodic) return f < n ? 1.0 : 0.0;
  return (f == 0 || f == n) ? 0.5 : 1.0;
}

template <class Fn>
void for_each_face(const Grid& g, int axis, Fn&& fn) {
  int ni = axis == 0 ? g.nx + 1 : g.nx;
  int nj = axis == 1 ? g.ny + 1 : g.ny;
  int nk = axis == 2 ? g.nz + 1 : g.nz;
  if (g.dim == 2) nk = 1;
  for (int k = 0; k < nk; ++k)
    for (int j = 0; j < nj; ++j)
      for (int i = 0; i < ni; ++i) fn(i, j, k);
}

}  // namespace

double l2_sq_faces(const Grid& g, const VectorField& v) {
  require_face_shape(g, v, "l2_sq_faces");
  const bool per = g.periodic();
  KahanSum s;
  for (int a = 0; a < g.dim; ++a) {
    const ScalarField& c = v.comp(a);
    int n = g.cells(a);
    for_each_face(g, a, [&](int i, int j, int k) {
      int f = a == 0 ? i : a == 1 ? j : k;
      double w = face_weight(per, f, n);
      if (w == 0.0) return;
      double x = c(i, j, k);
      s.add(w * x * x);
    });
  }
  return s.value() * g.cell_volume();
}

double l2_diff_faces(const Grid& g, const VectorField& a,
                     const VectorField& b) {
  require_face_shape(g, a, "l2_diff_faces");
  require_face_shape(g, b, "l2_diff_faces");
  const bool per = g.periodic();
  KahanSum s;
  for (int ax = 0; ax < g.dim; ++ax) {
    const ScalarField& ca = a.comp(ax);
    const ScalarField& cb = b.comp(ax);
    int n = g.cells(ax);
    for_each_face(g, ax, [&](int i, int j, int k) {
      int f = ax == 0 ? i : ax == 1 ? j : k;
      double w = face_weight(per, f, n);
      if (w == 0.0) return;
      double d = ca(i, j, k) - cb(i, j, k);
      s.add(w * d * d);
    });
  }
  return std::sqrt(s.value() * g.cell_volume());
}

double max_abs_face(const Grid& g, const VectorField& v, int axis) {
  require_face_shape(g, v, "max_abs_face");
  const ScalarField& c = v.comp(axis);
  const bool per = g.periodic();
  int n = g.cells(axis);
  double m = 0.0;
  for_each_face(g, axis, [&](int i, int j, int k) {
    int f = axis == 0 ? i : axis == 1 ? j : k;
    if (per && f >= n) return;
    m = std::max(m, std::abs(c(i, j, k)));
  });
  return m;
}

}  // namespace cnsfv
