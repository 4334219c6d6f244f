#include "cnsfv/fields.hpp"

#include <algorithm>
#include <stdexcept>

namespace cnsfv {

Grid::Grid(int dim_, int nx_, int ny_, int nz_, double lx_, double ly_,
           double lz_, BcMode bc_)
    : dim(dim_), nx(nx_), ny(ny_), nz(nz_), lx(lx_), ly(ly_), lz(lz_),
      bc(bc_) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("grid: dim must be 2 or 3");
  if (dim == 2 && nz != 1) throw std::invalid_argument("grid: nz must be 1 in 2D");
  if (nx < 4 || ny < 4 || (dim == 3 && nz < 4))
    throw std::invalid_argument("grid: need at least 4 cells per axis");
  if (!(lx > 0.0) || !(ly > 0.0) || (dim == 3 && !(lz > 0.0)))
    throw std::invalid_argument("grid: extents must be positive");
  hx = lx / nx;
  hy = ly / ny;
  hz = dim == 3 ? lz / nz : 0.0;
}

Grid Grid::make_2d(int nx, int ny, double lx, double ly, BcMode bc) {
  return Grid(2, nx, ny, 1, lx, ly, 1.0, bc);
}

Grid Grid::make_3d(int nx, int ny, int nz, double lx, double ly, double lz,
                   BcMode bc) {
  return Grid(3, nx, ny, nz, lx, ly, lz, bc);
}

ScalarField::ScalarField(int nx, int ny, int nz) : nx_(nx), ny_(ny), nz_(nz) {
  if (nx <= 0 || ny <= 0 || nz <= 0)
    throw std::invalid_argument("field: extents must be positive");
  v_.assign(static_cast<std::size_t>(nx) * ny * nz, 0.0);
}

void ScalarField::fill(double value) {
  std::fill(v_.begin(), v_.end(), value);
}

VectorField VectorField::face_centered(const Grid& g) {
  VectorField f;
  f.dim_ = g.dim;
  f.comp_[0] = ScalarField(g.nx + 1, g.ny, g.nz);
  f.comp_[1] = ScalarField(g.nx, g.ny + 1, g.nz);
  if (g.dim == 3) f.comp_[2] = ScalarField(g.nx, g.ny, g.nz + 1);
  return f;
}

void VectorField::fill(double value) {
  for (int a = 0; a < dim_; ++a) comp_[a].fill(value);
}

bool VectorField::same_shape(const VectorField& other) const {
  if (dim_ != other.dim_) return false;
  for (int a = 0; a < dim_; ++a)
    if (!comp_[a].same_shape(other.comp_[a])) return false;
  return true;
}

void VectorField::sync_wrap(const Grid& g) {
  if (!g.periodic()) return;
  ScalarField& ux = comp_[0];
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j) ux(g.nx, j, k) = ux(0, j, k);
  ScalarField& uy = comp_[1];
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) uy(i, g.ny, k) = uy(i, 0, k);
  if (dim_ == 3) {
    ScalarField& uz = comp_[2];
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) uz(i, j, g.nz) = uz(i, j, 0);
  }
}

std::string to_string(BcMode bc) {
  return bc == BcMode::box ? "box" : "periodic";
}

}  // namespace cnsfv
