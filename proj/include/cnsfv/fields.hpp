#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cnsfv {

enum class BcMode {
  box,       // no-slip walls for velocity, zero-flux walls for scalars
  periodic,  // all fields wrap; used for solver validation
};

/// Uniform structured grid on [0,lx] x [0,ly] (x [0,lz] when dim == 3).
/// Scalars live at cell centers, velocity components at cell faces (MAC
/// arrangement). Cell (i,j,k) has center ((i+1/2)hx, (j+1/2)hy, (k+1/2)hz).
struct Grid {
  int dim = 2;
  int nx = 0, ny = 0, nz = 1;
  double lx = 1.0, ly = 1.0, lz = 1.0;
  double hx = 0.0, hy = 0.0, hz = 0.0;
  BcMode bc = BcMode::box;

  Grid() = default;
  Grid(int dim, int nx, int ny, int nz, double lx, double ly, double lz,
       BcMode bc);

  static Grid make_2d(int nx, int ny, double lx, double ly,
                      BcMode bc = BcMode::box);
  static Grid make_3d(int nx, int ny, int nz, double lx, double ly, double lz,
                      BcMode bc = BcMode::box);

  long long cell_count() const {
    return static_cast<long long>(nx) * ny * nz;
  }
  double cell_volume() const { return dim == 3 ? hx * hy * hz : hx * hy; }
  double spacing(int axis) const { return axis == 0 ? hx : axis == 1 ? hy : hz; }
  double extent(int axis) const { return axis == 0 ? lx : axis == 1 ? ly : lz; }
  int cells(int axis) const { return axis == 0 ? nx : axis == 1 ? ny : nz; }
  bool periodic() const { return bc == BcMode::periodic; }

  double cell_center(int axis, int index) const {
    return (index + 0.5) * spacing(axis);
  }
  double face_coord(int axis, int index) const { return index * spacing(axis); }
};

/// Dense 3D array of doubles, x-fastest storage. Doubles as the cell-centered
/// scalar field type and as per-component storage for face fields (where one
/// extent is cells+1).
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int nx, int ny, int nz = 1);

  static ScalarField cell_centered(const Grid& g) {
    return ScalarField(g.nx, g.ny, g.nz);
  }

  double operator()(int i, int j, int k = 0) const {
    return v_[index(i, j, k)];
  }
  double& operator()(int i, int j, int k = 0) { return v_[index(i, j, k)]; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx_) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(ny_) * static_cast<std::size_t>(k));
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  std::size_t size() const { return v_.size(); }
  int extent(int axis) const { return axis == 0 ? nx_ : axis == 1 ? ny_ : nz_; }

  std::span<double> data() { return v_; }
  std::span<const double> data() const { return v_; }

  void fill(double value);
  bool same_shape(const ScalarField& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ && nz_ == other.nz_;
  }

 private:
  int nx_ = 0, ny_ = 0, nz_ = 0;
  std::vector<double> v_;
};

/// Face-centered (MAC) vector field. Component `a` is stored on the faces
/// normal to axis `a`, so its extent along `a` is cells+1; the trailing index
/// (i == 0 or i == n) addresses the two wall faces in box mode and the
/// duplicated wrap face in periodic mode (kept equal to face 0).
class VectorField {
 public:
  VectorField() = default;

  static VectorField face_centered(const Grid& g);

  int dim() const { return dim_; }
  ScalarField& comp(int axis) { return comp_[axis]; }
  const ScalarField& comp(int axis) const { return comp_[axis]; }

  double u(int i, int j, int k = 0) const { return comp_[0](i, j, k); }
  double& u(int i, int j, int k = 0) { return comp_[0](i, j, k); }
  double v(int i, int j, int k = 0) const { return comp_[1](i, j, k); }
  double& v(int i, int j, int k = 0) { return comp_[1](i, j, k); }
  double w(int i, int j, int k = 0) const { return comp_[2](i, j, k); }
  double& w(int i, int j, int k = 0) { return comp_[2](i, j, k); }

  void fill(double value);
  bool same_shape(const VectorField& other) const;

  /// Copies face 0 onto the duplicated face `n` of every component
  /// (periodic mode book-keeping; no-op for box grids).
  void sync_wrap(const Grid& g);

 private:
  int dim_ = 0;
  ScalarField comp_[3];
};

std::string to_string(BcMode bc);

}  // namespace cnsfv
