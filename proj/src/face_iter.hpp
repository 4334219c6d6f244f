#pragma once

#include "cnsfv/fields.hpp"
#include "cnsfv/operators.hpp"

namespace cnsfv {
namespace detail {

/// Applies fn(face triple, lower-cell triple, upper-cell triple) on every
/// non-wall face of the given axis; periodic grids visit the owned faces
/// 0..n-1 with the lower cell wrapping.
template <class Fn>
void for_each_flux_face(const Grid& g, int axis, Fn&& fn) {
  const bool per = g.periodic();
  const int n = g.cells(axis);
  const int f_lo = per ? 0 : 1;
  if (axis == 0) {
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int f = f_lo; f < n; ++f) {
          int lo = per ? wrap_index(f - 1, n) : f - 1;
          fn(f, j, k, lo, j, k, f, j, k);
        }
  } else if (axis == 1) {
    for (int k = 0; k < g.nz; ++k)
      for (int f = f_lo; f < n; ++f)
        for (int i = 0; i < g.nx; ++i) {
          int lo = per ? wrap_index(f - 1, n) : f - 1;
          fn(i, f, k, i, lo, k, i, f, k);
        }
  } else {
    for (int f = f_lo; f < n; ++f)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          int lo = per ? wrap_index(f - 1, n) : f - 1;
          fn(i, j, f, i, j, lo, i, j, f);
        }
  }
}

}  // namespace detail
}  // namespace cnsfv
