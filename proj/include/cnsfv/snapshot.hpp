#pragma once

#include <string>

#include "cnsfv/fields.hpp"

namespace cnsfv {

/// Field snapshot container header. Extents are those of the stored array
/// (face-component arrays carry one extra entry along their own axis).
struct SnapshotHeader {
  int dim = 2;
  int nx = 0, ny = 0, nz = 1;
  double hx = 0.0, hy = 0.0, hz = 0.0;
  double time = 0.0;
  std::string name;
  std::string role;
};

/// Binary layout: magic "CFX1"; u32 dim, nx, ny, nz; f64 hx, hy, hz, time;
/// u32-length-prefixed name and role strings; nx*ny*nz little-endian f64
/// values in x-fastest order.
void write_snapshot(const std::string& path, const SnapshotHeader& hdr,
                    const ScalarField& f);

/// Convenience wrapper filling the header from the grid.
void write_snapshot(const std::string& path, const Grid& g,
                    const ScalarField& f, double time, const std::string& name,
                    const std::string& role);

/// Loads a snapshot; throws IoError on missing file, bad magic, or truncated
/// payload.
ScalarField load_snapshot(const std::string& path,
                          SnapshotHeader* hdr = nullptr);

/// Plain-text export, one line per entry: "i,j,value" (2D) or "i,j,k,value"
/// (3D), header row first, 17 significant digits.
void export_field_csv(const std::string& path, const ScalarField& f, int dim);

}  // namespace cnsfv
