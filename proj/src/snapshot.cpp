#include "cnsfv/snapshot.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "cnsfv/errors.hpp"

namespace cnsfv {

namespace {

constexpr char kMagic[4] = {'C', 'F', 'X', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4))
    throw IoError("snapshot: truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8))
    throw IoError("snapshot: truncated header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

std::string get_string(std::istream& is) {
  std::uint32_t len = get_u32(is);
  if (len > (1u << 20)) throw IoError("snapshot: implausible string length");
  std::string s(len, '\0');
  if (len && !is.read(s.data(), len))
    throw IoError("snapshot: truncated string");
  return s;
}

}  // namespace

void write_snapshot(const std::string& path, const SnapshotHeader& hdr,
                    const ScalarField& f) {
  if (hdr.nx != f.nx() || hdr.ny != f.ny() || hdr.nz != f.nz())
    throw std::invalid_argument("snapshot: header extents mismatch field");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("snapshot: cannot open '" + path + "' for writing");
  os.write(kMagic, 4);
  put_u32(os, static_cast<std::uint32_t>(hdr.dim));
  put_u32(os, static_cast<std::uint32_t>(hdr.nx));
  put_u32(os, static_cast<std::uint32_t>(hdr.ny));
  put_u32(os, static_cast<std::uint32_t>(hdr.nz));
  put_f64(os, hdr.hx);
  put_f64(os, hdr.hy);
  put_f64(os, hdr.hz);
  put_f64(os, hdr.time);
  put_u32(os, static_cast<std::uint32_t>(hdr.name.size()));
  os.write(hdr.name.data(), static_cast<std::streamsize>(hdr.name.size()));
  put_u32(os, static_cast<std::uint32_t>(hdr.role.size()));
  os.write(hdr.role.data(), static_cast<std::streamsize>(hdr.role.size()));
  for (double v : f.data()) put_f64(os, v);
  if (!os) throw IoError("snapshot: write failed for '" + path + "'");
}

void write_snapshot(const std::string& path, const Grid& g,
                    const ScalarField& f, double time, const std::string& name,
                    const std::string& role) {
  SnapshotHeader h;
  h.dim = g.dim;
  h.nx = f.nx();
  h.ny = f.ny();
  h.nz = f.nz();
  h.hx = g.hx;
  h.hy = g.hy;
  h.hz = g.hz;
  h.time = time;
  h.name = name;
  h.role = role;
  write_snapshot(path, h, f);
}

ScalarField load_snapshot(const std::string& path, SnapshotHeader* hdr) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("snapshot: cannot open '" + path + "'");
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("snapshot: bad magic in '" + path + "'");
  SnapshotHeader h;
  h.dim = static_cast<int>(get_u32(is));
  h.nx = static_cast<int>(get_u32(is));
  h.ny = static_cast<int>(get_u32(is));
  h.nz = static_cast<int>(get_u32(is));
  h.hx = get_f64(is);
  h.hy = get_f64(is);
  h.hz = get_f64(is);
  h.time = get_f64(is);
  h.name = get_string(is);
  h.role = get_string(is);
  if (h.dim != 2 && h.dim != 3) throw IoError("snapshot: bad dimension");
  if (h.nx <= 0 || h.ny <= 0 || h.nz <= 0)
    throw IoError("snapshot: bad extents");

  ScalarField f(h.nx, h.ny, h.nz);
  for (double& v : f.data()) v = get_f64(is);
  if (hdr) *hdr = h;
  return f;
}

void export_field_csv(const std::string& path, const ScalarField& f,
                      int dim) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("csv export: cannot open '" + path + "'");
  os << (dim == 3 ? "i,j,k,value\n" : "i,j,value\n");
  char buf[40];
  for (int k = 0; k < f.nz(); ++k)
    for (int j = 0; j < f.ny(); ++j)
      for (int i = 0; i < f.nx(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", f(i, j, k));
        if (dim == 3)
          os << i << ',' << j << ',' << k << ',' << buf << '\n';
        else
          os << i << ',' << j << ',' << buf << '\n';
      }
  if (!os) throw IoError("csv export: write failed for '" + path + "'");
}

}  // namespace cnsfv
