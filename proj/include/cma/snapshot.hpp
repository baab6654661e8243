#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "cma/state.hpp"

namespace cma {

// CMAF binary snapshot layout, little endian:
//   magic "CMAF" (4 bytes), format version u32,
//   epsilon i8, grid dims 3 x u32, box lengths 3 x f64, time f64,
//   background coefficients 6 x f64
//     (kappa_t, kappa_x, kappa_y, kappa_z, wave amplitude, signed wave
//      number s*k encoding the exp(s k t) direction in its sign),
//   u_fluct then v_fluct as f64 arrays, z fastest.
inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError("snapshot truncated");
  return v;
}

}  // namespace detail

inline void write_snapshot(const std::filesystem::path& path,
                           const FieldState& s) {
  static_assert(std::endian::native == std::endian::little,
                "CMAF layout is little endian");
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string());
    os.write("CMAF", 4);
    detail::put(os, kSnapshotVersion);
    detail::put(os, static_cast<std::int8_t>(s.eps()));
    const Grid3& g = s.grid();
    detail::put(os, static_cast<std::uint32_t>(g.nx));
    detail::put(os, static_cast<std::uint32_t>(g.ny));
    detail::put(os, static_cast<std::uint32_t>(g.nz));
    detail::put(os, g.Lx);
    detail::put(os, g.Ly);
    detail::put(os, g.Lz);
    detail::put(os, s.t());
    const Background& b = s.background();
    detail::put(os, b.kappa_t);
    detail::put(os, b.kappa_x);
    detail::put(os, b.kappa_y);
    detail::put(os, b.kappa_z);
    detail::put(os, b.wave_amplitude);
    detail::put(os, b.wave_sign * b.wave_number);
    os.write(reinterpret_cast<const char*>(s.u_fluct().values().data()),
             static_cast<std::streamsize>(sizeof(double) * g.size()));
    os.write(reinterpret_cast<const char*>(s.v_fluct().values().data()),
             static_cast<std::streamsize>(sizeof(double) * g.size()));
    if (!os) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline FieldState read_snapshot(const std::filesystem::path& path,
                                double delta_a = 0.1) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CMAF", 4) != 0)
    throw IoError(path.string() + " is not a CMAF snapshot");
  auto version = detail::get<std::uint32_t>(is);
  if (version != kSnapshotVersion)
    throw IoError("unsupported CMAF version " + std::to_string(version));
  int eps = detail::get<std::int8_t>(is);
  int nx = static_cast<int>(detail::get<std::uint32_t>(is));
  int ny = static_cast<int>(detail::get<std::uint32_t>(is));
  int nz = static_cast<int>(detail::get<std::uint32_t>(is));
  double Lx = detail::get<double>(is);
  double Ly = detail::get<double>(is);
  double Lz = detail::get<double>(is);
  Grid3 g(nx, ny, nz, Lx, Ly, Lz);
  double t = detail::get<double>(is);
  Background b;
  b.kappa_t = detail::get<double>(is);
  b.kappa_x = detail::get<double>(is);
  b.kappa_y = detail::get<double>(is);
  b.kappa_z = detail::get<double>(is);
  b.wave_amplitude = detail::get<double>(is);
  double sk = detail::get<double>(is);
  b.wave_sign = sk < 0 ? -1.0 : 1.0;
  b.wave_number = std::abs(sk);
  if (b.wave_number == 0) b.wave_number = 1.0;
  PeriodicField uf(g), vf(g);
  is.read(reinterpret_cast<char*>(uf.values().data()),
          static_cast<std::streamsize>(sizeof(double) * g.size()));
  is.read(reinterpret_cast<char*>(vf.values().data()),
          static_cast<std::streamsize>(sizeof(double) * g.size()));
  if (!is) throw IoError("snapshot truncated: " + path.string());
  return FieldState(g, eps, b, std::move(uf), std::move(vf), t, delta_a);
}

}  // namespace cma
