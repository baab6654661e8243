#pragma once

#include <array>
#include <string>

#include "cma/common.hpp"

namespace cma {

/// Uniform periodic box [0,Lx) x [0,Ly) x [0,Lz). Values are stored with z
/// fastest, then y, then x.
struct Grid3 {
  int nx = 0, ny = 0, nz = 0;
  double Lx = kTwoPi, Ly = kTwoPi, Lz = kTwoPi;

  Grid3() = default;
  Grid3(int nx_, int ny_, int nz_, double Lx_ = kTwoPi, double Ly_ = kTwoPi,
        double Lz_ = kTwoPi)
      : nx(nx_), ny(ny_), nz(nz_), Lx(Lx_), Ly(Ly_), Lz(Lz_) {
    validate();
  }

  static Grid3 cube(int n, double L = kTwoPi) { return Grid3(n, n, n, L, L, L); }

  void validate() const {
    for (int n : {nx, ny, nz}) {
      if (n < 8 || (n & (n - 1)) != 0)
        throw ShapeError("grid dimensions must be powers of two and >= 8, got " +
                         std::to_string(n));
    }
    if (!(Lx > 0) || !(Ly > 0) || !(Lz > 0))
      throw ShapeError("box lengths must be positive");
  }

  bool operator==(const Grid3&) const = default;

  long size() const { return static_cast<long>(nx) * ny * nz; }
  long index(int i, int j, int k) const {
    return (static_cast<long>(i) * ny + j) * nz + k;
  }

  double hx() const { return Lx / nx; }
  double hy() const { return Ly / ny; }
  double hz() const { return Lz / nz; }
  double cell_volume() const { return hx() * hy() * hz(); }
  double volume() const { return Lx * Ly * Lz; }

  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }
  double z(int k) const { return k * hz(); }

  /// Signed integer mode index for position i along a dimension of n points.
  static int mode(int i, int n) { return (i <= n / 2) ? i : i - n; }

  double kx(int i) const { return kTwoPi * mode(i, nx) / Lx; }
  double ky(int j) const { return kTwoPi * mode(j, ny) / Ly; }
  double kz(int k) const { return kTwoPi * mode(k, nz) / Lz; }

  /// Largest |k| vector magnitude representable on this grid.
  double k_max() const {
    double a = kPi * nx / Lx, b = kPi * ny / Ly, c = kPi * nz / Lz;
    return std::sqrt(a * a + b * b + c * c);
  }
};

}  // namespace cma
