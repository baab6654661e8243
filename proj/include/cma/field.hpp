#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <vector>

#include "cma/fft.hpp"
#include "cma/grid.hpp"

namespace cma {

enum class Axis { X, Y, Z };

inline const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

/// Real scalar samples on a periodic grid, z fastest.
class PeriodicField {
 public:
  PeriodicField() = default;
  explicit PeriodicField(const Grid3& g, double fill = 0.0)
      : grid_(g), v_(g.size(), fill) {}

  template <class Fn>
  static PeriodicField sample(const Grid3& g, Fn&& f) {
    PeriodicField out(g);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int k = 0; k < g.nz; ++k)
          out.v_[g.index(i, j, k)] = f(g.x(i), g.y(j), g.z(k));
    return out;
  }

  const Grid3& grid() const { return grid_; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }
  double operator()(int i, int j, int k) const { return v_[grid_.index(i, j, k)]; }
  double& operator()(int i, int j, int k) { return v_[grid_.index(i, j, k)]; }
  long size() const { return grid_.size(); }
  bool empty() const { return v_.empty(); }

  PeriodicField& operator+=(const PeriodicField& o) {
    check_same_grid(o);
    for (long i = 0; i < size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  PeriodicField& operator-=(const PeriodicField& o) {
    check_same_grid(o);
    for (long i = 0; i < size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  PeriodicField& operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
  }
  PeriodicField& operator+=(double s) {
    for (double& x : v_) x += s;
    return *this;
  }

  double max_abs() const {
    double m = 0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }
  double min_abs() const {
    double m = v_.empty() ? 0.0 : std::abs(v_[0]);
    for (double x : v_) m = std::min(m, std::abs(x));
    return m;
  }
  bool all_finite() const {
    return std::all_of(v_.begin(), v_.end(),
                       [](double x) { return std::isfinite(x); });
  }

  void check_same_grid(const PeriodicField& o) const {
    if (!(grid_ == o.grid_)) throw ShapeError("fields live on different grids");
  }

 private:
  Grid3 grid_;
  std::vector<double> v_;
};

inline PeriodicField operator+(PeriodicField a, const PeriodicField& b) {
  a += b;
  return a;
}
inline PeriodicField operator-(PeriodicField a, const PeriodicField& b) {
  a -= b;
  return a;
}
inline PeriodicField operator*(PeriodicField a, double s) {
  a *= s;
  return a;
}
inline PeriodicField operator*(double s, PeriodicField a) {
  a *= s;
  return a;
}
inline PeriodicField operator-(PeriodicField a) {
  a *= -1.0;
  return a;
}

inline PeriodicField operator*(const PeriodicField& a, const PeriodicField& b) {
  a.check_same_grid(b);
  PeriodicField out = a;
  for (long i = 0; i < a.size(); ++i) out.values()[i] *= b.values()[i];
  return out;
}

inline PeriodicField operator/(const PeriodicField& a, const PeriodicField& b) {
  a.check_same_grid(b);
  PeriodicField out = a;
  for (long i = 0; i < a.size(); ++i) out.values()[i] /= b.values()[i];
  return out;
}

inline bool is_constant(const PeriodicField& f) {
  const auto& v = f.values();
  for (double x : v)
    if (x != v[0]) return false;
  return true;
}

/// Spectral first derivative. The Nyquist plane of the derivative axis is
/// zeroed (its odd derivative is not well defined on the grid). Constant
/// fields map to exact zero so monomial coefficients stay clean.
inline PeriodicField derivative(const PeriodicField& f, Axis axis) {
  if (is_constant(f)) return PeriodicField(f.grid());
  PeriodicField out(f.grid());
  out.values() = spectral_map(
      f.grid(), f.values(),
      [axis](double kx, double ky, double kz, bool nqx, bool nqy, bool nqz) {
        using C = std::complex<double>;
        switch (axis) {
          case Axis::X: return nqx ? C(0) : C(0, kx);
          case Axis::Y: return nqy ? C(0) : C(0, ky);
          case Axis::Z: return nqz ? C(0) : C(0, kz);
        }
        return C(0);
      });
  return out;
}

/// Removes the mean over each (y,z) plane, one mean per x index.
inline PeriodicField project_mean(const PeriodicField& f) {
  const Grid3& g = f.grid();
  PeriodicField out = f;
  const long plane = static_cast<long>(g.ny) * g.nz;
  for (int i = 0; i < g.nx; ++i) {
    double* slab = out.values().data() + static_cast<long>(i) * plane;
    double mean = 0;
    for (long p = 0; p < plane; ++p) mean += slab[p];
    mean /= static_cast<double>(plane);
    for (long p = 0; p < plane; ++p) slab[p] -= mean;
  }
  return out;
}

/// Inverse of D_y^2 + D_z^2 on the zero-plane-mean sector; the (ky,kz) = 0
/// modes of the result are zero.
inline PeriodicField inv_laplacian_yz_periodic(const PeriodicField& f) {
  PeriodicField out(f.grid());
  out.values() = spectral_map(
      f.grid(), f.values(),
      [](double, double ky, double kz, bool, bool, bool) {
        double k2 = ky * ky + kz * kz;
        return k2 == 0.0 ? std::complex<double>(0)
                         : std::complex<double>(-1.0 / k2);
      });
  return out;
}

}  // namespace cma
