#pragma once

#include <complex>

#include "cma/poly.hpp"

namespace cma {

/// Total derivative: spectral on periodic coefficients plus the product rule
/// on the monomial factors, D(x^m g) = m x^(m-1) g + x^m Dg.
inline PolyField derivative(const PolyField& f, Axis axis) {
  PolyField out(f.grid());
  for (const auto& [m, g] : f.terms()) {
    out.add_term(m, derivative(g, axis));
    int e = m.exp(axis);
    if (e > 0) out.add_term(m.lowered(axis), static_cast<double>(e) * g);
  }
  return out;
}

inline PolyField Dx(const PolyField& f) { return derivative(f, Axis::X); }
inline PolyField Dy(const PolyField& f) { return derivative(f, Axis::Y); }
inline PolyField Dz(const PolyField& f) { return derivative(f, Axis::Z); }

/// Two-dimensional Laplacian D_y^2 + D_z^2.
inline PolyField laplacian_yz(const PolyField& f) {
  return Dy(Dy(f)) + Dz(Dz(f));
}

/// Per-(y,z)-plane mean removal on every monomial coefficient.
inline PolyField project_mean(const PolyField& f) {
  PolyField out(f.grid());
  for (const auto& [m, g] : f.terms()) out.add_term(m, project_mean(g));
  return out;
}

/// Formal inverse of the (y,z) Laplacian under the zero-plane-mean kernel
/// convention: returns F with laplacian_yz(F) = project_mean(f). Supports
/// coefficients carrying y,z monomial degree <= 1; x monomials pass through.
inline PolyField inv_laplacian_yz(const PolyField& f) {
  const Grid3& g = f.grid();
  // Group terms by their x exponent; each group must fit z*g1 + y*g2 + g0.
  std::map<int, std::array<PeriodicField, 3>> groups;  // [g0, g2(y), g1(z)]
  for (const auto& [m, coeff] : f.terms()) {
    if (m.my + m.mz >= 2)
      throw ShapeError(
          "inv_laplacian_yz: unsupported y,z monomial shape in term " +
          m.str());
    auto& slot = groups.try_emplace(m.mx).first->second;
    int which = (m.my == 1) ? 1 : (m.mz == 1) ? 2 : 0;
    if (slot[which].empty())
      slot[which] = coeff;
    else
      slot[which] += coeff;
  }
  PolyField out(g);
  for (auto& [mx, slot] : groups) {
    for (auto& s : slot)
      if (s.empty()) s = PeriodicField(g);
    PeriodicField h1 = inv_laplacian_yz_periodic(slot[2]);  // z coefficient
    PeriodicField h2 = inv_laplacian_yz_periodic(slot[1]);  // y coefficient
    PeriodicField h0 = inv_laplacian_yz_periodic(
        slot[0] - 2.0 * derivative(h1, Axis::Z) - 2.0 * derivative(h2, Axis::Y));
    out.add_term(Monomial{mx, 0, 1}, h1);
    out.add_term(Monomial{mx, 1, 0}, h2);
    out.add_term(Monomial{mx, 0, 0}, h0);
  }
  return out;
}

namespace detail {

/// Exact integral of x^m exp(ikx) over one period [0, L).
inline std::complex<double> monomial_mode_integral(int m, double k, double L) {
  using C = std::complex<double>;
  if (k == 0.0) return C(std::pow(L, m + 1) / (m + 1), 0.0);
  switch (m) {
    case 0: return C(0.0, 0.0);
    case 1: return C(0.0, -L / k);
    case 2: return C(2.0 * L / (k * k), -L * L / k);
    case 3:
      return C(3.0 * L * L / (k * k), -L * L * L / k + 6.0 * L / (k * k * k));
    default: throw ShapeError("monomial_mode_integral: degree too high");
  }
}

}  // namespace detail

/// Box integral, exact for band-limited periodic coefficients; monomial
/// factors are integrated against each Fourier mode in closed form.
inline double integrate_box(const PolyField& f) {
  const Grid3& g = f.grid();
  double total = 0.0;
  for (const auto& [m, coeff] : f.terms()) {
    Spectrum s = forward_fft(g, coeff.values());
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < g.nx; ++i) {
      std::complex<double> ix =
          detail::monomial_mode_integral(m.mx, g.kx(i), g.Lx);
      if (ix == std::complex<double>(0.0)) continue;
      for (int j = 0; j < g.ny; ++j) {
        std::complex<double> ixy =
            ix * detail::monomial_mode_integral(m.my, g.ky(j), g.Ly);
        if (ixy == std::complex<double>(0.0)) continue;
        for (int k = 0; k <= g.nz / 2; ++k) {
          std::complex<double> w =
              ixy * detail::monomial_mode_integral(m.mz, g.kz(k), g.Lz);
          std::complex<double> term = s.c[s.index(i, j, k)] * w;
          // Interior kz planes stand for a conjugate pair of modes.
          if (k == 0 || k == g.nz / 2)
            acc += term;
          else
            acc += 2.0 * std::complex<double>(term.real(), 0.0);
        }
      }
    }
    total += acc.real();
  }
  return total;
}

inline double integrate_box(const PeriodicField& f) {
  // Plain rectangle rule; exact for resolved modes.
  double s = 0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_volume();
}

}  // namespace cma
