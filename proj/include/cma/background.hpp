#pragma once

#include <cmath>

#include "cma/poly.hpp"

namespace cma {

/// Closed-form background u_bg = (kappa_t t^2 + kappa_x x^2 + kappa_y y^2 +
/// kappa_z z^2)/4 + A sin(kx) exp(s k t). A purely periodic u would force
/// mean(Delta u) = 0 and a sign change of a somewhere, so a quadratic carrier
/// keeps the operator coefficients periodic with Delta(u) bounded away from
/// zero. The harmonic extra solves the linearized system exactly and supplies
/// a nontrivial closed-form solution.
struct Background {
  double kappa_t = 0, kappa_x = 0, kappa_y = 0, kappa_z = 0;
  double wave_amplitude = 0;   // A
  double wave_number = 1;      // k (integer so sin(kx) fits the box)
  double wave_sign = -1;       // s in exp(s k t)

  bool has_wave() const { return wave_amplitude != 0.0; }
  double wave(double t, double x) const {
    return wave_amplitude * std::sin(wave_number * x) *
           std::exp(wave_sign * wave_number * t);
  }

  /// Checks the algebraic conditions for the background alone to solve the
  /// flow: kappa_t = kappa_x, kappa_y = kappa_z, kappa_t * kappa_y = eps.
  bool is_solution(int eps, double tol = 1e-12) const {
    return std::abs(kappa_t - kappa_x) <= tol &&
           std::abs(kappa_y - kappa_z) <= tol &&
           std::abs(kappa_t * kappa_y - eps) <= tol;
  }

  PolyField u_poly(const Grid3& g, double t) const {
    PolyField out(g);
    PeriodicField p0(g, 0.25 * kappa_t * t * t);
    if (has_wave()) {
      double e = std::exp(wave_sign * wave_number * t);
      for (int i = 0; i < g.nx; ++i) {
        double w = wave_amplitude * std::sin(wave_number * g.x(i)) * e;
        for (int j = 0; j < g.ny; ++j)
          for (int k = 0; k < g.nz; ++k) p0(i, j, k) += w;
      }
    }
    out.add_term(Monomial{0, 0, 0}, p0);
    out.add_term(Monomial{2, 0, 0}, PeriodicField(g, 0.25 * kappa_x));
    out.add_term(Monomial{0, 2, 0}, PeriodicField(g, 0.25 * kappa_y));
    out.add_term(Monomial{0, 0, 2}, PeriodicField(g, 0.25 * kappa_z));
    return out;
  }

  /// d/dt of u_poly.
  PolyField v_poly(const Grid3& g, double t) const {
    PolyField out(g);
    PeriodicField p0(g, 0.5 * kappa_t * t);
    if (has_wave()) {
      double e = wave_sign * wave_number *
                 std::exp(wave_sign * wave_number * t);
      for (int i = 0; i < g.nx; ++i) {
        double w = wave_amplitude * std::sin(wave_number * g.x(i)) * e;
        for (int j = 0; j < g.ny; ++j)
          for (int k = 0; k < g.nz; ++k) p0(i, j, k) += w;
      }
    }
    out.add_term(Monomial{0, 0, 0}, p0);
    return out;
  }

  /// d^2/dt^2 of the background, a periodic field (s^2 = 1 turns the wave's
  /// second time derivative into +k^2 times the wave).
  PeriodicField utt(const Grid3& g, double t) const {
    PeriodicField out(g, 0.5 * kappa_t);
    if (has_wave()) {
      double e = wave_number * wave_number *
                 std::exp(wave_sign * wave_number * t);
      for (int i = 0; i < g.nx; ++i) {
        double w = wave_amplitude * std::sin(wave_number * g.x(i)) * e;
        for (int j = 0; j < g.ny; ++j)
          for (int k = 0; k < g.nz; ++k) out(i, j, k) += w;
      }
    }
    return out;
  }
};

}  // namespace cma
