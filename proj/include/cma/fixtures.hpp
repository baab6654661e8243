#pragma once

#include <random>

#include "cma/state.hpp"

namespace cma {

/// Seeded band-limited field: random amplitudes and phases on all modes with
/// |k_i| <= max_mode per axis, scaled to the requested max amplitude.
inline PeriodicField random_band_limited(const Grid3& g, std::mt19937_64& rng,
                                         int max_mode, double amplitude) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  struct Mode {
    double kx, ky, kz, a, p;
  };
  std::vector<Mode> modes;
  for (int mx = 0; mx <= max_mode; ++mx)
    for (int my = -max_mode; my <= max_mode; ++my)
      for (int mz = -max_mode; mz <= max_mode; ++mz) {
        if (mx == 0 && (my < 0 || (my == 0 && mz < 0))) continue;  // conjugates
        modes.push_back(Mode{kTwoPi * mx / g.Lx, kTwoPi * my / g.Ly,
                             kTwoPi * mz / g.Lz, amp(rng), phase(rng)});
      }
  PeriodicField out(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        double s = 0;
        for (const Mode& m : modes)
          s += m.a * std::cos(m.kx * g.x(i) + m.ky * g.y(j) + m.kz * g.z(k) +
                              m.p);
        out(i, j, k) = s;
      }
  double mx = out.max_abs();
  if (mx > 0) out *= amplitude / mx;
  return out;
}

/// Band-limited bump window, sin^8(pi xi / L) per axis: vanishes with seventh
/// order contact at the box faces so boundary fluxes of background-times-
/// fluctuation cross terms drop out of box integrals.
inline PeriodicField collar_taper(const Grid3& g, int power = 8) {
  auto w = [&](double xi, double L) {
    return std::pow(std::sin(kPi * xi / L), power);
  };
  return PeriodicField::sample(g, [&](double x, double y, double z) {
    return w(x, g.Lx) * w(y, g.Ly) * w(z, g.Lz);
  });
}

/// QS: the quadratic solution background with eps = +1, kappa = (1,1,1,1),
/// zero fluctuation. a = Q = 1, b = c = 0 everywhere.
inline FieldState make_qs(const Grid3& g, double t = 0.0) {
  Background bg{1, 1, 1, 1};
  return FieldState::background_only(g, +1, bg, t);
}

/// QS-: eps = -1 with kappa = (1,1,-1,-1); a = -1, Q = 1, the
/// ultra-hyperbolic signature case.
inline FieldState make_qs_minus(const Grid3& g, double t = 0.0) {
  Background bg{1, 1, -1, -1};
  return FieldState::background_only(g, -1, bg, t);
}

/// WAVE: QS plus the closed-form harmonic extra A sin(kx) e^{-kt} carried in
/// the background, zero fluctuation. An exact solution at every t.
inline FieldState make_wave(const Grid3& g, double t = 0.0, double A = 0.01,
                            double k = 1.0) {
  Background bg{1, 1, 1, 1, A, k, -1.0};
  return FieldState::background_only(g, +1, bg, t);
}

/// The same solution with the wave loaded into the evolving fluctuation over
/// a plain QS background; used to exercise the integrator against the closed
/// form u* = u_bg + A sin(kx) e^{-kt}.
inline FieldState make_wave_numeric(const Grid3& g, double t = 0.0,
                                    double A = 0.01, double k = 1.0) {
  Background bg{1, 1, 1, 1};
  double e = std::exp(-k * t);
  PeriodicField uf = PeriodicField::sample(
      g, [&](double x, double, double) { return A * std::sin(k * x) * e; });
  PeriodicField vf = PeriodicField::sample(g, [&](double x, double, double) {
    return -A * k * std::sin(k * x) * e;
  });
  return FieldState(g, +1, bg, std::move(uf), std::move(vf), t);
}

/// QS plus a fixed band-1 fluctuation; deterministic non-random probe that
/// stays alias-free through cubic products even on an 8-point axis.
inline FieldState make_qs_perturbed(const Grid3& g, double amplitude = 1e-3) {
  Background bg{1, 1, 1, 1};
  PeriodicField uf = PeriodicField::sample(g, [&](double x, double y, double z) {
    return amplitude * (std::sin(x) * std::cos(y) +
                        0.5 * std::cos(z) * std::sin(y));
  });
  PeriodicField vf = PeriodicField::sample(g, [&](double x, double y, double z) {
    return amplitude * (std::cos(x) * std::sin(z) -
                        0.5 * std::sin(y) * std::cos(z));
  });
  return FieldState(g, +1, bg, std::move(uf), std::move(vf));
}

/// RAND: seeded band-limited fluctuation with collar taper on a solution
/// background (QS for eps = +1, QS- for eps = -1).
inline FieldState make_rand(const Grid3& g, unsigned long seed, int eps = +1,
                            double amplitude = 1e-3, int max_mode = 3,
                            int taper_power = 8) {
  Background bg =
      (eps == +1) ? Background{1, 1, 1, 1} : Background{1, 1, -1, -1};
  std::mt19937_64 rng(seed);
  PeriodicField taper = collar_taper(g, taper_power);
  PeriodicField uf = random_band_limited(g, rng, max_mode, 1.0) * taper;
  PeriodicField vf = random_band_limited(g, rng, max_mode, 1.0) * taper;
  double mx = std::max(uf.max_abs(), vf.max_abs());
  if (mx > 0) {
    uf *= amplitude / mx;
    vf *= amplitude / mx;
  }
  return FieldState(g, eps, bg, std::move(uf), std::move(vf));
}

/// Closed-form comparison fields for the evolving-wave fixture at time t.
inline std::pair<PeriodicField, PeriodicField> wave_exact_fluct(
    const Grid3& g, double t, double A = 0.01, double k = 1.0) {
  double e = std::exp(-k * t);
  PeriodicField uf = PeriodicField::sample(
      g, [&](double x, double, double) { return A * std::sin(k * x) * e; });
  PeriodicField vf = PeriodicField::sample(g, [&](double x, double, double) {
    return -A * k * std::sin(k * x) * e;
  });
  return {std::move(uf), std::move(vf)};
}

/// Random band-limited covector/vector pairs for operator identity tests.
inline TwoComponentCovector random_covector(const Grid3& g,
                                            std::mt19937_64& rng,
                                            int max_mode = 4,
                                            bool projected = false) {
  PolyField a(g, random_band_limited(g, rng, max_mode, 1.0));
  PolyField b(g, random_band_limited(g, rng, max_mode, 1.0));
  if (projected) return {project_mean(a), project_mean(b)};
  return {std::move(a), std::move(b)};
}

inline TwoComponentVector random_vector(const Grid3& g, std::mt19937_64& rng,
                                        int max_mode = 4,
                                        bool projected = false) {
  PolyField a(g, random_band_limited(g, rng, max_mode, 1.0));
  PolyField b(g, random_band_limited(g, rng, max_mode, 1.0));
  if (projected) return {project_mean(a), project_mean(b)};
  return {std::move(a), std::move(b)};
}

}  // namespace cma
