#pragma once

#include <vector>

#include "cma/densities.hpp"
#include "cma/operators.hpp"

namespace cma {

/// Exponential low-pass applied to the fluctuations after each step;
/// sigma(k) = exp(-strength * (|k|/k_nyq)^(2*order)) per axis.
struct FilterSpec {
  bool enabled = false;
  double strength = 36.0;
  int order = 18;
  double cutoff_fraction = 1.0;  // effective top mode fraction for budgeting
};

struct FlowOptions {
  FilterSpec filter{};
  double growth_budget = 1e6;   // cap on exp(k_max * T)
  double overflow_guard = 1e8;  // hard per-step amplitude ceiling
  CollarSpec collar{};
  bool enforce_collar = false;
};

inline PeriodicField apply_filter(const PeriodicField& f, const FilterSpec& fs) {
  const Grid3& g = f.grid();
  double knx = kPi * g.nx / g.Lx, kny = kPi * g.ny / g.Ly,
         knz = kPi * g.nz / g.Lz;
  PeriodicField out(g);
  out.values() = spectral_map(
      g, f.values(),
      [&](double kx, double ky, double kz, bool, bool, bool) {
        auto damp = [&](double k, double kn) {
          return std::exp(-fs.strength *
                          std::pow(std::abs(k) / kn, 2.0 * fs.order));
        };
        return std::complex<double>(
            damp(kx, knx) * damp(ky, kny) * damp(kz, knz));
      });
  return out;
}

/// One classical RK4 step on the fluctuation pair; the background advances
/// analytically through the state clock.
inline FieldState rk4_step(const FieldState& s, double dt,
                           const FilterSpec* filter = nullptr) {
  if (!(dt > 0)) throw ShapeError("step: dt must be positive");
  auto rhs = [](const FieldState& st) { return st.fluct_rhs(); };
  const PeriodicField& u0 = s.u_fluct();
  const PeriodicField& v0 = s.v_fluct();
  double t = s.t();

  auto [k1u, k1v] = rhs(s);
  auto [k2u, k2v] = rhs(s.with_fluct(u0 + 0.5 * dt * k1u, v0 + 0.5 * dt * k1v,
                                     t + 0.5 * dt));
  auto [k3u, k3v] = rhs(s.with_fluct(u0 + 0.5 * dt * k2u, v0 + 0.5 * dt * k2v,
                                     t + 0.5 * dt));
  auto [k4u, k4v] = rhs(s.with_fluct(u0 + dt * k3u, v0 + dt * k3v, t + dt));

  PeriodicField u1 = u0 + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  PeriodicField v1 = v0 + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  if (filter && filter->enabled) {
    u1 = apply_filter(u1, *filter);
    v1 = apply_filter(v1, *filter);
  }
  return s.with_fluct(std::move(u1), std::move(v1), t + dt);
}

struct StepDiagnostics {
  int step = 0;
  double t = 0;
  double max_fluct = 0;
  double collar_max = 0;
  double high_band = 0;  // max |fluct| content above 0.8 k_nyquist
};

/// Stored solution history at uniform dt.
struct Trajectory {
  std::vector<FieldState> states;
  double dt = 0;
  std::vector<StepDiagnostics> diagnostics;

  const FieldState& at(int i) const { return states.at(i); }
  int size() const { return static_cast<int>(states.size()); }
  double t0() const { return states.front().t(); }
};

inline double high_band_amplitude(const PeriodicField& f) {
  const Grid3& g = f.grid();
  PeriodicField hi(g);
  hi.values() = spectral_map(
      g, f.values(),
      [&](double kx, double ky, double kz, bool, bool, bool) {
        double rel = std::sqrt(kx * kx + ky * ky + kz * kz) / g.k_max();
        return std::complex<double>(rel >= 0.8 ? 1.0 : 0.0);
      });
  return hi.max_abs();
}

/// Integrates the flow for T, recording every state. The growth budget
/// exp(k_max_effective * T) <= budget is enforced up front: for eps = +1 the
/// t-march is an ill-posed Cauchy problem whose mode k grows like exp(|k| t),
/// so horizons must stay short unless the filter truncates the band.
inline Trajectory evolve(const FieldState& s0, double T, double dt,
                         const FlowOptions& opt = {}) {
  if (!(dt > 0) || !(T >= 0)) throw ShapeError("evolve: need dt > 0, T >= 0");
  double k_eff = s0.grid().k_max() *
                 (opt.filter.enabled ? opt.filter.cutoff_fraction : 1.0);
  if (std::exp(k_eff * T) > opt.growth_budget)
    throw GrowthBudgetExceeded(
        "exp(k_max*T) = exp(" + std::to_string(k_eff * T) +
        ") exceeds the growth budget " + std::to_string(opt.growth_budget) +
        "; shorten T, coarsen the grid, or enable the filter");
  if (opt.enforce_collar) require_collar(s0, opt.collar);

  int nsteps = static_cast<int>(std::llround(T / dt));
  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(nsteps + 1);
  traj.states.push_back(s0);
  for (int n = 0; n < nsteps; ++n) {
    FieldState next = rk4_step(traj.states.back(), dt,
                               opt.filter.enabled ? &opt.filter : nullptr);
    StepDiagnostics d;
    d.step = n + 1;
    d.t = next.t();
    d.max_fluct = std::max(next.u_fluct().max_abs(), next.v_fluct().max_abs());
    d.collar_max = collar_max_fluct(next, opt.collar.width_fraction);
    d.high_band = std::max(high_band_amplitude(next.u_fluct()),
                           high_band_amplitude(next.v_fluct()));
    if (d.max_fluct > opt.overflow_guard)
      throw GrowthBudgetExceeded("fluctuation amplitude " +
                                 std::to_string(d.max_fluct) +
                                 " blew past the overflow guard at t = " +
                                 std::to_string(d.t));
    if (opt.enforce_collar && d.collar_max > opt.collar.tol)
      throw CollarViolation("collar fluctuation " +
                            std::to_string(d.collar_max) + " at t = " +
                            std::to_string(d.t));
    traj.diagnostics.push_back(d);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

struct ConservationSample {
  int step;
  double t;
  std::string density;
  double value;
  double drift;  // value - value(t0)
};

struct ConservationReport {
  std::vector<ConservationSample> series;
  /// Max |drift| / max(|value(t0)|, floor) per density, worst over densities.
  double max_relative_drift = 0;
};

/// Evolve and track the relative functionals of the given densities.
inline std::pair<Trajectory, ConservationReport> evolve_with_monitor(
    const FieldState& s0, double T, double dt,
    const std::vector<Density>& densities, FlowOptions opt = {}) {
  opt.enforce_collar = true;
  Trajectory traj = evolve(s0, T, dt, opt);
  ConservationReport rep;
  std::vector<double> initial(densities.size(), 0.0);
  for (int n = 0; n < traj.size(); ++n) {
    const FieldState& s = traj.at(n);
    for (size_t d = 0; d < densities.size(); ++d) {
      double val = relative_functional(densities[d], s, opt.collar);
      if (n == 0) initial[d] = val;
      rep.series.push_back({n, s.t(), densities[d].name(), val,
                            val - initial[d]});
      double rel = std::abs(val - initial[d]) /
                   std::max(std::abs(initial[d]), 1e-10);
      rep.max_relative_drift = std::max(rep.max_relative_drift, rel);
    }
  }
  return {std::move(traj), std::move(rep)};
}

namespace detail {

/// Cubic Lagrange interpolation of the stored fluctuations at time t.
inline FieldState interpolate_state(const Trajectory& traj, double t) {
  int n = traj.size();
  if (n < 2) throw ShapeError("trajectory too shallow for interpolation");
  double s = (t - traj.t0()) / traj.dt;
  int j = static_cast<int>(std::floor(s));
  j = std::max(1, std::min(j, n - 3));  // centered window where possible
  if (n < 4) j = 0;
  double tau = s - j;
  if (n < 4) {
    // linear fallback for very short trajectories
    const auto& a = traj.at(j);
    const auto& b = traj.at(j + 1);
    PeriodicField uf = (1 - tau) * a.u_fluct() + tau * b.u_fluct();
    PeriodicField vf = (1 - tau) * a.v_fluct() + tau * b.v_fluct();
    return a.with_fluct(std::move(uf), std::move(vf), t);
  }
  // nodes j-1, j, j+1, j+2 with local coordinates -1, 0, 1, 2
  double w0 = -tau * (tau - 1) * (tau - 2) / 6.0;
  double w1 = (tau + 1) * (tau - 1) * (tau - 2) / 2.0;
  double w2 = -(tau + 1) * tau * (tau - 2) / 2.0;
  double w3 = (tau + 1) * tau * (tau - 1) / 6.0;
  const auto& s0 = traj.at(j - 1);
  const auto& s1 = traj.at(j);
  const auto& s2 = traj.at(j + 1);
  const auto& s3 = traj.at(j + 2);
  PeriodicField uf = w0 * s0.u_fluct() + w1 * s1.u_fluct() +
                     w2 * s2.u_fluct() + w3 * s3.u_fluct();
  PeriodicField vf = w0 * s0.v_fluct() + w1 * s1.v_fluct() +
                     w2 * s2.v_fluct() + w3 * s3.v_fluct();
  return s1.with_fluct(std::move(uf), std::move(vf), t);
}

}  // namespace detail

/// Integrates the tangent (linearized) flow alongside a stored trajectory,
/// interpolating states at the RK substages. Returns the characteristic at
/// every stored time.
inline std::vector<TwoComponentVector> tangent_evolve(
    const Trajectory& traj, const TwoComponentVector& phi0) {
  std::vector<TwoComponentVector> out;
  out.reserve(traj.size());
  out.push_back(phi0);
  double dt = traj.dt;
  for (int n = 0; n + 1 < traj.size(); ++n) {
    const FieldState& sa = traj.at(n);
    FieldState sm = detail::interpolate_state(traj, sa.t() + 0.5 * dt);
    const FieldState& sb = traj.at(n + 1);
    OpContext xa = make_op_context(sa);
    OpContext xm = make_op_context(sm);
    OpContext xb = make_op_context(sb);
    const TwoComponentVector& p = out.back();
    TwoComponentVector k1 = linearized_rhs(xa, p);
    TwoComponentVector k2 = linearized_rhs(xm, p + 0.5 * dt * k1);
    TwoComponentVector k3 = linearized_rhs(xm, p + 0.5 * dt * k2);
    TwoComponentVector k4 = linearized_rhs(xb, p + dt * k3);
    out.push_back(p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  }
  return out;
}

struct HigherFlow {
  TwoComponentVector projected;
  double mean_sector_max = 0;  // size of the plane-mean part removed
};

/// First higher flow of the hierarchy, J1 applied to the variational
/// derivatives of H1, reported modulo the plane-mean kernel.
inline HigherFlow higher_flow_rhs(const FieldState& s) {
  OpContext x = make_op_context(s);
  TwoComponentVector raw = apply_J1(x, vgrad(Density::h1(), s));
  TwoComponentVector proj = project_mean(raw);
  HigherFlow out{proj, (raw - proj).max_abs()};
  return out;
}

}  // namespace cma
