#pragma once

#include <functional>

#include "cma/metric.hpp"
#include "cma/symmetries.hpp"

namespace cma {

/// One verification result. `ge` flips the sense to "residual must be at
/// least tol" (used for detection probes and convergence factors); `info`
/// marks ungated diagnostic rows.
struct CheckRow {
  std::string check;
  std::string fixture;
  double residual = 0;
  double tol = 0;
  bool ge = false;
  bool info = false;

  bool pass() const {
    if (info) return true;
    return ge ? residual >= tol : residual <= tol;
  }
};

namespace detail {

inline double rel(double num, double den) {
  return num / std::max(den, 1e-300);
}

struct RowSink {
  std::vector<CheckRow>& rows;
  double scale;
  void le(const std::string& check, const std::string& fixture, double resid,
          double tol) {
    rows.push_back({check, fixture, resid, tol * scale});
  }
  void ge(const std::string& check, const std::string& fixture, double resid,
          double tol) {
    rows.push_back({check, fixture, resid, tol, true});
  }
  void info(const std::string& check, const std::string& fixture,
            double resid) {
    rows.push_back({check, fixture, resid, 0, false, true});
  }
};

}  // namespace detail

struct VerifyOptions {
  Grid3 grid = Grid3::cube(32);
  unsigned long seed = 1234;
  int trials = 20;
  double tol_scale = 1.0;
  /// Small-amplitude fixtures for the operator identities: their discrete
  /// residuals are aliasing tails that scale with the square of the
  /// fluctuation amplitude.
  double op_amplitude = 1e-5;
  /// Fixture amplitude for evolution-based checks.
  double evolve_amplitude = 1e-3;
};

/// Operator-algebra identities: inverse pair, skew symmetry, factorizations,
/// bi-Hamiltonian representations.
inline std::vector<CheckRow> verify_operators(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  detail::RowSink sink{rows, o.tol_scale};
  const Grid3& g = o.grid;
  std::mt19937_64 rng(o.seed);

  struct Fixture {
    std::string name;
    FieldState state;
  };
  std::vector<Fixture> fixtures = {
      {"qs_perturbed", make_qs_perturbed(g, o.op_amplitude)},
      {"rand", make_rand(g, o.seed + 1, +1, o.op_amplitude)}};

  for (const auto& fx : fixtures) {
    OpContext x = make_op_context(fx.state);
    double worst_kj0 = 0, worst_j0k = 0;
    for (int t = 0; t < o.trials; ++t) {
      auto p = random_covector(g, rng);
      auto r = apply_K(x, apply_J0(x, p));
      r -= p;
      worst_kj0 = std::max(worst_kj0, detail::rel(r.max_abs(), p.max_abs()));
      auto f = random_vector(g, rng);
      auto jk = apply_J0(x, apply_K(x, f));
      jk -= f;
      worst_j0k = std::max(
          worst_j0k, detail::rel(project_mean(jk).max_abs(), f.max_abs()));
    }
    sink.le("inverse_pair.K_J0", fx.name, worst_kj0, 1e-9);
    sink.le("inverse_pair.J0_K", fx.name, worst_j0k, 1e-9);

    double worst_sk[5] = {0, 0, 0, 0, 0};
    for (int t = 0; t < o.trials; ++t) {
      auto p = random_covector(g, rng, 4, true);
      auto q = random_covector(g, rng, 4, true);
      auto fv = random_vector(g, rng, 4, true);
      auto gv = random_vector(g, rng, 4, true);
      auto skew = [&](auto&& op, const auto& a, const auto& b) {
        double lhs = inner_product(a, op(b));
        double rhs = inner_product(op(a), b);
        return detail::rel(std::abs(lhs + rhs), std::abs(lhs));
      };
      worst_sk[0] = std::max(
          worst_sk[0],
          skew([&](const auto& c) { return apply_J0(x, c); }, p, q));
      worst_sk[1] = std::max(
          worst_sk[1],
          skew([&](const auto& c) { return apply_K(x, c); }, fv, gv));
      worst_sk[2] = std::max(
          worst_sk[2],
          skew([&](const auto& c) { return apply_J1(x, c); }, p, q));
      worst_sk[3] = std::max(
          worst_sk[3],
          skew([&](const auto& c) { return apply_J1bar(x, c); }, p, q));
      worst_sk[4] = std::max(
          worst_sk[4], skew(
                           [&](const auto& c) {
                             auto v = apply_J0(x, c);
                             v += 2.0 * apply_J1(x, c);
                             return v;
                           },
                           p, q));
    }
    const char* names[5] = {"skew.J0", "skew.K", "skew.J1", "skew.J1bar",
                            "skew.pencil_J0_2J1"};
    for (int i = 0; i < 5; ++i) sink.le(names[i], fx.name, worst_sk[i], 1e-8);

    double worst_r1 = 0, worst_r2 = 0, worst_j1 = 0, worst_chain = 0;
    for (int t = 0; t < o.trials; ++t) {
      auto f = random_vector(g, rng);
      auto l1 = project_mean(apply_R(1, x, f));
      auto r1 = project_mean(apply_J1(x, apply_K(x, f)));
      worst_r1 =
          std::max(worst_r1, detail::rel((l1 - r1).max_abs(), l1.max_abs()));
      auto l2 = project_mean(apply_R(2, x, f));
      auto r2 = project_mean(apply_J1bar(x, apply_K(x, f)));
      worst_r2 =
          std::max(worst_r2, detail::rel((l2 - r2).max_abs(), l2.max_abs()));
      auto p = random_covector(g, rng);
      auto d1 = project_mean(apply_J1(x, p));
      auto d2 = project_mean(apply_R(1, x, apply_J0(x, p)));
      worst_j1 =
          std::max(worst_j1, detail::rel((d1 - d2).max_abs(), d1.max_abs()));
      auto c1 = project_mean(apply_Jchain(2, x, p));
      auto c2 = project_mean(apply_R(1, x, apply_J1(x, p)));
      worst_chain = std::max(worst_chain,
                             detail::rel((c1 - c2).max_abs(), c1.max_abs()));
    }
    sink.le("factor.R1_vs_J1K", fx.name, worst_r1, 1e-9);
    sink.le("factor.R2_vs_J1barK", fx.name, worst_r2, 1e-9);
    sink.le("factor.J1_vs_R1J0", fx.name, worst_j1, 1e-9);
    sink.le("chain.J2_vs_R1J1", fx.name, worst_chain, 1e-8);
  }

  // Bi-Hamiltonian representations on QS and the random state.
  std::vector<Fixture> bi = {{"qs", make_qs(g)},
                             {"rand", make_rand(g, o.seed + 1, +1,
                                                o.op_amplitude)}};
  for (const auto& fx : bi) {
    OpContext x = make_op_context(fx.state);
    auto rhs = project_mean(fx.state.flow_rhs());
    double scale = std::max(rhs.max_abs(), 1e-8);
    auto j0h1 = project_mean(apply_J0(x, vgrad(Density::h1(), fx.state)));
    auto j1h0 = project_mean(apply_J1(x, vgrad(Density::h0(), fx.state)));
    auto jbh0 = project_mean(apply_J1bar(x, vgrad(Density::h0bar(), fx.state)));
    sink.le("biham.J0_dH1", fx.name, (j0h1 - rhs).max_abs() / scale, 1e-8);
    sink.le("biham.J1_dH0", fx.name, (j1h0 - rhs).max_abs() / scale, 1e-8);
    sink.le("biham.J1bar_dH0bar", fx.name, (jbh0 - rhs).max_abs() / scale,
            1e-8);
  }
  {
    auto qs = make_qs(g);
    OpContext x = make_op_context(qs);
    auto raw = apply_J1(x, vgrad(Density::h0(), qs));
    auto mismatch = raw - qs.flow_rhs();
    sink.le("biham.qs_mismatch_is_plane_mean", "qs",
            project_mean(mismatch).max_abs(), 1e-10);
    sink.info("biham.qs_mismatch_raw", "qs", mismatch.max_abs());
  }
  return rows;
}

/// Variational-derivative oracle, Helmholtz probe, Legendre consistency,
/// generator conditions.
inline std::vector<CheckRow> verify_hamiltonians(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  detail::RowSink sink{rows, o.tol_scale};
  // The oracle grid: 16 is the smallest band that keeps the cubic
  // monomial-weighted products of densities and directions alias-free.
  Grid3 g = Grid3::cube(16);
  auto qsp = make_qs_perturbed(g, 1e-3);
  auto rnd = make_rand(g, o.seed + 2, +1, 1e-3, 1, 2);

  std::vector<Density> ids = {Density::h1(),    Density::h0(),
                              Density::h0bar(), Density::h2rot(),
                              Density::h3(),    Density::h4(),
                              Density::halpha(AlphaFunction::wave(1.0)),
                              Density::hbeta(BetaFunction::y())};
  unsigned long seed = o.seed + 100;
  for (const auto& d : ids) {
    sink.le("vgrad_oracle." + d.name(), "qs_perturbed",
            fd_vgrad_directional_error(d, qsp, ++seed), 1e-5);
    sink.le("vgrad_oracle." + d.name(), "rand",
            fd_vgrad_directional_error(d, rnd, ++seed), 1e-5);
    sink.le("helmholtz." + d.name(), "qs_perturbed",
            helmholtz_asymmetry(d, qsp, ++seed), 1e-6);
  }

  double imag = 0;
  sink.le("legendre", "qs", legendre_check(make_qs(g), {}, &imag), 1e-12);
  sink.le("legendre.imag_cancellation", "qs", imag, 1e-12);
  sink.le("legendre", "wave", legendre_check(make_wave(g, 0.1), {}, &imag),
          1e-8);
  auto rnd_collar = make_rand(g, o.seed + 3, +1, 1e-3, 2);
  sink.le("legendre", "rand", legendre_check(rnd_collar, {}, &imag), 1e-7);
  sink.le("legendre.imag_cancellation", "rand", imag, 1e-10);

  for (double r : AlphaFunction::z().residuals(g))
    sink.le("generator.alpha_z", "grid", r, 1e-10);
  for (double r : AlphaFunction::wave(1.0).residuals(g, 0.2))
    sink.le("generator.alpha_wave", "grid", r, 1e-10);
  sink.le("generator.beta_y", "grid",
          BetaFunction::y().laplace_residual(g), 1e-12);
  sink.le("generator.beta_z", "grid",
          BetaFunction::z().laplace_residual(g), 1e-12);
  sink.ge("generator.beta_probe_rejected", "grid",
          BetaFunction::y_squared_probe().laplace_residual(g), 1.0);
  return rows;
}

/// Noether reconstruction, symmetry-condition residuals along the exact
/// wave trajectory, the non-symmetry probe, and recursion-generated
/// candidates along an evolved fluctuating solution.
inline std::vector<CheckRow> verify_symmetries(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  detail::RowSink sink{rows, o.tol_scale};
  const Grid3& g = o.grid;

  std::vector<Symmetry> noether_ids = {
      Symmetry::x2(),
      Symmetry::x3(),
      Symmetry::x4(),
      Symmetry::xalpha(AlphaFunction::z()),
      Symmetry::xalpha(AlphaFunction::wave(1.0)),
      Symmetry::xbeta(BetaFunction::y()),
      Symmetry::xbeta(BetaFunction::z())};
  auto s = make_rand(g, o.seed + 4, +1, 1e-4, 2);
  for (const auto& sym : noether_ids) {
    auto recon = noether_reconstruct(sym, s);
    auto grad = vgrad(sym.matching_density(), s);
    double scale = std::max(1.0, grad.max_abs());
    sink.le("noether." + sym.name(), "rand",
            project_mean(recon - grad).max_abs() / scale, 1e-8);
    sink.info("noether_raw." + sym.name(), "rand",
              (recon - grad).max_abs() / scale);
  }

  Trajectory wave;
  wave.dt = 0.02;
  for (int j = 0; j < 5; ++j)
    wave.states.push_back(make_wave(g, j * wave.dt));

  std::vector<Symmetry> spectral_ids = {
      Symmetry::xbeta(BetaFunction::y()), Symmetry::xbeta(BetaFunction::z()),
      Symmetry::xalpha(AlphaFunction::wave(1.0))};
  for (const auto& sym : spectral_ids) {
    auto r = point_symmetry_residual(wave, sym);
    sink.le("symcond." + sym.name(), "wave", r.projected, 1e-6);
  }
  std::vector<Symmetry> fd_ids = {Symmetry::x1(), Symmetry::x2(),
                                  Symmetry::x3(), Symmetry::x4(),
                                  Symmetry::x5(),
                                  Symmetry::xalpha(AlphaFunction::z())};
  for (const auto& sym : fd_ids) {
    auto r = point_symmetry_residual(wave, sym,
                                     ResidualBackend::FiniteDifference);
    sink.le("symcond_fd." + sym.name(), "wave", r.projected, 1e-6);
  }

  auto probe = [](const FieldState& st) {
    return TwoComponentVector{PolyField(st.grid()),
                              PolyField::constant(st.grid(), 1.0)};
  };
  sink.ge("symcond.nonsymmetry_probe", "wave",
          symmetry_residual(wave, probe).raw, 0.9);

  // Recursion candidates along an evolved solution.
  auto s0 = make_rand(g, o.seed + 5, +1, o.evolve_amplitude, 2);
  auto traj = evolve(s0, 5e-3, 1e-3);
  for (int which : {1, 2}) {
    for (const auto& sym : {Symmetry::x3(), Symmetry::x4()}) {
      auto cand = [&](const FieldState& st) {
        return apply_R(which, make_op_context(st), characteristic(sym, st));
      };
      auto r = symmetry_residual(traj, cand);
      sink.le("recursion.R" + std::to_string(which) + "." + sym.name(),
              "rand_evolved", r.projected, 1e-5);
    }
    auto cand_t = [&](const FieldState& st) {
      return apply_R(which, make_op_context(st), st.flow_rhs());
    };
    sink.le("recursion.R" + std::to_string(which) + ".time_translation",
            "rand_evolved", symmetry_residual(traj, cand_t).projected, 1e-5);
  }
  return rows;
}

/// Conserved-functional drift along evolved solutions for both signatures.
inline std::vector<CheckRow> verify_conservation(const VerifyOptions& o,
                                                 double T = 0.1,
                                                 double dt = 1e-3) {
  std::vector<CheckRow> rows;
  detail::RowSink sink{rows, o.tol_scale};
  std::vector<Density> densities = {
      Density::h1(),
      Density::h2rot(),
      Density::h3(),
      Density::h4(),
      Density::halpha(AlphaFunction::z()),
      Density::halpha(AlphaFunction::wave(1.0)),
      Density::hbeta(BetaFunction::y()),
      Density::hbeta(BetaFunction::z())};
  for (int eps : {+1, -1}) {
    auto s = make_rand(o.grid, o.seed + 6 + eps, eps, o.evolve_amplitude, 2);
    auto [traj, rep] = evolve_with_monitor(s, T, dt, densities);
    std::map<std::string, std::pair<double, double>> extremes;  // v0, maxdrift
    for (const auto& row : rep.series) {
      auto& e = extremes[row.density];
      if (row.step == 0) e.first = row.value;
      e.second = std::max(e.second, std::abs(row.drift));
    }
    for (const auto& d : densities) {
      auto& e = extremes[d.name()];
      double rel = e.second / std::max(std::abs(e.first), 1e-10);
      sink.le("conservation." + d.name(),
              eps > 0 ? "rand_eps+1" : "rand_eps-1", rel, 1e-6);
    }
  }
  return rows;
}

/// Adjoint chain, tri-Hamiltonian chain, kernel-transport decomposition,
/// and the higher-flow checks.
inline std::vector<CheckRow> verify_hierarchy(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  detail::RowSink sink{rows, o.tol_scale};
  const Grid3& g = o.grid;

  // Exact on the constant-coefficient solution fixtures, where the formal
  // inverse Laplacian's kernel sector is inert.
  struct Fixture {
    std::string name;
    FieldState state;
  };
  for (const auto& fx : std::vector<Fixture>{{"qs", make_qs(g)},
                                             {"qs-", make_qs_minus(g)},
                                             {"wave", make_wave(g, 0.2)}}) {
    OpContext x = make_op_context(fx.state);
    auto lhs = project_mean(apply_R1dag(x, vgrad(Density::h0(), fx.state)));
    auto rhs = project_mean(vgrad(Density::h1(), fx.state));
    sink.le("adjoint_chain.R1dag_dH0_vs_dH1", fx.name,
            (lhs - rhs).max_abs(), 1e-9);

    auto dH1 = vgrad(Density::h1(), fx.state);
    auto t1 = project_mean(apply_J1(x, dH1));
    auto t2 = project_mean(apply_J0(x, apply_R1dag(x, dH1)));
    sink.le("triham.J1_dH1_vs_J0_R1dag_dH1", fx.name, (t1 - t2).max_abs(),
            1e-7);
  }

  // On fluctuating states the chain holds modulo the explicitly computable
  // kernel transport: residual = K(plane-mean mismatch of the
  // bi-Hamiltonian representation).
  auto s = make_rand(g, o.seed + 8, +1, 1e-4, 3);
  OpContext x = make_op_context(s);
  auto dH0 = vgrad(Density::h0(), s);
  auto delta = apply_R1dag(x, dH0);
  delta -= vgrad(Density::h1(), s);
  auto M = apply_J1(x, dH0);
  M -= s.flow_rhs();
  auto resid = project_mean(delta - apply_K(x, M));
  double scale = std::max(project_mean(delta).max_abs(), 1e-12);
  sink.le("adjoint_chain.kernel_transport", "rand",
          resid.max_abs() / scale, 1e-4);
  sink.info("adjoint_chain.rand_projected_residual", "rand",
            project_mean(delta).max_abs());

  // Adjointness of R1dag against R1 (machine level, any state).
  std::mt19937_64 rng(o.seed + 9);
  double worst = 0;
  for (int t = 0; t < o.trials; ++t) {
    auto p = random_covector(g, rng, 4, true);
    auto f = random_vector(g, rng, 4, true);
    double lhs = inner_product(p, apply_R(1, x, f));
    double rhs = inner_product(apply_R1dag(x, p), f);
    worst = std::max(worst, detail::rel(std::abs(lhs - rhs), std::abs(lhs)));
  }
  sink.le("adjoint_chain.adjointness", "rand", worst, 1e-8);

  sink.le("higher_flow.qs_projected_zero", "qs",
          higher_flow_rhs(make_qs(g)).projected.max_abs(), 1e-10);

  // Tri-Hamiltonian cross-check on the evolving fixture grid with the small
  // amplitude: J1 dH1 vs J0 R1dag dH1 transported as above is reported.
  auto dH1 = vgrad(Density::h1(), s);
  auto t1 = project_mean(apply_J1(x, dH1));
  auto t2 = project_mean(apply_J0(x, apply_R1dag(x, dH1)));
  sink.info("triham.rand_projected_residual", "rand", (t1 - t2).max_abs());
  return rows;
}

/// Metric diagnostics: determinant, signature census, Ricci flatness and
/// its convergence under time-step halving.
inline std::vector<CheckRow> verify_metric(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  detail::RowSink sink{rows, o.tol_scale};
  const Grid3& g = o.grid;

  auto stack = [&](auto make, double dt, int n) {
    std::vector<FieldState> out;
    for (int j = 0; j < n; ++j) out.push_back(make(j * dt));
    return out;
  };
  auto qs_stack = stack([&](double t) { return make_qs(g, t); }, 0.02, 5);
  auto rep = ricci_report(qs_stack, 0.02, 8);
  sink.le("metric.ricci", "qs", rep.max_abs_ricci, 1e-9);
  sink.le("metric.det", "qs", rep.max_det_error, 1e-10);
  sink.ge("metric.signature_euclidean", "qs",
          rep.samples ? double(rep.euclidean) / rep.samples : 0, 1.0);

  auto qm_stack = stack([&](double t) { return make_qs_minus(g, t); }, 0.02, 5);
  auto repm = ricci_report(qm_stack, 0.02, 8);
  sink.le("metric.ricci", "qs-", repm.max_abs_ricci, 1e-9);
  sink.le("metric.det", "qs-", repm.max_det_error, 1e-10);
  sink.ge("metric.signature_ultrahyperbolic", "qs-",
          repm.samples ? double(repm.ultrahyperbolic) / repm.samples : 0, 1.0);

  auto wave_stack = stack([&](double t) { return make_wave(g, t); }, 0.02, 5);
  auto repw = ricci_report(wave_stack, 0.02, 8);
  sink.le("metric.ricci", "wave", repw.max_abs_ricci, 1e-9);

  auto s0 = make_rand(g, o.seed + 10, +1, o.evolve_amplitude, 2);
  auto run = [&](double dt) {
    auto traj = evolve(s0, 4 * dt, dt);
    return ricci_report(traj.states, dt, 8);
  };
  auto r1 = run(0.02);
  auto r2 = run(0.01);
  sink.le("metric.det", "rand_evolved", r1.max_det_error, 1e-10);
  sink.ge("metric.ricci_convergence_factor", "rand_evolved",
          detail::rel(r1.max_abs_ricci, r2.max_abs_ricci), 12.0);
  sink.ge("metric.signature_euclidean", "rand_evolved",
          r1.samples ? double(r1.euclidean) / r1.samples : 0, 1.0);

  auto sm = make_rand(g, o.seed + 11, -1, o.evolve_amplitude, 2);
  auto rm = ricci_report(evolve(sm, 4 * 0.01, 0.01).states, 0.01, 8);
  sink.ge("metric.signature_ultrahyperbolic", "rand_evolved_eps-1",
          rm.samples ? double(rm.ultrahyperbolic) / rm.samples : 0, 1.0);
  return rows;
}

}  // namespace cma
