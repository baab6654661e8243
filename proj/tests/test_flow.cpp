#include <catch2/catch_amalgamated.hpp>

#include "cma/flow.hpp"

using namespace cma;

namespace {
const Grid3 g = Grid3::cube(16);

double wave_error(const FieldState& s, double A, double k) {
  auto [uf, vf] = wave_exact_fluct(s.grid(), s.t(), A, k);
  return std::max((s.u_fluct() - uf).max_abs(), (s.v_fluct() - vf).max_abs());
}
}  // namespace

TEST_CASE("QS is a fixed point of the fluctuation flow", "[flow]") {
  auto qs = make_qs(g);
  auto s1 = rk4_step(qs, 0.05);
  CHECK(s1.u_fluct().max_abs() <= 1e-14);
  CHECK(s1.v_fluct().max_abs() <= 1e-14);
  CHECK(s1.t() == Catch::Approx(0.05));
}

TEST_CASE("one step against the closed-form wave", "[flow]") {
  auto s = make_wave_numeric(g, 0.0, 0.01, 1.0);
  auto s1 = rk4_step(s, 1e-2);
  CHECK(wave_error(s1, 0.01, 1.0) <= 5e-9);
}

TEST_CASE("RK4 convergence order on the wave family", "[flow]") {
  // k = 2 puts the truncation error well above the double-precision floor
  // at these step sizes.
  double A = 0.01, k = 2.0;
  auto error_at = [&](double dt) {
    auto s = make_wave_numeric(g, 0.0, A, k);
    int n = static_cast<int>(std::llround(0.1 / dt));
    for (int i = 0; i < n; ++i) s = rk4_step(s, dt);
    return wave_error(s, A, k);
  };
  double e1 = error_at(2e-2);
  double e2 = error_at(1e-2);
  CHECK(e1 / e2 >= 15.0);
  CHECK(std::log2(e1 / e2) >= 3.9);
}

TEST_CASE("growth budget and overflow guards", "[flow]") {
  auto s = make_rand(g, 7, +1, 1e-4, 2);
  CHECK_THROWS_AS(evolve(s, 2.0, 1e-2), GrowthBudgetExceeded);

  FlowOptions opt;
  opt.enforce_collar = true;
  auto bad = make_qs_perturbed(g, 1e-3);  // not collar supported
  CHECK_THROWS_AS(evolve(bad, 1e-2, 1e-3, opt), CollarViolation);
}

TEST_CASE("conservation along evolved solutions", "[flow]") {
  std::vector<Density> densities = {Density::h1(), Density::h3(),
                                    Density::h4(),
                                    Density::halpha(AlphaFunction::wave(1.0))};
  for (int eps : {+1, -1}) {
    auto s = make_rand(g, 100 + eps, eps, 1e-4, 2);
    auto [traj, rep] = evolve_with_monitor(s, 0.05, 1e-3, densities);
    INFO("eps = " << eps);
    CHECK(rep.max_relative_drift <= 1e-6);
  }
}

TEST_CASE("spectral filter damps the top band", "[flow]") {
  FilterSpec fs;
  fs.enabled = true;
  auto f = PeriodicField::sample(g, [](double x, double y, double) {
    return std::sin(7 * x) + std::sin(y);
  });
  auto damped = apply_filter(f, fs);
  // mode 7 of 8 is strongly damped, mode 1 untouched
  auto low = PeriodicField::sample(g, [](double, double y, double) {
    return std::sin(y);
  });
  CHECK((damped - low).max_abs() <= 0.2);
  CHECK(std::abs((damped - low).max_abs()) >= 1e-6);  // not exactly removed
}

TEST_CASE("tangent flow transports symmetries", "[flow]") {
  // Time translation: the tangent solution seeded with flow_rhs stays equal
  // to flow_rhs along the trajectory.
  auto s0 = make_wave_numeric(g, 0.0, 0.01, 1.0);
  auto traj = evolve(s0, 0.02, 2e-3);
  auto tangent = tangent_evolve(traj, s0.flow_rhs());
  auto expect = traj.states.back().flow_rhs();
  auto diff = tangent.back() - expect;
  CHECK(project_mean(diff).max_abs() <= 1e-6);

  // Zero seeds stay zero.
  auto zeros = tangent_evolve(traj, TwoComponentVector{PolyField(g), PolyField(g)});
  CHECK(zeros.back().max_abs() == 0.0);
}

TEST_CASE("tangent flow matches the nearby-solution quotient", "[flow]") {
  auto s0 = make_rand(g, 55, +1, 1e-4, 2);
  double h = 1e-6;
  std::mt19937_64 rng(3);
  PeriodicField wu = random_band_limited(g, rng, 2, 1.0);
  PeriodicField wv = random_band_limited(g, rng, 2, 1.0);

  auto traj = evolve(s0, 0.02, 2e-3);
  auto tangent = tangent_evolve(
      traj, TwoComponentVector{PolyField(g, wu), PolyField(g, wv)});

  auto plus = evolve(s0.with_fluct(s0.u_fluct() + h * wu,
                                   s0.v_fluct() + h * wv, 0.0),
                     0.02, 2e-3);
  auto minus = evolve(s0.with_fluct(s0.u_fluct() - h * wu,
                                    s0.v_fluct() - h * wv, 0.0),
                      0.02, 2e-3);
  PeriodicField qu = (0.5 / h) * (plus.states.back().u_fluct() -
                                  minus.states.back().u_fluct());
  PeriodicField qv = (0.5 / h) * (plus.states.back().v_fluct() -
                                  minus.states.back().v_fluct());
  auto diff_u = (tangent.back().phi - PolyField(g, qu)).max_abs();
  auto diff_v = (tangent.back().psi - PolyField(g, qv)).max_abs();
  double scale = std::max(1.0, tangent.back().max_abs());
  CHECK(diff_u <= 1e-5 * scale);
  CHECK(diff_v <= 1e-5 * scale);
}

TEST_CASE("first higher flow", "[flow]") {
  // At QS the higher flow right-hand side vanishes after projection: the
  // covector (-1/2, 0) is constant and every operator entry annihilates it.
  auto hf = higher_flow_rhs(make_qs(g));
  CHECK(hf.projected.max_abs() <= 1e-11);

  // Linearity of p -> J1 p.
  auto s = make_rand(g, 60, +1, 1e-4, 2);
  OpContext x = make_op_context(s);
  std::mt19937_64 rng(8);
  auto p = random_covector(g, rng);
  auto q = random_covector(g, rng);
  auto sum = apply_J1(x, p + q);
  sum -= apply_J1(x, p);
  sum -= apply_J1(x, q);
  CHECK(sum.max_abs() <= 1e-11 * std::max(1.0, p.max_abs()));

  // Tri-Hamiltonian cross-check on the exact fixtures.
  for (auto st : {make_qs(g), make_wave(g, 0.1)}) {
    OpContext xo = make_op_context(st);
    auto dH1 = vgrad(Density::h1(), st);
    auto lhs = project_mean(apply_J1(xo, dH1));
    auto rhs = project_mean(apply_J0(xo, apply_R1dag(xo, dH1)));
    CHECK((lhs - rhs).max_abs() <= 1e-7);
  }
}

TEST_CASE("commuting flows probe", "[flow]") {
  // Evolving dt along the flow then dtau along the higher flow agrees with
  // the reverse order to the stated mixed-order accuracy; reported, not a
  // gate on the hierarchy.
  Grid3 gs = Grid3::cube(16);
  auto s = make_rand(gs, 61, +1, 1e-4, 2);
  double dt = 1e-3, dtau = 1e-3;
  auto step_higher = [&](const FieldState& st, double h) {
    // periodic sector of the nonlocal flow; the small monomial-carrying
    // part cannot feed a periodic fluctuation
    auto hf = higher_flow_rhs(st);
    PeriodicField du = st.u_fluct() + h * hf.projected.phi.term(Monomial{});
    PeriodicField dv = st.v_fluct() + h * hf.projected.psi.term(Monomial{});
    return st.with_fluct(std::move(du), std::move(dv), st.t());
  };
  auto ab = step_higher(rk4_step(s, dt), dtau);
  auto ba = rk4_step(step_higher(s, dtau), dt);
  double gap = std::max((ab.u_fluct() - ba.u_fluct()).max_abs(),
                        (ab.v_fluct() - ba.v_fluct()).max_abs());
  CHECK(gap <= 10.0 * dt * dtau * (dt + dtau));
}
