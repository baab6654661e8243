#include <catch2/catch_amalgamated.hpp>

#include "cma/fixtures.hpp"

using namespace cma;

namespace {
const Grid3 g = Grid3::cube(16);

PeriodicField roll_x(const PeriodicField& f, int shift) {
  const Grid3& gr = f.grid();
  PeriodicField out(gr);
  for (int i = 0; i < gr.nx; ++i)
    for (int j = 0; j < gr.ny; ++j)
      for (int k = 0; k < gr.nz; ++k)
        out((i + shift) % gr.nx, j, k) = f(i, j, k);
  return out;
}
}  // namespace

TEST_CASE("QS coefficients", "[state]") {
  auto s = make_qs(g);
  auto co = s.coefficients();
  CHECK((co.a - PeriodicField(g, 1.0)).max_abs() <= 1e-13);
  CHECK(co.b.max_abs() <= 1e-13);
  CHECK(co.c.max_abs() <= 1e-13);
  CHECK((co.Q - PeriodicField(g, 1.0)).max_abs() <= 1e-13);
}

TEST_CASE("QS- coefficients", "[state]") {
  auto s = make_qs_minus(g);
  auto co = s.coefficients();
  CHECK((co.a - PeriodicField(g, -1.0)).max_abs() <= 1e-13);
  CHECK((co.Q - PeriodicField(g, 1.0)).max_abs() <= 1e-13);
}

TEST_CASE("WAVE coefficients stay constant", "[state]") {
  auto s = make_wave(g, 0.3);
  auto co = s.coefficients();
  CHECK((co.a - PeriodicField(g, 1.0)).max_abs() <= 1e-13);
  CHECK(co.b.max_abs() <= 1e-13);
  CHECK(co.c.max_abs() <= 1e-13);
  CHECK((co.Q - PeriodicField(g, 1.0)).max_abs() <= 1e-13);
}

TEST_CASE("pointwise identity Q a - b^2 - c^2 = eps", "[state]") {
  for (auto s : {make_rand(g, 42, +1), make_rand(g, 43, -1)}) {
    auto co = s.coefficients();
    auto resid = co.Q * co.a - co.b * co.b - co.c * co.c;
    resid += -static_cast<double>(s.eps());
    CHECK(resid.max_abs() <= 1e-12);
  }
}

TEST_CASE("flow_rhs of the exact fixtures", "[state]") {
  auto qs = make_qs(g);
  auto r = qs.flow_rhs();
  CHECK(r.phi.max_abs() <= 1e-13);
  CHECK((r.psi - PolyField::constant(g, 0.5)).max_abs() <= 1e-12);

  auto qm = make_qs_minus(g);
  auto rm = qm.flow_rhs();
  CHECK(rm.phi.max_abs() <= 1e-13);
  CHECK((rm.psi - PolyField::constant(g, 0.5)).max_abs() <= 1e-12);

  // WAVE at t=0: (-A k sin(kx), 1/2 + A k^2 sin(kx)).
  double A = 0.01, k = 1.0;
  auto w = make_wave(g, 0.0, A, k);
  auto rw = w.flow_rhs();
  auto expect_phi = PeriodicField::sample(g, [&](double x, double, double) {
    return -A * k * std::sin(k * x);
  });
  auto expect_psi = PeriodicField::sample(g, [&](double x, double, double) {
    return 0.5 + A * k * k * std::sin(k * x);
  });
  CHECK((rw.phi.periodic_part() - expect_phi).max_abs() <= 1e-12);
  CHECK((rw.psi.periodic_part() - expect_psi).max_abs() <= 1e-12);
}

TEST_CASE("fluctuation flow is zero on exact backgrounds", "[state]") {
  for (auto s : {make_qs(g), make_qs_minus(g), make_wave(g, 0.7)}) {
    auto [du, dv] = s.fluct_rhs();
    CHECK(du.max_abs() <= 1e-13);
    CHECK(dv.max_abs() <= 1e-12);
  }
}

TEST_CASE("nondegeneracy check and DegenerateState", "[state]") {
  auto qs = make_qs(g);
  auto rep = qs.nondegeneracy_check();
  CHECK(rep.ok);
  CHECK(rep.min_abs_a == Catch::Approx(1.0));

  // a = 1 - amp cos(y) with amp = 0.96: min |a| = 0.04 < 0.1.
  double amp = 0.96;
  PeriodicField uf = PeriodicField::sample(g, [&](double, double y, double) {
    return amp * std::cos(y);
  });
  auto bad = qs.with_fluct(uf, PeriodicField(g), 0.0);
  auto rep2 = bad.nondegeneracy_check();
  CHECK_FALSE(rep2.ok);
  CHECK(rep2.min_abs_a == Catch::Approx(1.0 - amp).margin(1e-10));
  CHECK_THROWS_AS(bad.coefficients(), DegenerateState);

  // Zero background: a == 0 everywhere.
  auto flat = FieldState::background_only(g, +1, Background{});
  CHECK_FALSE(flat.nondegeneracy_check().ok);
  CHECK_THROWS_AS(flat.coefficients(), DegenerateState);
}

TEST_CASE("discrete x-translation equivariance", "[state]") {
  auto s = make_rand(g, 99, +1);
  auto shifted = s.with_fluct(roll_x(s.u_fluct(), 1), roll_x(s.v_fluct(), 1),
                              s.t());
  auto co = s.coefficients();
  auto co2 = shifted.coefficients();
  CHECK((roll_x(co.a, 1) - co2.a).max_abs() <= 1e-12);
  CHECK((roll_x(co.b, 1) - co2.b).max_abs() <= 1e-12);
  CHECK((roll_x(co.c, 1) - co2.c).max_abs() <= 1e-12);
  CHECK((roll_x(co.Q, 1) - co2.Q).max_abs() <= 1e-12);
}

TEST_CASE("collar taper suppresses the fixture near the faces", "[state]") {
  auto s = make_rand(g, 7, +1, 1e-3, 3);
  double collar_max = 0;
  double width = g.Lx / 10.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        auto close = [&](double v, double L) {
          return v < width || v > L - width;
        };
        if (close(g.x(i), g.Lx) || close(g.y(j), g.Ly) || close(g.z(k), g.Lz))
          collar_max = std::max({collar_max, std::abs(s.u_fluct()(i, j, k)),
                                 std::abs(s.v_fluct()(i, j, k))});
      }
  CHECK(collar_max <= 1e-6);
}
