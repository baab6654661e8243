#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "cma/calculus.hpp"
#include "cma/fixtures.hpp"

using namespace cma;

namespace {
const Grid3 g16 = Grid3::cube(16);

PolyField band_limited_poly(unsigned seed, int max_mode = 3) {
  std::mt19937_64 rng(seed);
  return PolyField(g16, random_band_limited(g16, rng, max_mode, 1.0));
}
}  // namespace

TEST_CASE("spectral derivative of a resolved mode is exact", "[calculus]") {
  auto f = PolyField(g16, PeriodicField::sample(g16, [](double, double y, double) {
                       return std::sin(y);
                     }));
  auto d = Dy(f);
  auto expect = PeriodicField::sample(g16, [](double, double y, double) {
    return std::cos(y);
  });
  CHECK((d.periodic_part() - expect).max_abs() <= 1e-12);

  auto c = PolyField::constant(g16, 1.0);
  CHECK(Dy(c).max_abs() == 0.0);
}

TEST_CASE("monomial product rule for derivatives", "[calculus]") {
  // f = z * sin(x): D_z f = sin(x), D_x f = z cos(x)
  auto sinx = PeriodicField::sample(
      g16, [](double x, double, double) { return std::sin(x); });
  PolyField f(g16);
  f.set_term(Monomial{0, 0, 1}, sinx);

  auto dz = Dz(f);
  CHECK((dz.periodic_part() - sinx).max_abs() <= 1e-12);

  auto dx = Dx(f);
  auto cosx = PeriodicField::sample(
      g16, [](double x, double, double) { return std::cos(x); });
  CHECK((dx.term(Monomial{0, 0, 1}) - cosx).max_abs() <= 1e-12);
  CHECK(dx.term(Monomial{}).max_abs() <= 1e-12);
}

TEST_CASE("mixed partials commute", "[calculus]") {
  auto f = band_limited_poly(7);
  for (auto [a, b] : {std::pair{Axis::X, Axis::Y}, {Axis::Y, Axis::Z},
                      {Axis::X, Axis::Z}}) {
    auto lhs = derivative(derivative(f, a), b);
    auto rhs = derivative(derivative(f, b), a);
    CHECK((lhs - rhs).max_abs() <= 1e-11 * std::max(1.0, lhs.max_abs()));
  }
}

TEST_CASE("project_mean kernel convention", "[calculus]") {
  CHECK(project_mean(PolyField::constant(g16, 5.0)).max_abs() <= 1e-14);

  auto siny = PolyField(g16, PeriodicField::sample(g16, [](double, double y, double) {
                          return std::sin(y);
                        }));
  CHECK((project_mean(siny) - siny).max_abs() <= 1e-13);

  // Constant on every (y,z) plane: the plane mean is the field itself.
  auto sinx = PolyField(g16, PeriodicField::sample(g16, [](double x, double, double) {
                          return std::sin(x);
                        }));
  CHECK(project_mean(sinx).max_abs() <= 1e-13);

  // Idempotent and commutes with derivatives on random periodic data.
  auto f = band_limited_poly(11);
  CHECK((project_mean(project_mean(f)) - project_mean(f)).max_abs() <= 1e-13);
  for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
    auto lhs = project_mean(derivative(f, ax));
    auto rhs = derivative(project_mean(f), ax);
    CHECK((lhs - rhs).max_abs() <= 1e-11);
  }
}

TEST_CASE("inverse yz Laplacian on periodic shapes", "[calculus]") {
  // f = -cos(z) -> cos(z)
  auto f = PolyField(g16, PeriodicField::sample(g16, [](double, double, double z) {
                       return -std::cos(z);
                     }));
  auto F = inv_laplacian_yz(f);
  auto expect = PeriodicField::sample(
      g16, [](double, double, double z) { return std::cos(z); });
  CHECK((F.periodic_part() - expect).max_abs() <= 1e-12);

  // Constants sit in the kernel sector.
  CHECK(inv_laplacian_yz(PolyField::constant(g16, 7.0)).max_abs() <= 1e-13);
}

TEST_CASE("inverse yz Laplacian on monomial-weighted shapes", "[calculus]") {
  // f = z sin(y): expect z*(-sin y) + H0 with Delta H0 = 2 cos... checked
  // through the defining identity Delta(output) = project_mean(f).
  auto siny = PeriodicField::sample(
      g16, [](double, double y, double) { return std::sin(y); });
  PolyField f(g16);
  f.set_term(Monomial{0, 0, 1}, siny);
  auto F = inv_laplacian_yz(f);
  CHECK((F.term(Monomial{0, 0, 1}) + siny).max_abs() <= 1e-12);
  auto resid = laplacian_yz(F) - project_mean(f);
  CHECK(resid.max_abs() <= 1e-11);

  // Random mixed shape z*g1 + y*g2 + g0, including x monomial passthrough.
  std::mt19937_64 rng(3);
  PolyField h(g16);
  h.set_term(Monomial{0, 0, 1}, random_band_limited(g16, rng, 3, 1.0));
  h.set_term(Monomial{0, 1, 0}, random_band_limited(g16, rng, 3, 1.0));
  h.set_term(Monomial{0, 0, 0}, random_band_limited(g16, rng, 3, 1.0));
  h.set_term(Monomial{2, 0, 0}, random_band_limited(g16, rng, 3, 1.0));
  auto H = inv_laplacian_yz(h);
  auto r = laplacian_yz(H) - project_mean(h);
  CHECK(r.max_abs() <= 1e-10 * std::max(1.0, h.max_abs()));

  // Unsupported shapes are rejected.
  PolyField bad(g16);
  bad.set_term(Monomial{0, 1, 1}, siny);
  CHECK_THROWS_AS(inv_laplacian_yz(bad), ShapeError);
  PolyField bad2(g16);
  bad2.set_term(Monomial{0, 2, 0}, siny);
  CHECK_THROWS_AS(inv_laplacian_yz(bad2), ShapeError);
}

TEST_CASE("box integration", "[calculus]") {
  double vol = g16.volume();
  CHECK(integrate_box(PolyField::constant(g16, 1.0)) ==
        Catch::Approx(vol).margin(1e-10));

  auto sinx = PolyField(g16, PeriodicField::sample(g16, [](double x, double, double) {
                          return std::sin(x);
                        }));
  CHECK(std::abs(integrate_box(sinx)) <= 1e-12 * vol);

  // f = z on the box: integral = vol * Lz/2 = vol * pi.
  auto fz = PolyField::monomial(g16, Monomial{0, 0, 1});
  CHECK(integrate_box(fz) == Catch::Approx(vol * kPi).epsilon(1e-13));

  // Monomial times resolved mode: int z cos(z) dz over [0,2pi) = 0...
  // use int z sin(z) dz = -2pi instead (per period), others full volume.
  auto zsinz = PolyField(g16);
  zsinz.set_term(Monomial{0, 0, 1},
                 PeriodicField::sample(g16, [](double, double, double z) {
                   return std::sin(z);
                 }));
  double expect = g16.Lx * g16.Ly * (-kTwoPi);
  CHECK(integrate_box(zsinz) == Catch::Approx(expect).epsilon(1e-12));

  // Total derivatives of periodic data integrate to zero.
  auto f = band_limited_poly(23);
  for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
    CHECK(std::abs(integrate_box(derivative(f, ax))) <= 1e-10);
}

TEST_CASE("integration of quadratic and cubic monomials", "[calculus]") {
  // int x^2 over the box
  auto x2 = PolyField::monomial(g16, Monomial{2, 0, 0});
  double expect = (std::pow(kTwoPi, 3) / 3.0) * g16.Ly * g16.Lz;
  CHECK(integrate_box(x2) == Catch::Approx(expect).epsilon(1e-12));

  // int x y^2 sin(x+y) -- cross-check against a dense trigonometric
  // reference computed analytically:
  //   int_0^2pi x sin(x + y) dx = -2pi cos(y) [shift orthogonality]
  //   int_0^2pi y^2 * (-2pi cos y) dy = -2pi * 4pi = -8 pi^2 ... times Lz
  auto fld = PolyField(g16);
  fld.set_term(Monomial{1, 2, 0},
               PeriodicField::sample(g16, [](double x, double y, double) {
                 return std::sin(x + y);
               }));
  double ref = -8.0 * kPi * kPi * g16.Lz;
  CHECK(integrate_box(fld) == Catch::Approx(ref).epsilon(1e-11));
}

TEST_CASE("inner products", "[calculus]") {
  TwoComponentVector e1{PolyField::constant(g16, 1.0), PolyField(g16)};
  TwoComponentVector e2{PolyField(g16), PolyField::constant(g16, 1.0)};
  CHECK(inner_product(e1, e2) == Catch::Approx(0.0).margin(1e-14));

  auto sinx = PolyField(g16, PeriodicField::sample(g16, [](double x, double, double) {
                          return std::sin(x);
                        }));
  TwoComponentVector f{sinx, PolyField(g16)};
  CHECK(inner_product(f, f) == Catch::Approx(g16.volume() / 2).epsilon(1e-12));

  std::mt19937_64 rng(5);
  auto p = random_covector(g16, rng);
  auto q = random_covector(g16, rng);
  CHECK(inner_product(2.0 * p, q) ==
        Catch::Approx(2.0 * inner_product(p, q)).epsilon(1e-12));
}

TEST_CASE("degree cap is enforced", "[calculus]") {
  auto x2 = PolyField::monomial(g16, Monomial{2, 0, 0});
  auto y2 = PolyField::monomial(g16, Monomial{0, 2, 0});
  CHECK_THROWS_AS(x2 * y2, ShapeError);
  auto z1 = PolyField::monomial(g16, Monomial{0, 0, 1});
  CHECK_NOTHROW(x2 * z1);
}
