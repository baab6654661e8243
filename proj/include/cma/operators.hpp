#pragma once

#include "cma/state.hpp"

namespace cma {

/// Coefficient bundle for the operator algebra. Q_minus = (c^2 - b^2 + eps)/a
/// and Q_bar = (b^2 - c^2 + eps)/a enter the second Hamiltonian operators.
struct OpContext {
  Grid3 grid;
  PeriodicField a, b, c, Q, Qminus, Qbar;
};

inline OpContext make_op_context(const FieldState& s) {
  Coefficients co = s.coefficients();
  OpContext ctx{s.grid(), co.a, co.b, co.c, co.Q, PeriodicField(), PeriodicField()};
  PeriodicField b2 = co.b * co.b, c2 = co.c * co.c;
  PeriodicField num_m = c2 - b2;
  num_m += static_cast<double>(s.eps());
  PeriodicField num_b = b2 - c2;
  num_b += static_cast<double>(s.eps());
  ctx.Qminus = num_m / co.a;
  ctx.Qbar = num_b / co.a;
  return ctx;
}

/// First Hamiltonian operator: maps a variational-derivative pair to a flow
/// direction. Composition order follows the written form: multiplication
/// operators act before the outer total derivatives.
inline TwoComponentVector apply_J0(const OpContext& x,
                                   const TwoComponentCovector& pq) {
  const PolyField& p = pq.du;
  const PolyField& q = pq.dv;
  PeriodicField a2 = x.a * x.a;
  PolyField phi = q / x.a;
  PolyField psi = -(p / x.a) + (x.c * Dy(q) - x.b * Dz(q)) / a2 +
                  Dy(x.c * (q / a2)) - Dz(x.b * (q / a2));
  return {phi, psi};
}

/// Symplectic operator, the inverse of J0; maps flow directions to
/// variational-derivative pairs.
inline TwoComponentCovector apply_K(const OpContext& x,
                                    const TwoComponentVector& fg) {
  const PolyField& f = fg.phi;
  const PolyField& g = fg.psi;
  PolyField du = x.c * Dy(f) - x.b * Dz(f) + Dy(x.c * f) - Dz(x.b * f) -
                 x.a * g;
  return {du, x.a * f};
}

/// First recursion operator for symmetries (local part plus the nonlocal
/// bracket behind the inverse Laplacian).
inline TwoComponentVector apply_R1(const OpContext& x,
                                   const TwoComponentVector& fg) {
  const PolyField& f = fg.phi;
  const PolyField& g = fg.psi;
  PolyField fx = Dx(f), fy = Dy(f), fz = Dz(f);
  PolyField local2 = x.Q * fz - x.c * fx + x.b * g;
  PolyField w1 = Dy(-(x.a * fx) + x.b * fy + x.c * fz) +
                 Dz(x.c * fy - x.b * fz) - Dz(x.a * g);
  PolyField w2 = Dx(Dy(x.c * fy - x.b * fz) +
                    Dz(x.a * fx - x.b * fy - x.c * fz)) -
                 Dx(Dy(x.a * g));
  return {inv_laplacian_yz(w1), local2 + inv_laplacian_yz(w2)};
}

/// Second recursion operator. This is the negative of the printed source
/// form: as printed, R2 J0 = -J1bar at the flat fixture, while the second
/// bi-Hamiltonian representation pins J1bar's sign through J1bar dH0bar =
/// flow. The factorization R2 = J1bar K then fixes R2 as below.
inline TwoComponentVector apply_R2(const OpContext& x,
                                   const TwoComponentVector& fg) {
  const PolyField& f = fg.phi;
  const PolyField& g = fg.psi;
  PolyField fx = Dx(f), fy = Dy(f), fz = Dz(f);
  PolyField local2 = x.Q * fy - x.b * fx - x.c * g;
  PolyField w1 = Dy(x.c * fy - x.b * fz) +
                 Dz(x.a * fx - x.b * fy - x.c * fz) - Dy(x.a * g);
  PolyField w2 = Dx(Dy(x.a * fx - x.b * fy - x.c * fz) +
                    Dz(x.b * fz - x.c * fy)) +
                 Dx(Dz(x.a * g));
  return {inv_laplacian_yz(w1), local2 + inv_laplacian_yz(w2)};
}

inline TwoComponentVector apply_R(int which, const OpContext& x,
                                  const TwoComponentVector& fg) {
  if (which == 1) return apply_R1(x, fg);
  if (which == 2) return apply_R2(x, fg);
  throw ShapeError("recursion operator index must be 1 or 2");
}

/// Hermitian conjugate of R1, with the inverse Laplacian rightmost. Maps the
/// variational derivatives of one conserved functional to the next one up
/// the chain. The (2,2) entry carries -a D_x D_y: the printed source form
/// has the opposite sign, which fails both the adjointness relation
/// <p, R1 f> = <R1dag p, f> and the factorization R1dag = K J1; the sign
/// used here satisfies both (see the operator test suite).
inline TwoComponentCovector apply_R1dag(const OpContext& x,
                                        const TwoComponentCovector& pq) {
  const PolyField& p = pq.du;
  const PolyField& q = pq.dv;
  PolyField g1 = inv_laplacian_yz(p);
  PolyField g2 = inv_laplacian_yz(q);
  PolyField g1y = Dy(g1), g1z = Dz(g1);
  PolyField h = Dx(g2);
  PolyField hy = Dy(h), hz = Dz(h);
  PolyField out1 = Dx(x.c * q) - Dz(x.Q * q)
                   - Dx(x.a * g1y) + Dy(x.b * g1y) + Dz(x.c * g1y)
                   + Dy(x.c * g1z) - Dz(x.b * g1z)
                   + Dz(x.b * hy) - Dy(x.c * hy)
                   - Dx(x.a * hz) + Dy(x.b * hz) + Dz(x.c * hz);
  PolyField out2 = x.b * q + x.a * Dz(g1) - x.a * Dx(Dy(g2));
  return {out1, out2};
}

/// Second Hamiltonian operator J1 = R1 J0, direct evaluation.
inline TwoComponentVector apply_J1(const OpContext& x,
                                   const TwoComponentCovector& pq) {
  const PolyField& p = pq.du;
  const PolyField& q = pq.dv;
  PeriodicField a2 = x.a * x.a;
  PolyField qx = Dx(q), qy = Dy(q), qz = Dz(q);
  PolyField phi = inv_laplacian_yz(Dz(p) - Dx(Dy(q))) + (q * x.b) / x.a;
  PolyField psi = inv_laplacian_yz(Dx(Dy(p)) + Dx(Dx(Dz(q)))) -
                  (p * x.b) / x.a +
                  (x.c * (x.b * qy - x.a * qx)) / a2 +
                  Dy(x.b * x.c * (q / a2)) - Dx(x.c * (q / x.a)) +
                  0.5 * ((x.Qminus * qz) / x.a) +
                  0.5 * Dz(x.Qminus * (q / x.a));
  return {phi, psi};
}

/// The companion Hamiltonian operator J^1 = R2 J0.
inline TwoComponentVector apply_J1bar(const OpContext& x,
                                      const TwoComponentCovector& pq) {
  const PolyField& p = pq.du;
  const PolyField& q = pq.dv;
  PeriodicField a2 = x.a * x.a;
  PolyField qx = Dx(q), qy = Dy(q), qz = Dz(q);
  PolyField phi = inv_laplacian_yz(Dy(p) + Dx(Dz(q))) - (q * x.c) / x.a;
  PolyField psi = inv_laplacian_yz(-Dx(Dz(p)) + Dx(Dx(Dy(q)))) +
                  (p * x.c) / x.a +
                  (x.b * (x.c * qz - x.a * qx)) / a2 +
                  Dz(x.b * x.c * (q / a2)) - Dx(x.b * (q / x.a)) +
                  0.5 * ((x.Qbar * qy) / x.a) +
                  0.5 * Dy(x.Qbar * (q / x.a));
  return {phi, psi};
}

/// Chain operators J_n = R1^n J0.
inline TwoComponentVector apply_Jchain(int n, const OpContext& x,
                                       const TwoComponentCovector& pq) {
  if (n < 0) throw ShapeError("chain level must be non-negative");
  TwoComponentVector v = apply_J0(x, pq);
  for (int i = 0; i < n; ++i) v = apply_R1(x, v);
  return v;
}

/// Symmetry-condition operator applied to a candidate characteristic with
/// caller-supplied time derivative. A(Phi) = 0 on symmetries.
inline TwoComponentVector apply_A(const OpContext& x,
                                  const TwoComponentVector& phi,
                                  const TwoComponentVector& phi_t) {
  const PolyField& f = phi.phi;
  const PolyField& g = phi.psi;
  PolyField fx = Dx(f);
  PolyField row1 = phi_t.phi - g;
  PolyField row2 = Dx(fx) -
                   (2.0 * (x.c * Dz(fx) + x.b * Dy(fx))) / x.a +
                   (x.Q * laplacian_yz(f)) / x.a + phi_t.psi -
                   (2.0 * (x.c * Dy(g) - x.b * Dz(g))) / x.a;
  return {row1, row2};
}

/// Tangent-flow right-hand side solved from A(Phi) = 0:
/// phi_t = psi, psi_t = -[linearized spatial operator]phi + transport(psi).
inline TwoComponentVector linearized_rhs(const OpContext& x,
                                         const TwoComponentVector& phi) {
  const PolyField& f = phi.phi;
  const PolyField& g = phi.psi;
  PolyField fx = Dx(f);
  PolyField psi_t = -Dx(fx) +
                    (2.0 * (x.c * Dz(fx) + x.b * Dy(fx))) / x.a -
                    (x.Q * laplacian_yz(f)) / x.a +
                    (2.0 * (x.c * Dy(g) - x.b * Dz(g))) / x.a;
  return {g, psi_t};
}

}  // namespace cma
