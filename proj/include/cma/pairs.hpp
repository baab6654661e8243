#pragma once

#include "cma/calculus.hpp"

namespace cma {

/// Tangent-space object: a symmetry characteristic or flow direction
/// (phi, psi) with u_tau = phi, v_tau = psi.
struct TwoComponentVector {
  PolyField phi, psi;

  TwoComponentVector() = default;
  TwoComponentVector(PolyField a, PolyField b)
      : phi(std::move(a)), psi(std::move(b)) {}

  const Grid3& grid() const { return phi.grid(); }
  double max_abs() const { return std::max(phi.max_abs(), psi.max_abs()); }

  TwoComponentVector& operator+=(const TwoComponentVector& o) {
    phi += o.phi;
    psi += o.psi;
    return *this;
  }
  TwoComponentVector& operator-=(const TwoComponentVector& o) {
    phi -= o.phi;
    psi -= o.psi;
    return *this;
  }
  TwoComponentVector& operator*=(double s) {
    phi *= s;
    psi *= s;
    return *this;
  }
};

/// Cotangent object: a variational-derivative pair (delta_u H, delta_v H).
struct TwoComponentCovector {
  PolyField du, dv;

  TwoComponentCovector() = default;
  TwoComponentCovector(PolyField a, PolyField b)
      : du(std::move(a)), dv(std::move(b)) {}

  const Grid3& grid() const { return du.grid(); }
  double max_abs() const { return std::max(du.max_abs(), dv.max_abs()); }

  TwoComponentCovector& operator+=(const TwoComponentCovector& o) {
    du += o.du;
    dv += o.dv;
    return *this;
  }
  TwoComponentCovector& operator-=(const TwoComponentCovector& o) {
    du -= o.du;
    dv -= o.dv;
    return *this;
  }
  TwoComponentCovector& operator*=(double s) {
    du *= s;
    dv *= s;
    return *this;
  }
};

inline TwoComponentVector operator+(TwoComponentVector a,
                                    const TwoComponentVector& b) {
  a += b;
  return a;
}
inline TwoComponentVector operator-(TwoComponentVector a,
                                    const TwoComponentVector& b) {
  a -= b;
  return a;
}
inline TwoComponentVector operator*(double s, TwoComponentVector a) {
  a *= s;
  return a;
}
inline TwoComponentCovector operator+(TwoComponentCovector a,
                                      const TwoComponentCovector& b) {
  a += b;
  return a;
}
inline TwoComponentCovector operator-(TwoComponentCovector a,
                                      const TwoComponentCovector& b) {
  a -= b;
  return a;
}
inline TwoComponentCovector operator*(double s, TwoComponentCovector a) {
  a *= s;
  return a;
}

inline TwoComponentVector project_mean(const TwoComponentVector& v) {
  return {project_mean(v.phi), project_mean(v.psi)};
}
inline TwoComponentCovector project_mean(const TwoComponentCovector& p) {
  return {project_mean(p.du), project_mean(p.dv)};
}

/// Component-wise integral of the pointwise product.
inline double inner_product(const TwoComponentVector& a,
                            const TwoComponentVector& b) {
  return integrate_box(a.phi * b.phi) + integrate_box(a.psi * b.psi);
}
inline double inner_product(const TwoComponentCovector& a,
                            const TwoComponentCovector& b) {
  return integrate_box(a.du * b.du) + integrate_box(a.dv * b.dv);
}
/// Duality pairing <covector, vector> = int (du*phi + dv*psi).
inline double inner_product(const TwoComponentCovector& p,
                            const TwoComponentVector& v) {
  return integrate_box(p.du * v.phi) + integrate_box(p.dv * v.psi);
}
inline double inner_product(const TwoComponentVector& v,
                            const TwoComponentCovector& p) {
  return inner_product(p, v);
}

}  // namespace cma
