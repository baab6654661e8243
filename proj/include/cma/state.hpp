#pragma once

#include <optional>

#include "cma/background.hpp"
#include "cma/pairs.hpp"

namespace cma {

/// The coefficient fields of the flow, purely periodic for quadratic
/// backgrounds: a = Delta(u), b = u_xy - v_z, c = v_y + u_xz,
/// Q = (b^2 + c^2 + eps)/a.
struct Coefficients {
  PeriodicField a, b, c, Q;
};

struct NondegeneracyReport {
  double min_abs_a = 0;
  bool ok = false;
};

/// The unknowns (u, v) split as analytic background plus periodic
/// fluctuation: u = u_bg + u_fluct, v = d_t u_bg + v_fluct.
class FieldState {
 public:
  FieldState() = default;
  FieldState(const Grid3& g, int eps, const Background& bg,
             PeriodicField u_fluct, PeriodicField v_fluct, double t = 0.0,
             double delta_a = 0.1)
      : grid_(g),
        eps_(eps),
        bg_(bg),
        u_fluct_(std::move(u_fluct)),
        v_fluct_(std::move(v_fluct)),
        t_(t),
        delta_a_(delta_a) {
    if (eps != 1 && eps != -1) throw ShapeError("epsilon must be +1 or -1");
    if (!(u_fluct_.grid() == g) || !(v_fluct_.grid() == g))
      throw ShapeError("fluctuation grid mismatch");
    if (!u_fluct_.all_finite() || !v_fluct_.all_finite())
      throw ShapeError("fluctuation contains non-finite values");
  }

  static FieldState background_only(const Grid3& g, int eps,
                                    const Background& bg, double t = 0.0,
                                    double delta_a = 0.1) {
    return FieldState(g, eps, bg, PeriodicField(g), PeriodicField(g), t,
                      delta_a);
  }

  const Grid3& grid() const { return grid_; }
  int eps() const { return eps_; }
  double t() const { return t_; }
  double delta_a() const { return delta_a_; }
  const Background& background() const { return bg_; }
  const PeriodicField& u_fluct() const { return u_fluct_; }
  const PeriodicField& v_fluct() const { return v_fluct_; }

  FieldState with_fluct(PeriodicField uf, PeriodicField vf, double t) const {
    return FieldState(grid_, eps_, bg_, std::move(uf), std::move(vf), t,
                      delta_a_);
  }
  FieldState without_fluct() const {
    return background_only(grid_, eps_, bg_, t_, delta_a_);
  }

  PolyField u() const {
    PolyField out = bg_.u_poly(grid_, t_);
    out.add_term(Monomial{}, u_fluct_);
    return out;
  }
  PolyField v() const {
    PolyField out = bg_.v_poly(grid_, t_);
    out.add_term(Monomial{}, v_fluct_);
    return out;
  }

  PeriodicField a_field() const {
    return laplacian_yz(u()).periodic_part();
  }

  NondegeneracyReport nondegeneracy_check() const {
    NondegeneracyReport r;
    r.min_abs_a = a_field().min_abs();
    r.ok = r.min_abs_a >= delta_a_;
    return r;
  }

  Coefficients coefficients() const {
    PolyField up = u();
    PolyField vp = v();
    Coefficients co;
    co.a = laplacian_yz(up).periodic_part();
    if (co.a.min_abs() < delta_a_)
      throw DegenerateState("min |a| = " + std::to_string(co.a.min_abs()) +
                            " below delta_a = " + std::to_string(delta_a_));
    co.b = (Dy(Dx(up)) - Dz(vp)).periodic_part();
    co.c = (Dy(vp) + Dz(Dx(up))).periodic_part();
    PeriodicField num = co.b * co.b + co.c * co.c;
    num += static_cast<double>(eps_);
    co.Q = num / co.a;
    return co;
  }

  /// Right-hand side (u_t, v_t) = (v, Q - u_xx) of the full flow.
  TwoComponentVector flow_rhs() const {
    Coefficients co = coefficients();
    PolyField uxx = Dx(Dx(u()));
    return {v(), PolyField(grid_, co.Q) - uxx};
  }

  /// Flow of the fluctuation alone: full right-hand side minus the analytic
  /// time derivative of the background.
  std::pair<PeriodicField, PeriodicField> fluct_rhs() const {
    Coefficients co = coefficients();
    PeriodicField uxx = Dx(Dx(u())).periodic_part();
    // x^2 background curvature enters uxx's periodic part via the product
    // rule on the monomial, so periodic_part() already holds kappa_x/2.
    PeriodicField dv = co.Q - uxx - bg_.utt(grid_, t_);
    return {v_fluct_, dv};
  }

 private:
  Grid3 grid_;
  int eps_ = 1;
  Background bg_;
  PeriodicField u_fluct_, v_fluct_;
  double t_ = 0;
  double delta_a_ = 0.1;
};

}  // namespace cma
