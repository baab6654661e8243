#pragma once

#include <functional>

#include "cma/flow.hpp"

namespace cma {

enum class SymmetryKind { X1, X2, X3, X4, X5, Xalpha, Xbeta };

/// Point-symmetry selector; Xalpha/Xbeta carry their generating function.
/// X1 and X5 are the scaling symmetries without Hamiltonians.
struct Symmetry {
  SymmetryKind kind = SymmetryKind::X3;
  AlphaFunction alpha = AlphaFunction::z();
  BetaFunction beta = BetaFunction::y();

  static Symmetry x1() { return {SymmetryKind::X1}; }
  static Symmetry x2() { return {SymmetryKind::X2}; }
  static Symmetry x3() { return {SymmetryKind::X3}; }
  static Symmetry x4() { return {SymmetryKind::X4}; }
  static Symmetry x5() { return {SymmetryKind::X5}; }
  static Symmetry xalpha(AlphaFunction a) {
    return {SymmetryKind::Xalpha, std::move(a)};
  }
  static Symmetry xbeta(BetaFunction b) {
    return {SymmetryKind::Xbeta, AlphaFunction::z(), std::move(b)};
  }

  bool variational() const {
    return kind != SymmetryKind::X1 && kind != SymmetryKind::X5;
  }

  std::string name() const {
    switch (kind) {
      case SymmetryKind::X1: return "X1";
      case SymmetryKind::X2: return "X2";
      case SymmetryKind::X3: return "X3";
      case SymmetryKind::X4: return "X4";
      case SymmetryKind::X5: return "X5";
      case SymmetryKind::Xalpha: return "Xalpha(" + alpha.name() + ")";
      case SymmetryKind::Xbeta: return "Xbeta(" + beta.name() + ")";
    }
    return "?";
  }

  /// The matching conserved density for variational symmetries.
  Density matching_density() const {
    switch (kind) {
      case SymmetryKind::X2: return Density::h2rot();
      case SymmetryKind::X3: return Density::h3();
      case SymmetryKind::X4: return Density::h4();
      case SymmetryKind::Xalpha: return Density::halpha(alpha);
      case SymmetryKind::Xbeta: return Density::hbeta(beta);
      default:
        throw NonVariationalSymmetry(name() + " has no Hamiltonian");
    }
  }
};

/// Two-component characteristic (phi^u, phi^v) of the point symmetry.
/// Explicit t enters as the state clock; x, y, z enter as monomials.
inline TwoComponentVector characteristic(const Symmetry& sym,
                                         const FieldState& s) {
  const Grid3& g = s.grid();
  StateFields f = derive_fields(s);
  auto xmon = PolyField::monomial(g, Monomial{1, 0, 0});
  auto ymon = PolyField::monomial(g, Monomial{0, 1, 0});
  auto zmon = PolyField::monomial(g, Monomial{0, 0, 1});
  double t = s.t();

  switch (sym.kind) {
    case SymmetryKind::X1: {
      PolyField Q(g, s.coefficients().Q);
      return {f.u - t * f.v - xmon * f.ux,
              t * (f.uxx - Q) - xmon * f.vx};
    }
    case SymmetryKind::X2:
      return {ymon * f.uz - zmon * f.uy, ymon * f.vz - zmon * f.vy};
    case SymmetryKind::X3:
      return {f.uz, f.vz};
    case SymmetryKind::X4:
      return {f.uy, f.vy};
    case SymmetryKind::X5:
      return {f.u - ymon * f.uy - zmon * f.uz,
              f.v - ymon * f.vy - zmon * f.vz};
    case SymmetryKind::Xalpha:
      return {sym.alpha.value(g, t), sym.alpha.dt(g, t)};
    case SymmetryKind::Xbeta: {
      PolyField Q(g, s.coefficients().Q);
      auto by = sym.beta.deriv(g, 1, 0);
      auto bz = sym.beta.deriv(g, 0, 1);
      return {by * f.v - bz * f.ux, by * (Q - f.uxx) - bz * f.vx};
    }
  }
  throw ShapeError("unknown symmetry kind");
}

struct GeneratorResidual {
  std::array<double, 4> alpha_conditions{0, 0, 0, 0};
  double beta_laplace = 0;
  bool valid = false;
};

/// Residuals of the defining conditions for Xalpha (four equations) or Xbeta
/// (the 2-D Laplace equation).
inline GeneratorResidual generator_residual(const Symmetry& sym,
                                            const Grid3& g, double t = 0.0,
                                            double tol = 1e-10) {
  GeneratorResidual r;
  if (sym.kind == SymmetryKind::Xalpha) {
    r.alpha_conditions = sym.alpha.residuals(g, t);
    r.valid = true;
    for (double v : r.alpha_conditions) r.valid = r.valid && (v <= tol);
    return r;
  }
  if (sym.kind == SymmetryKind::Xbeta) {
    r.beta_laplace = sym.beta.laplace_residual(g);
    r.valid = r.beta_laplace <= tol;
    return r;
  }
  throw ShapeError("generator_residual applies to Xalpha/Xbeta only");
}

/// Inverse Noether reconstruction K(characteristic); compare against the
/// vgrad of the matching density.
inline TwoComponentCovector noether_reconstruct(const Symmetry& sym,
                                                const FieldState& s) {
  if (!sym.variational())
    throw NonVariationalSymmetry(sym.name() +
                                 " is a scaling symmetry with no Hamiltonian");
  OpContext x = make_op_context(s);
  return apply_K(x, characteristic(sym, s));
}

// ---------------------------------------------------------------------------
// Finite-difference backend: 4th-order centered stencils on raw samples,
// no periodic wrap, valid on interior nodes only. Used for characteristics
// with unbounded coordinate factors.

struct FdField {
  Grid3 grid;
  std::vector<double> v;
  int mx = 0, my = 0, mz = 0;  // invalid margin per axis

  double at(long idx) const { return v[idx]; }
};

inline FdField fd_sample(const PolyField& f) {
  return FdField{f.grid(), f.sample_total(), 0, 0, 0};
}
inline FdField fd_sample(const PeriodicField& f) {
  return FdField{f.grid(), f.values(), 0, 0, 0};
}

namespace detail {

template <class Get>
inline void fd4_axis_apply(const Grid3& g, const std::vector<double>& in,
                           std::vector<double>& out, Axis axis, bool second,
                           Get&& stride_of) {
  long sx = stride_of(Axis::X), sy = stride_of(Axis::Y), sz = stride_of(Axis::Z);
  long st = stride_of(axis);
  double h = axis == Axis::X ? g.hx() : axis == Axis::Y ? g.hy() : g.hz();
  int n = axis == Axis::X ? g.nx : axis == Axis::Y ? g.ny : g.nz;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        int along = axis == Axis::X ? i : axis == Axis::Y ? j : k;
        long idx = i * sx + j * sy + k * sz;
        if (along < 2 || along >= n - 2) {
          out[idx] = 0;
          continue;
        }
        double m2 = in[idx - 2 * st], m1 = in[idx - st], p1 = in[idx + st],
               p2 = in[idx + 2 * st];
        if (second)
          out[idx] = (-p2 + 16 * p1 - 30 * in[idx] + 16 * m1 - m2) /
                     (12 * h * h);
        else
          out[idx] = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h);
      }
}

}  // namespace detail

inline FdField fd4_derivative(const FdField& f, Axis axis, bool second = false) {
  const Grid3& g = f.grid;
  FdField out{g, std::vector<double>(g.size(), 0.0), f.mx, f.my, f.mz};
  auto stride = [&](Axis a) -> long {
    switch (a) {
      case Axis::X: return static_cast<long>(g.ny) * g.nz;
      case Axis::Y: return g.nz;
      case Axis::Z: return 1;
    }
    return 1;
  };
  detail::fd4_axis_apply(g, f.v, out.v, axis, second, stride);
  switch (axis) {
    case Axis::X: out.mx += 2; break;
    case Axis::Y: out.my += 2; break;
    case Axis::Z: out.mz += 2; break;
  }
  return out;
}

struct FdResidual {
  double raw = 0;        // max |A(Phi)| over the valid interior
  double projected = 0;  // after removing per-plane means on the interior
};

/// A(Phi) on raw sampled data with the finite-difference backend; phi_t and
/// psi_t supplied by the caller (time differencing).
inline FdResidual apply_A_fd(const Coefficients& co, const FdField& phi,
                             const FdField& psi, const FdField& phi_t,
                             const FdField& psi_t) {
  const Grid3& g = phi.grid;
  FdField fx = fd4_derivative(phi, Axis::X);
  FdField fxx = fd4_derivative(phi, Axis::X, true);
  FdField fxy = fd4_derivative(fx, Axis::Y);
  FdField fxz = fd4_derivative(fx, Axis::Z);
  FdField fyy = fd4_derivative(phi, Axis::Y, true);
  FdField fzz = fd4_derivative(phi, Axis::Z, true);
  FdField gy = fd4_derivative(psi, Axis::Y);
  FdField gz = fd4_derivative(psi, Axis::Z);

  int mx = 2 + std::max({phi.mx, psi.mx, phi_t.mx, psi_t.mx});
  int my = 2 + std::max({phi.my, psi.my, phi_t.my, psi_t.my});
  int mz = 2 + std::max({phi.mz, psi.mz, phi_t.mz, psi_t.mz});

  std::vector<double> r1(g.size(), 0.0), r2(g.size(), 0.0);
  for (int i = mx; i < g.nx - mx; ++i)
    for (int j = my; j < g.ny - my; ++j)
      for (int k = mz; k < g.nz - mz; ++k) {
        long idx = g.index(i, j, k);
        double a = co.a(i, j, k), b = co.b(i, j, k), c = co.c(i, j, k),
               Q = co.Q(i, j, k);
        r1[idx] = phi_t.v[idx] - psi.v[idx];
        r2[idx] = fxx.v[idx] -
                  (2.0 / a) * (c * fxz.v[idx] + b * fxy.v[idx]) +
                  (Q / a) * (fyy.v[idx] + fzz.v[idx]) + psi_t.v[idx] -
                  (2.0 / a) * (c * gy.v[idx] - b * gz.v[idx]);
      }

  FdResidual res;
  for (int i = mx; i < g.nx - mx; ++i) {
    // per-plane means over the valid window, for the projected residual
    double mean1 = 0, mean2 = 0;
    long count = 0;
    for (int j = my; j < g.ny - my; ++j)
      for (int k = mz; k < g.nz - mz; ++k) {
        mean1 += r1[g.index(i, j, k)];
        mean2 += r2[g.index(i, j, k)];
        ++count;
      }
    if (count == 0) continue;
    mean1 /= count;
    mean2 /= count;
    for (int j = my; j < g.ny - my; ++j)
      for (int k = mz; k < g.nz - mz; ++k) {
        long idx = g.index(i, j, k);
        res.raw = std::max({res.raw, std::abs(r1[idx]), std::abs(r2[idx])});
        res.projected = std::max({res.projected, std::abs(r1[idx] - mean1),
                                  std::abs(r2[idx] - mean2)});
      }
  }
  return res;
}

enum class ResidualBackend { SpectralMonomial, FiniteDifference };

struct SymmetryResidual {
  double projected = 0;
  double raw = 0;
  int time_order = 0;  // order of the phi_t differencing used
};

/// Symmetry-condition residual of a per-time candidate along a trajectory:
/// phi_t by central differencing at the middle stored time, then A(Phi),
/// reported projected (plane means removed) and raw.
inline SymmetryResidual symmetry_residual(
    const Trajectory& traj,
    const std::function<TwoComponentVector(const FieldState&)>& candidate,
    ResidualBackend backend = ResidualBackend::SpectralMonomial) {
  int n = traj.size();
  if (n < 3) throw ShapeError("symmetry_residual needs >= 3 stored states");
  int m = n / 2;
  bool five = (m >= 2 && m + 2 < n);
  double dt = traj.dt;

  auto diff = [&](auto&& eval) {
    if (five) {
      auto fm2 = eval(m - 2), fm1 = eval(m - 1), fp1 = eval(m + 1),
           fp2 = eval(m + 2);
      return std::pair{
          (1.0 / (12 * dt)) * (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2), 4};
    }
    auto fm1 = eval(m - 1), fp1 = eval(m + 1);
    return std::pair{(1.0 / (2 * dt)) * (fp1 - fm1), 2};
  };

  const FieldState& sm = traj.at(m);
  if (backend == ResidualBackend::SpectralMonomial) {
    auto eval = [&](int i) { return candidate(traj.at(i)); };
    auto [phi_t, order] = diff(eval);
    OpContext x = make_op_context(sm);
    TwoComponentVector r = apply_A(x, candidate(sm), phi_t);
    TwoComponentVector rp = project_mean(r);
    return {rp.max_abs(), r.max_abs(), order};
  }

  auto eval_phi = [&](int i) {
    auto c = candidate(traj.at(i));
    PolyField p = c.phi;
    return p;
  };
  auto eval_psi = [&](int i) {
    auto c = candidate(traj.at(i));
    PolyField p = c.psi;
    return p;
  };
  auto [phi_t_poly, order1] = diff(eval_phi);
  auto [psi_t_poly, order2] = diff(eval_psi);
  auto cm = candidate(sm);
  FdResidual r = apply_A_fd(sm.coefficients(), fd_sample(cm.phi),
                            fd_sample(cm.psi), fd_sample(phi_t_poly),
                            fd_sample(psi_t_poly));
  return {r.projected, r.raw, order1 == 4 && order2 == 4 ? 4 : 2};
}

/// Convenience: residual of a point symmetry id along a trajectory.
inline SymmetryResidual point_symmetry_residual(
    const Trajectory& traj, const Symmetry& sym,
    ResidualBackend backend = ResidualBackend::SpectralMonomial) {
  return symmetry_residual(
      traj, [&](const FieldState& s) { return characteristic(sym, s); },
      backend);
}

}  // namespace cma
