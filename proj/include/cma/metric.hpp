#pragma once

#include <array>

#include "cma/flow.hpp"

namespace cma {

using Mat4 = std::array<std::array<double, 4>, 4>;

/// The hyper-Kahler metric in coordinates (t, x, y, z):
/// g = (1/4) [[Q,0,c,-b],[0,Q,b,c],[c,b,a,0],[-b,c,0,a]].
inline Mat4 metric_entries(double a, double b, double c, double Q) {
  Mat4 g{};
  g[0][0] = g[1][1] = 0.25 * Q;
  g[2][2] = g[3][3] = 0.25 * a;
  g[0][2] = g[2][0] = 0.25 * c;
  g[1][3] = g[3][1] = 0.25 * c;
  g[1][2] = g[2][1] = 0.25 * b;
  g[0][3] = g[3][0] = -0.25 * b;
  return g;
}

struct MetricSample {
  Mat4 g{};
  int i = 0, j = 0, k = 0;
  double det = 0;
};

inline double det4(const Mat4& m) {
  // cofactor expansion via 2x2 minors of the last two columns
  auto minor2 = [&](int r0, int r1) {
    return m[r0][2] * m[r1][3] - m[r0][3] * m[r1][2];
  };
  double det = 0;
  int rows[4] = {0, 1, 2, 3};
  int sign[6] = {+1, -1, +1, +1, -1, +1};
  int pair_idx = 0;
  for (int p = 0; p < 3; ++p)
    for (int q = p + 1; q < 4; ++q) {
      int r[2], ri = 0;
      for (int t = 0; t < 4; ++t)
        if (t != p && t != q) r[ri++] = t;
      double lead = m[p][0] * m[q][1] - m[p][1] * m[q][0];
      det += sign[pair_idx] * lead * minor2(rows[r[0]], rows[r[1]]);
      ++pair_idx;
    }
  return det;
}

inline Mat4 invert4(const Mat4& m) {
  // Gauss-Jordan with partial pivoting
  double aug[4][8];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      aug[i][j] = m[i][j];
      aug[i][j + 4] = (i == j) ? 1.0 : 0.0;
    }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
    if (aug[piv][col] == 0.0) throw ShapeError("metric is singular");
    if (piv != col)
      for (int j = 0; j < 8; ++j) std::swap(aug[piv][j], aug[col][j]);
    double d = aug[col][col];
    for (int j = 0; j < 8; ++j) aug[col][j] /= d;
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      double f = aug[r][col];
      for (int j = 0; j < 8; ++j) aug[r][j] -= f * aug[col][j];
    }
  }
  Mat4 inv{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) inv[i][j] = aug[i][j + 4];
  return inv;
}

/// Eigenvalues of a symmetric 4x4 by cyclic Jacobi rotations.
inline std::array<double, 4> sym_eigenvalues(Mat4 m) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += m[p][q] * m[p][q];
    if (off < 1e-28) break;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) {
        if (std::abs(m[p][q]) < 1e-300) continue;
        double theta = 0.5 * std::atan2(2 * m[p][q], m[q][q] - m[p][p]);
        double cs = std::cos(theta), sn = std::sin(theta);
        for (int r = 0; r < 4; ++r) {
          double mp = m[r][p], mq = m[r][q];
          m[r][p] = cs * mp - sn * mq;
          m[r][q] = sn * mp + cs * mq;
        }
        for (int r = 0; r < 4; ++r) {
          double mp = m[p][r], mq = m[q][r];
          m[p][r] = cs * mp - sn * mq;
          m[q][r] = sn * mp + cs * mq;
        }
      }
  }
  return {m[0][0], m[1][1], m[2][2], m[3][3]};
}

/// Metric at one node of the middle state of a stack.
inline MetricSample metric_at(const Coefficients& co, int i, int j, int k) {
  MetricSample s;
  s.i = i;
  s.j = j;
  s.k = k;
  s.g = metric_entries(co.a(i, j, k), co.b(i, j, k), co.c(i, j, k),
                       co.Q(i, j, k));
  s.det = det4(s.g);
  return s;
}

struct CurvatureReport {
  double max_abs_ricci = 0;
  double max_det_error = 0;  // vs eps^2/256 = 1/256
  long samples = 0;
  long euclidean = 0;        // ++++ or ----
  long ultrahyperbolic = 0;  // ++--
  long other_signature = 0;
  Mat4 worst_ricci{};        // per-component maxima over samples
};

namespace detail {

/// All derivative data of one coefficient field at the middle of a 5-state
/// stack: value, 4 first derivatives, 10 second derivatives. Index order
/// (t, x, y, z); time derivatives by 4th-order central differences.
struct CoeffDerivs {
  PeriodicField f;
  std::array<PeriodicField, 4> d1;
  std::array<std::array<PeriodicField, 4>, 4> d2;
};

inline CoeffDerivs coeff_derivs(const std::array<PeriodicField, 5>& c,
                                double dt) {
  CoeffDerivs out;
  out.f = c[2];
  PeriodicField ft =
      (1.0 / (12 * dt)) * (c[0] + (-8.0) * c[1] + 8.0 * c[3] + (-1.0) * c[4]);
  PeriodicField ftt = (1.0 / (12 * dt * dt)) *
                      ((-1.0) * c[0] + 16.0 * c[1] + (-30.0) * c[2] +
                       16.0 * c[3] + (-1.0) * c[4]);
  out.d1[0] = ft;
  out.d1[1] = derivative(c[2], Axis::X);
  out.d1[2] = derivative(c[2], Axis::Y);
  out.d1[3] = derivative(c[2], Axis::Z);
  out.d2[0][0] = ftt;
  for (int s = 1; s < 4; ++s) {
    Axis ax = s == 1 ? Axis::X : s == 2 ? Axis::Y : Axis::Z;
    out.d2[0][s] = derivative(ft, ax);
    out.d2[s][0] = out.d2[0][s];
  }
  for (int s = 1; s < 4; ++s)
    for (int r = s; r < 4; ++r) {
      Axis as = s == 1 ? Axis::X : s == 2 ? Axis::Y : Axis::Z;
      Axis ar = r == 1 ? Axis::X : r == 2 ? Axis::Y : Axis::Z;
      out.d2[s][r] = derivative(derivative(c[2], as), ar);
      out.d2[r][s] = out.d2[s][r];
    }
  return out;
}

}  // namespace detail

/// Ricci tensor diagnostics over a stack of >= 5 uniformly spaced states.
/// Spatial derivatives are spectral (the coefficients are periodic), time
/// derivatives come from the stack. Christoffels and Ricci by the standard
/// coordinate formulas with the exact 4x4 inverse.
inline CurvatureReport ricci_report(const std::vector<FieldState>& stack,
                                    double dt, int stride = 4) {
  if (stack.size() < 5)
    throw ShapeError("ricci_report needs a stack of >= 5 states");
  size_t m = stack.size() / 2;
  std::array<Coefficients, 5> co;
  for (int j = 0; j < 5; ++j) co[j] = stack[m - 2 + j].coefficients();

  auto pack = [&](auto field_of) {
    std::array<PeriodicField, 5> c;
    for (int j = 0; j < 5; ++j) c[j] = field_of(co[j]);
    return detail::coeff_derivs(c, dt);
  };
  // order: a, b, c, Q
  std::array<detail::CoeffDerivs, 4> F = {
      pack([](const Coefficients& c) { return c.a; }),
      pack([](const Coefficients& c) { return c.b; }),
      pack([](const Coefficients& c) { return c.c; }),
      pack([](const Coefficients& c) { return c.Q; })};

  // metric entry -> (coefficient index, scale); entries not listed are zero
  struct Entry {
    int coeff;
    double scale;
  };
  Entry emap[4][4] = {};
  auto set = [&](int i, int j, int coeff, double s) {
    emap[i][j] = {coeff, s};
    emap[j][i] = {coeff, s};
  };
  for (auto& row : emap)
    for (auto& e : row) e = {-1, 0.0};
  set(0, 0, 3, 0.25);
  set(1, 1, 3, 0.25);
  set(2, 2, 0, 0.25);
  set(3, 3, 0, 0.25);
  set(0, 2, 2, 0.25);
  set(1, 3, 2, 0.25);
  set(1, 2, 1, 0.25);
  set(0, 3, 1, -0.25);

  const Grid3& grid = stack[m].grid();
  const double det_expect = 1.0 / 256.0;
  CurvatureReport rep;

  for (int i = 0; i < grid.nx; i += stride)
    for (int j = 0; j < grid.ny; j += stride)
      for (int k = 0; k < grid.nz; k += stride) {
        auto value = [&](const Entry& e) {
          return e.coeff < 0 ? 0.0 : e.scale * F[e.coeff].f(i, j, k);
        };
        auto d1 = [&](const Entry& e, int mu) {
          return e.coeff < 0 ? 0.0 : e.scale * F[e.coeff].d1[mu](i, j, k);
        };
        auto d2 = [&](const Entry& e, int mu, int nu) {
          return e.coeff < 0 ? 0.0 : e.scale * F[e.coeff].d2[mu][nu](i, j, k);
        };

        Mat4 g{}, dg[4], ddg[4][4];
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu) {
            g[mu][nu] = value(emap[mu][nu]);
            for (int la = 0; la < 4; ++la) {
              dg[la][mu][nu] = d1(emap[mu][nu], la);
              for (int rh = la; rh < 4; ++rh) {
                ddg[la][rh][mu][nu] = d2(emap[mu][nu], la, rh);
                ddg[rh][la][mu][nu] = ddg[la][rh][mu][nu];
              }
            }
          }

        Mat4 ginv = invert4(g);
        double det = det4(g);
        rep.max_det_error =
            std::max(rep.max_det_error, std::abs(det - det_expect));

        // dginv[la] = -ginv dg[la] ginv
        Mat4 dginv[4];
        for (int la = 0; la < 4; ++la) {
          for (int r = 0; r < 4; ++r)
            for (int s = 0; s < 4; ++s) {
              double acc = 0;
              for (int al = 0; al < 4; ++al)
                for (int be = 0; be < 4; ++be)
                  acc += ginv[r][al] * dg[la][al][be] * ginv[be][s];
              dginv[la][r][s] = -acc;
            }
        }

        double Gamma[4][4][4];   // Gamma[rho][mu][nu]
        double dGamma[4][4][4][4];  // d_la Gamma[rho][mu][nu]
        for (int rho = 0; rho < 4; ++rho)
          for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
              double acc = 0;
              for (int s = 0; s < 4; ++s)
                acc += ginv[rho][s] *
                       (dg[mu][s][nu] + dg[nu][s][mu] - dg[s][mu][nu]);
              Gamma[rho][mu][nu] = 0.5 * acc;
            }
        for (int la = 0; la < 4; ++la)
          for (int rho = 0; rho < 4; ++rho)
            for (int mu = 0; mu < 4; ++mu)
              for (int nu = 0; nu < 4; ++nu) {
                double acc = 0;
                for (int s = 0; s < 4; ++s) {
                  acc += dginv[la][rho][s] *
                         (dg[mu][s][nu] + dg[nu][s][mu] - dg[s][mu][nu]);
                  acc += ginv[rho][s] *
                         (ddg[la][mu][s][nu] + ddg[la][nu][s][mu] -
                          ddg[la][s][mu][nu]);
                }
                dGamma[la][rho][mu][nu] = 0.5 * acc;
              }

        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu) {
            double r = 0;
            for (int rho = 0; rho < 4; ++rho) {
              r += dGamma[rho][rho][mu][nu] - dGamma[nu][rho][rho][mu];
              for (int la = 0; la < 4; ++la)
                r += Gamma[rho][rho][la] * Gamma[la][mu][nu] -
                     Gamma[rho][nu][la] * Gamma[la][rho][mu];
            }
            rep.worst_ricci[mu][nu] =
                std::max(rep.worst_ricci[mu][nu], std::abs(r));
            rep.max_abs_ricci = std::max(rep.max_abs_ricci, std::abs(r));
          }

        auto ev = sym_eigenvalues(g);
        int pos = 0, neg = 0;
        for (double e : ev) (e > 0 ? pos : neg)++;
        if (pos == 4 || neg == 4)
          ++rep.euclidean;
        else if (pos == 2 && neg == 2)
          ++rep.ultrahyperbolic;
        else
          ++rep.other_signature;
        ++rep.samples;
      }
  return rep;
}

}  // namespace cma
