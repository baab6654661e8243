#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "cma/field.hpp"

namespace cma {

/// Monomial exponents (x^mx y^my z^mz) attached to a periodic coefficient.
struct Monomial {
  int mx = 0, my = 0, mz = 0;
  auto operator<=>(const Monomial&) const = default;
  int degree() const { return mx + my + mz; }
  int exp(Axis a) const {
    switch (a) {
      case Axis::X: return mx;
      case Axis::Y: return my;
      case Axis::Z: return mz;
    }
    return 0;
  }
  Monomial lowered(Axis a) const {
    Monomial m = *this;
    switch (a) {
      case Axis::X: --m.mx; break;
      case Axis::Y: --m.my; break;
      case Axis::Z: --m.mz; break;
    }
    return m;
  }
  Monomial raised(const Monomial& o) const {
    return Monomial{mx + o.mx, my + o.my, mz + o.mz};
  }
  std::string str() const {
    return "x^" + std::to_string(mx) + " y^" + std::to_string(my) + " z^" +
           std::to_string(mz);
  }
};

/// Highest total monomial degree the field algebra carries. Degree 3 terms
/// arise in densities that pair explicit coordinates with background slopes
/// (e.g. the rotational density on a quadratic background).
inline constexpr int kMaxMonomialDegree = 3;

/// Sum of monomial-weighted periodic coefficients: sum_m x^mx y^my z^mz g_m.
class PolyField {
 public:
  PolyField() = default;
  explicit PolyField(const Grid3& g) : grid_(g) {}
  PolyField(const Grid3& g, const PeriodicField& periodic) : grid_(g) {
    set_term(Monomial{}, periodic);
  }
  explicit PolyField(const PeriodicField& periodic)
      : PolyField(periodic.grid(), periodic) {}

  static PolyField constant(const Grid3& g, double value) {
    return PolyField(g, PeriodicField(g, value));
  }
  static PolyField monomial(const Grid3& g, const Monomial& m,
                            double coeff = 1.0) {
    PolyField out(g);
    out.set_term(m, PeriodicField(g, coeff));
    return out;
  }

  const Grid3& grid() const { return grid_; }
  const std::map<Monomial, PeriodicField>& terms() const { return terms_; }
  bool is_periodic() const {
    for (const auto& [m, g] : terms_)
      if (m.degree() > 0) return false;
    return true;
  }

  void set_term(const Monomial& m, PeriodicField f) {
    if (m.degree() > kMaxMonomialDegree)
      throw ShapeError("monomial degree cap exceeded: " + m.str());
    if (!(f.grid() == grid_)) throw ShapeError("term grid mismatch");
    if (f.max_abs() == 0.0) {
      terms_.erase(m);
      return;
    }
    terms_.insert_or_assign(m, std::move(f));
  }

  void add_term(const Monomial& m, const PeriodicField& f) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      set_term(m, f);
    } else {
      it->second += f;
      if (it->second.max_abs() == 0.0) terms_.erase(it);
    }
  }

  /// Coefficient of a monomial (zero field if absent).
  PeriodicField term(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? PeriodicField(grid_) : it->second;
  }

  /// The purely periodic part, requiring all monomial terms to vanish.
  PeriodicField periodic_part(double tol = 0.0) const {
    for (const auto& [m, g] : terms_)
      if (m.degree() > 0 && g.max_abs() > tol)
        throw ShapeError("expected a purely periodic field, found term " +
                         m.str());
    return term(Monomial{});
  }

  PolyField& operator+=(const PolyField& o) {
    check_same_grid(o);
    for (const auto& [m, g] : o.terms_) add_term(m, g);
    return *this;
  }
  PolyField& operator-=(const PolyField& o) {
    check_same_grid(o);
    for (const auto& [m, g] : o.terms_) add_term(m, -g);
    return *this;
  }
  PolyField& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, g] : terms_) g *= s;
    return *this;
  }

  /// x^m values summed out at the grid nodes.
  std::vector<double> sample_total() const {
    std::vector<double> out(grid_.size(), 0.0);
    for (const auto& [m, g] : terms_) {
      for (int i = 0; i < grid_.nx; ++i) {
        double wx = std::pow(grid_.x(i), m.mx);
        for (int j = 0; j < grid_.ny; ++j) {
          double wxy = wx * std::pow(grid_.y(j), m.my);
          for (int k = 0; k < grid_.nz; ++k) {
            out[grid_.index(i, j, k)] +=
                wxy * std::pow(grid_.z(k), m.mz) * g(i, j, k);
          }
        }
      }
    }
    return out;
  }

  double max_abs() const {
    if (terms_.empty()) return 0.0;
    if (is_periodic()) return term(Monomial{}).max_abs();
    auto s = sample_total();
    double mx = 0;
    for (double v : s) mx = std::max(mx, std::abs(v));
    return mx;
  }

  void check_same_grid(const PolyField& o) const {
    if (!(grid_ == o.grid_)) throw ShapeError("fields live on different grids");
  }

 private:
  Grid3 grid_;
  std::map<Monomial, PeriodicField> terms_;
};

inline PolyField operator+(PolyField a, const PolyField& b) {
  a += b;
  return a;
}
inline PolyField operator-(PolyField a, const PolyField& b) {
  a -= b;
  return a;
}
inline PolyField operator*(PolyField a, double s) {
  a *= s;
  return a;
}
inline PolyField operator*(double s, PolyField a) {
  a *= s;
  return a;
}
inline PolyField operator-(PolyField a) {
  a *= -1.0;
  return a;
}

inline PolyField operator*(const PolyField& a, const PolyField& b) {
  a.check_same_grid(b);
  PolyField out(a.grid());
  for (const auto& [ma, ga] : a.terms())
    for (const auto& [mb, gb] : b.terms()) out.add_term(ma.raised(mb), ga * gb);
  return out;
}

inline PolyField operator*(const PolyField& a, const PeriodicField& b) {
  PolyField out(a.grid());
  for (const auto& [m, g] : a.terms()) out.add_term(m, g * b);
  return out;
}
inline PolyField operator*(const PeriodicField& b, const PolyField& a) {
  return a * b;
}

inline PolyField operator/(const PolyField& a, const PeriodicField& b) {
  PolyField out(a.grid());
  for (const auto& [m, g] : a.terms()) out.add_term(m, g / b);
  return out;
}

}  // namespace cma
