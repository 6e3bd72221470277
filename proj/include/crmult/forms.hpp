#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "crmult/jet.hpp"

namespace crmult {

namespace detail {
inline int min_order(const std::vector<Jet>& c) {
  int o = std::numeric_limits<int>::max();
  for (const auto& j : c) o = std::min(o, j.order());
  return c.empty() ? -1 : o;
}
}  // namespace detail

/// Vector field sum_a U^a d/dx^a on the coordinate frame of a variable set.
struct VectorField {
  VarsPtr vars;
  std::vector<Jet> coeffs;

  static VectorField zero(VarsPtr vars, int order) {
    std::vector<Jet> c(vars->size(), Jet(vars, order));
    return {std::move(vars), std::move(c)};
  }
  /// The coordinate field d/dx^slot.
  static VectorField coordinate(VarsPtr vars, int order, std::size_t slot) {
    VectorField v = zero(vars, order);
    v.coeffs.at(slot) = Jet::constant(vars, order, 1);
    return v;
  }

  std::size_t dim() const { return coeffs.size(); }
  const Jet& operator[](std::size_t a) const { return coeffs.at(a); }
  Jet& operator[](std::size_t a) { return coeffs.at(a); }
  int order() const { return detail::min_order(coeffs); }
  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Jet& c) { return c.is_zero(); });
  }

  /// Directional derivative U(f) = sum_a U^a df/dx^a.
  Jet apply(const Jet& f) const {
    Jet out(vars, std::min(order(), f.order() - 1));
    for (std::size_t a = 0; a < dim(); ++a)
      if (!coeffs[a].is_zero()) out += coeffs[a] * f.derive(a);
    return out;
  }

  VectorField conj() const {
    VectorField out = zero(vars, order());
    for (std::size_t a = 0; a < dim(); ++a) out.coeffs[vars->conj(a)] = coeffs[a].conj();
    return out;
  }

  friend VectorField operator+(VectorField u, const VectorField& v) {
    for (std::size_t a = 0; a < u.dim(); ++a) u.coeffs[a] += v.coeffs.at(a);
    return u;
  }
  friend VectorField operator*(const Jet& f, VectorField u) {
    for (auto& c : u.coeffs) c = f * c;
    return u;
  }
  friend VectorField operator*(const GaussianRational& a, VectorField u) {
    for (auto& c : u.coeffs) c = a * c;
    return u;
  }
};

/// One-form sum_a eta_a dx^a.
struct OneForm {
  VarsPtr vars;
  std::vector<Jet> coeffs;

  static OneForm zero(VarsPtr vars, int order) {
    std::vector<Jet> c(vars->size(), Jet(vars, order));
    return {std::move(vars), std::move(c)};
  }
  static OneForm coordinate(VarsPtr vars, int order, std::size_t slot) {
    OneForm w = zero(vars, order);
    w.coeffs.at(slot) = Jet::constant(vars, order, 1);
    return w;
  }

  std::size_t dim() const { return coeffs.size(); }
  const Jet& operator[](std::size_t a) const { return coeffs.at(a); }
  Jet& operator[](std::size_t a) { return coeffs.at(a); }
  int order() const { return detail::min_order(coeffs); }

  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Jet& c) { return c.is_zero(); });
  }

  OneForm conj() const {
    OneForm out = zero(vars, order());
    for (std::size_t a = 0; a < dim(); ++a) out.coeffs[vars->conj(a)] = coeffs[a].conj();
    return out;
  }

  OneForm truncated(int k) const {
    OneForm out = *this;
    for (auto& c : out.coeffs) c = c.truncated(k);
    return out;
  }

  friend OneForm operator+(OneForm u, const OneForm& v) {
    for (std::size_t a = 0; a < u.dim(); ++a) u.coeffs[a] += v.coeffs.at(a);
    return u;
  }
  friend OneForm operator-(OneForm u, const OneForm& v) {
    for (std::size_t a = 0; a < u.dim(); ++a) u.coeffs[a] -= v.coeffs.at(a);
    return u;
  }
  friend OneForm operator*(const Jet& f, OneForm u) {
    for (auto& c : u.coeffs) c = f * c;
    return u;
  }
  friend OneForm operator*(const GaussianRational& a, OneForm u) {
    for (auto& c : u.coeffs) c = a * c;
    return u;
  }
};

/// Two-form stored on ordered coordinate pairs a < b:
/// sum_{a<b} w_ab dx^a ^ dx^b, with (dx^a ^ dx^b)(U,V) = U^a V^b - U^b V^a.
struct TwoForm {
  VarsPtr vars;
  std::vector<Jet> coeffs;

  static TwoForm zero(VarsPtr vars, int order) {
    std::size_t d = vars->size();
    std::vector<Jet> c(d * (d - 1) / 2, Jet(vars, order));
    return {std::move(vars), std::move(c)};
  }

  std::size_t dim() const { return vars->size(); }
  std::size_t index(std::size_t a, std::size_t b) const {
    const std::size_t d = dim();
    return a * d - a * (a + 1) / 2 + (b - a - 1);
  }
  /// Coefficient of dx^a ^ dx^b for any a != b (antisymmetric).
  Jet at(std::size_t a, std::size_t b) const {
    if (a == b) return Jet(vars, order());
    return a < b ? coeffs[index(a, b)] : -coeffs[index(b, a)];
  }
  Jet& upper(std::size_t a, std::size_t b) { return coeffs[index(a, b)]; }
  int order() const { return detail::min_order(coeffs); }

  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Jet& c) { return c.is_zero(); });
  }

  Jet operator()(const VectorField& u, const VectorField& v) const {
    Jet out(vars, std::min({order(), u.order(), v.order()}));
    for (std::size_t a = 0; a < dim(); ++a)
      for (std::size_t b = a + 1; b < dim(); ++b) {
        const Jet& w = coeffs[index(a, b)];
        if (w.is_zero()) continue;
        out += w * (u[a] * v[b] - u[b] * v[a]);
      }
    return out;
  }
};

inline Jet pair(const OneForm& w, const VectorField& u) {
  Jet out(w.vars, std::min(w.order(), u.order()));
  for (std::size_t a = 0; a < w.dim(); ++a)
    if (!w[a].is_zero() && !u[a].is_zero()) out += w[a] * u[a];
  return out;
}

/// [U,V]^a = sum_b (U^b d_b V^a - V^b d_b U^a).
inline VectorField lie_bracket(const VectorField& u, const VectorField& v) {
  VectorField out = VectorField::zero(u.vars, std::min(u.order(), v.order()) - 1);
  for (std::size_t a = 0; a < u.dim(); ++a) out.coeffs[a] = u.apply(v[a]) - v.apply(u[a]);
  return out;
}

/// df as a one-form.
inline OneForm differential(const Jet& f) {
  OneForm out = OneForm::zero(f.vars_ptr(), f.order() - 1);
  for (std::size_t a = 0; a < out.dim(); ++a) out.coeffs[a] = f.derive(a);
  return out;
}

/// d(sum_b f_b dx^b) = sum_{a<b} (d_a f_b - d_b f_a) dx^a ^ dx^b.
inline TwoForm exterior_derivative(const OneForm& eta) {
  TwoForm out = TwoForm::zero(eta.vars, eta.order() - 1);
  for (std::size_t a = 0; a < eta.dim(); ++a)
    for (std::size_t b = a + 1; b < eta.dim(); ++b)
      out.upper(a, b) = eta[b].derive(a) - eta[a].derive(b);
  return out;
}

/// Interior product w(U, .).
inline OneForm contract(const TwoForm& w, const VectorField& u) {
  const std::size_t d = w.dim();
  OneForm out = OneForm::zero(w.vars, std::min(w.order(), u.order()));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      const Jet& c = w.coeffs[w.index(a, b)];
      if (c.is_zero()) continue;
      // (dx^a ^ dx^b)(U, .) = U^a dx^b - U^b dx^a
      if (!u[a].is_zero()) out.coeffs[b] += c * u[a];
      if (!u[b].is_zero()) out.coeffs[a] -= c * u[b];
    }
  return out;
}

/// Lie derivative in coordinates, the form K -> L(eta(K)) - eta([L,K]):
/// (L_L eta)_a = L(eta_a) + sum_b eta_b d_a L^b.
inline OneForm lie_derivative_coordinate(const VectorField& l, const OneForm& eta) {
  OneForm out = OneForm::zero(eta.vars, std::min(eta.order(), l.order()) - 1);
  for (std::size_t a = 0; a < eta.dim(); ++a) {
    Jet c = l.apply(eta[a]);
    for (std::size_t b = 0; b < eta.dim(); ++b)
      if (!eta[b].is_zero() && !l[b].is_zero()) c += eta[b] * l[b].derive(a);
    out.coeffs[a] = c;
  }
  return out;
}

/// True if every component agrees through the smaller order.
inline bool agree(const OneForm& u, const OneForm& v) { return (u - v).is_zero(); }

inline bool agree(const VectorField& u, const VectorField& v) {
  for (std::size_t a = 0; a < u.dim(); ++a)
    if (!agree(u[a], v[a])) return false;
  return true;
}

}  // namespace crmult
