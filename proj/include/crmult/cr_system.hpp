#pragma once

#include <string>
#include <vector>

#include "crmult/frame.hpp"
#include "crmult/symbol.hpp"

namespace crmult {

/// Real coordinates x1..xn, y1..yn, s with z_j = x_j + i y_j.
inline VarsPtr real_coordinates(int n) {
  std::vector<std::string> names;
  for (int j = 1; j <= n; ++j) names.push_back("x" + std::to_string(j));
  for (int j = 1; j <= n; ++j) names.push_back("y" + std::to_string(j));
  names.push_back("s");
  return make_vars(VariableSet::real(names));
}

/// Rewrites a jet in z, zb, s as a jet in x, y, s.
inline Jet to_real_coordinates(const Jet& f, const VarsPtr& real) {
  const VariableSet& v = f.vars();
  const int n = v.n();
  std::vector<Jet> images(v.size());
  for (int j = 1; j <= n; ++j) {
    Jet x = Jet::variable(real, f.order(), static_cast<std::size_t>(j - 1));
    Jet y = Jet::variable(real, f.order(), static_cast<std::size_t>(n + j - 1));
    images[v.z(j)] = x + GaussianRational::i() * y;
    images[v.zb(j)] = x - GaussianRational::i() * y;
  }
  images[v.s()] = Jet::variable(real, f.order(), real->s());
  return f.substitute(real, images);
}

/// Principal symbol i sum_a c_a xi_a of a vector field, in real coordinates.
inline RationalForm vector_field_symbol(const VectorField& l, const SpacePtr& sp) {
  const VariableSet& v = *l.vars;
  const int n = v.n();
  const GaussianRational i = GaussianRational::i();
  const GaussianRational half = GaussianRational::ratio(1, 2);
  const int order = l.order();
  RationalForm out(sp, order);
  auto add = [&](const Jet& c, std::size_t slot) {
    if (c.is_zero()) return;
    out = out + RationalForm::from_jet(sp, i * to_real_coordinates(c, sp->x), Monomial::unit(slot));
  };
  for (int j = 1; j <= n; ++j) {
    const Jet& cz = l[v.z(j)];
    const Jet& czb = l[v.zb(j)];
    // d/dz = (d/dx - i d/dy)/2, d/dzb = (d/dx + i d/dy)/2
    add(half * (cz + czb), static_cast<std::size_t>(j - 1));
    add((half * i) * (czb - cz), static_cast<std::size_t>(n + j - 1));
  }
  add(l[v.s()], sp->x->s());
  return out;
}

/// Symbol of P - K acting on X~ = (X_1 (n times), ..., X_N (n times)):
/// P is block diagonal with blocks diag(L_1..L_n); K has B^j_{k,l} at row
/// (j,k) and column (l,1), from d omega^j (L_k, .) = sum_l B^j_{k,l} omega^l.
/// Terms: {sigma(P), -K}; exact.
inline ClassicalSymbol build_cr_system_symbol(const CRFrame& f) {
  const int n = f.n, big_n = f.N();
  const std::size_t nu = static_cast<std::size_t>(big_n * n);
  SpacePtr sp = make_space(real_coordinates(n));
  std::vector<RationalForm> sig;
  for (const auto& l : f.L) sig.push_back(vector_field_symbol(l, sp));
  SymbolMatrix p = detail::zero_matrix(sp, f.order, nu);
  for (int j = 0; j < big_n; ++j)
    for (int k = 0; k < n; ++k) p[j * n + k][j * n + k] = sig[k];

  auto b = structure_coefficients(f);
  SymbolMatrix minus_k = detail::zero_matrix(sp, f.order - 1, nu);
  for (int j = 0; j < big_n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < big_n; ++l)
        minus_k[j * n + k][l * n] = RationalForm::from_jet(sp, -to_real_coordinates(b[j][k][l], sp->x));
  return make_symbol(1, {std::move(p), std::move(minus_k)});
}

}  // namespace crmult
