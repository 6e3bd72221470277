#pragma once

#include <algorithm>
#include <limits>

#include "crmult/jet.hpp"

namespace crmult {

/// Vanishing order in s. For the zero jet the order is unknown past the
/// truncation, so the value is order+1 with at_least set.
struct SOrder {
  int value = 0;
  bool at_least = false;
};

inline SOrder s_order(const Jet& f) {
  if (!f.vars().has_s()) throw Error(Errc::VariableMismatch, "s_order needs a variable named s");
  if (f.is_zero()) return {f.order() + 1, true};
  const std::size_t s = f.vars().s();
  int k = std::numeric_limits<int>::max();
  for (const auto& [mono, c] : f.terms()) k = std::min(k, mono[s]);
  return {k, false};
}

/// f = s^k * unit. The identity is exact through valid_through, the order
/// of f; unit_at_origin is false when unit(0) = 0.
struct SFactorization {
  int k = 0;
  Jet unit;
  bool unit_at_origin = false;
  int valid_through = -1;
};

inline SFactorization s_factor(const Jet& f) {
  SOrder so = s_order(f);
  if (so.at_least) throw Error(Errc::FlatInput, "cannot factor the zero jet");
  const std::size_t s = f.vars().s();
  const Monomial sk = Monomial::unit(s, so.value);
  Jet psi(f.vars_ptr(), f.order() - so.value);
  for (const auto& [mono, c] : f.terms()) psi.add_term(mono / sk, c);
  SFactorization out;
  out.k = so.value;
  out.unit_at_origin = !psi.eval0().is_zero();
  out.unit = std::move(psi);
  out.valid_through = f.order();
  return out;
}

/// u with lam * u = f, when lam = s^k * unit and s^k divides f.
inline Jet divide(const Jet& f, const Jet& lam) {
  SFactorization fac = s_factor(lam);
  if (!fac.unit_at_origin)
    throw Error(Errc::NotAUnit, "divisor is s^" + std::to_string(fac.k) + " times a non-unit");
  SOrder so = s_order(f);
  const int out_order = std::min(f.order() - fac.k, fac.unit.order());
  if (so.at_least) return Jet(f.vars_ptr(), out_order);
  if (so.value < fac.k)
    throw Error(Errc::NotDivisible, "s-order " + std::to_string(so.value) + " of the dividend is below " +
                                        std::to_string(fac.k));
  const Monomial sk = Monomial::unit(f.vars().s(), fac.k);
  Jet q(f.vars_ptr(), f.order() - fac.k);
  for (const auto& [mono, c] : f.terms()) q.add_term(mono / sk, c);
  return (q * fac.unit.inverse()).truncated(out_order);
}

}  // namespace crmult
