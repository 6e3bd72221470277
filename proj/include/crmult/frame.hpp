#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crmult/forms.hpp"
#include "crmult/linalg.hpp"

namespace crmult {

/// Model data kept by build_hypersurface_frame for Im w = s^m phi:
/// L_j = d/dzb_j + b^j d/ds with b^j = -i s^m phi_{zb_j} / (1 + i (s^m phi)_s).
struct HypersurfaceData {
  int m = 1;
  Jet phi;
  std::vector<Jet> b;
};

/// Local CR frame: CR fields L_1..L_n, real characteristic forms
/// theta^1..theta^d and the holomorphic coframe {theta^1..theta^d,
/// omega^{d+1}..omega^N}. Coframe expansions are always reported in that
/// order.
struct CRFrame {
  int n = 0;
  int d = 0;
  int order = 0;
  VarsPtr vars;
  std::vector<VectorField> L;
  std::vector<OneForm> theta;
  std::vector<OneForm> coframe;

  // Dualization: coordinate slots whose coframe submatrix is a unit at 0,
  // and the inverse of that submatrix (rows: slots, columns: coframe index).
  std::vector<std::size_t> columns;
  JetMatrix dual;

  std::optional<HypersurfaceData> hypersurface;
  /// Order through which [L_j, L_k] was verified to stay in V; empty if a
  /// bracket leaves V inside the trusted range.
  std::optional<int> integrability_verified_order;
  std::vector<std::string> warnings;

  int N() const { return n + d; }
};

namespace detail {

inline std::string slot_name(const VariableSet& v, std::size_t a) { return v.name(a); }

inline void select_dualization(CRFrame& f) {
  const std::size_t dim = f.vars->size();
  const std::size_t big_n = f.coframe.size();
  EchelonBasis basis;
  for (std::size_t a = 0; a < dim && f.columns.size() < big_n; ++a) {
    std::vector<GaussianRational> col(big_n);
    for (std::size_t l = 0; l < big_n; ++l) col[l] = f.coframe[l][a].eval0();
    if (basis.add(std::move(col))) f.columns.push_back(a);
  }
  if (f.columns.size() < big_n)
    throw Error(Errc::DegenerateCoframe,
                "holomorphic coframe has rank " + std::to_string(f.columns.size()) + " < N = " +
                    std::to_string(big_n) + " at the origin");
  JetMatrix sub(big_n, std::vector<Jet>(big_n));
  for (std::size_t l = 0; l < big_n; ++l)
    for (std::size_t k = 0; k < big_n; ++k) sub[l][k] = f.coframe[l][f.columns[k]];
  try {
    f.dual = inverse(sub);
  } catch (const Error&) {
    throw Error(Errc::DegenerateCoframe, "coframe submatrix is not invertible");
  }
}

inline void check_integrability(CRFrame& f) {
  int verified = f.order;
  for (int j = 0; j < f.n; ++j)
    for (int k = j + 1; k < f.n; ++k) {
      VectorField br = lie_bracket(f.L[j], f.L[k]);
      for (std::size_t l = 0; l < f.coframe.size(); ++l) {
        Jet p = pair(f.coframe[l], br);
        if (!p.is_zero()) {
          f.integrability_verified_order.reset();
          f.warnings.push_back("[L" + std::to_string(j + 1) + ",L" + std::to_string(k + 1) +
                               "] is not in V: coframe form " + std::to_string(l + 1) +
                               " pairs to " + p.to_string());
          return;
        }
        verified = std::min(verified, p.order());
      }
    }
  f.integrability_verified_order = verified;
}

inline void validate_frame(CRFrame& f) {
  if (static_cast<int>(f.L.size()) != f.n || static_cast<int>(f.theta.size()) != f.d ||
      static_cast<int>(f.coframe.size()) != f.N())
    throw Error(Errc::InvalidInput, "frame needs n CR fields, d characteristic forms and N-d "
                                    "further holomorphic forms");
  for (int j = 0; j < f.d; ++j)
    if (!agree(f.theta[j].conj(), f.theta[j]))
      throw Error(Errc::NotReal, "characteristic form theta" + std::to_string(j + 1) +
                                     " is not real (conj(theta) != theta)");
  for (int j = 0; j < f.d; ++j)
    for (int k = 0; k < f.n; ++k) {
      if (!pair(f.theta[j], f.L[k]).is_zero())
        throw Error(Errc::NotCharacteristic, "theta" + std::to_string(j + 1) + "(L" +
                                                 std::to_string(k + 1) + ") != 0");
      if (!pair(f.theta[j], f.L[k].conj()).is_zero())
        throw Error(Errc::NotCharacteristic, "theta" + std::to_string(j + 1) + "(conj L" +
                                                 std::to_string(k + 1) + ") != 0");
    }
  for (std::size_t l = static_cast<std::size_t>(f.d); l < f.coframe.size(); ++l)
    for (int k = 0; k < f.n; ++k)
      if (!pair(f.coframe[l], f.L[k]).is_zero())
        throw Error(Errc::NotHolomorphic, "omega" + std::to_string(l + 1) + "(L" +
                                              std::to_string(k + 1) + ") != 0");
  // V + conj V must have rank 2n at the origin.
  EchelonBasis fields;
  for (int k = 0; k < f.n; ++k)
    for (const VectorField& u : {f.L[k], f.L[k].conj()}) {
      std::vector<GaussianRational> v(u.dim());
      for (std::size_t a = 0; a < u.dim(); ++a) v[a] = u[a].eval0();
      fields.add(std::move(v));
    }
  if (fields.rank() != static_cast<std::size_t>(2 * f.n))
    throw Error(Errc::InvalidInput, "CR fields and their conjugates are not independent at 0");
  select_dualization(f);
  check_integrability(f);
}

}  // namespace detail

/// CR frame of the hypersurface Im w = (Re w)^m phi(z, zb, Re w) in the
/// coordinates (z, zb, s), s = Re w:
///   L_j   = d/dzb_j - i s^m phi_{zb_j} / (1 + i (s^m phi)_s) d/ds
///   theta = -ds + sum_j b^j dzb_j + sum_j conj(b^j) dz_j
/// with coframe {theta, dz_1, ..., dz_n}.
inline CRFrame build_hypersurface_frame(int n, int m, const Jet& phi, int order) {
  if (m < 1) throw Error(Errc::InvalidInput, "exponent m must be at least 1");
  if (!phi.vars().is_cr() || phi.vars().n() != n)
    throw Error(Errc::VariableMismatch, "phi must be a jet in z, zb, s with n = " + std::to_string(n));
  if (!phi.is_real()) throw Error(Errc::NotReal, "phi is not real (conj(phi) != phi)");
  const int k = std::min(order, phi.order());
  if (k < m + 1) throw OrderError(m + 1, k, "hypersurface frame");

  const VarsPtr& vars = phi.vars_ptr();
  const std::size_t s = vars->s();
  const Monomial sm = Monomial::unit(s, m);
  const Jet f = phi.truncated(k);
  const Jet smphi_s = f.times_monomial(sm).derive(s);
  const Jet unit_inv = (Jet::constant(vars, k, 1) + GaussianRational::i() * smphi_s).inverse();

  CRFrame fr;
  fr.n = n;
  fr.d = 1;
  fr.order = k;
  fr.vars = vars;
  HypersurfaceData data{m, f, {}};
  OneForm theta = OneForm::coordinate(vars, k, s);
  theta[s] = Jet::constant(vars, k, -1);
  for (int j = 1; j <= n; ++j) {
    Jet bj = (-GaussianRational::i()) * (f.derive(vars->zb(j)) * unit_inv).times_monomial(sm);
    bj = bj.truncated(k);
    VectorField lj = VectorField::coordinate(vars, k, vars->zb(j));
    lj[s] = bj;
    theta[vars->zb(j)] = bj;
    theta[vars->z(j)] = bj.conj();
    fr.L.push_back(std::move(lj));
    data.b.push_back(std::move(bj));
  }
  fr.theta.push_back(theta);
  fr.coframe.push_back(theta);
  for (int j = 1; j <= n; ++j) fr.coframe.push_back(OneForm::coordinate(vars, k, vars->z(j)));
  fr.hypersurface = std::move(data);
  detail::validate_frame(fr);
  return fr;
}

/// Validated frame from user-supplied CR fields, characteristic forms and
/// the remaining N - d holomorphic forms. Coefficients are truncated to
/// `order`.
inline CRFrame build_abstract_frame(int n, int d, std::vector<VectorField> l,
                                    std::vector<OneForm> theta, std::vector<OneForm> omega_rest,
                                    int order) {
  if (n < 1 || d < 1) throw Error(Errc::InvalidInput, "n and d must be positive");
  if (l.empty()) throw Error(Errc::InvalidInput, "no CR fields supplied");
  CRFrame fr;
  fr.n = n;
  fr.d = d;
  fr.vars = l.front().vars;
  const std::size_t dim = static_cast<std::size_t>(2 * n + d);
  auto check_dim = [&](std::size_t got) {
    if (got != dim)
      throw Error(Errc::VariableMismatch, "frame objects must live on 2n+d = " +
                                              std::to_string(dim) + " coordinates");
  };
  int k = order;
  for (auto& u : l) {
    check_dim(u.dim());
    k = std::min(k, u.order());
  }
  for (auto& w : theta) {
    check_dim(w.dim());
    k = std::min(k, w.order());
  }
  for (auto& w : omega_rest) {
    check_dim(w.dim());
    k = std::min(k, w.order());
  }
  if (k < 1) throw OrderError(1, k, "abstract frame");
  fr.order = k;
  for (auto& u : l) {
    for (auto& c : u.coeffs) c = c.truncated(k);
    fr.L.push_back(std::move(u));
  }
  for (auto& w : theta) {
    fr.theta.push_back(w.truncated(k));
    fr.coframe.push_back(fr.theta.back());
  }
  for (auto& w : omega_rest) fr.coframe.push_back(w.truncated(k));
  detail::validate_frame(fr);
  return fr;
}

/// Abstract structure of CR dimension 1 generated by L = d/dzb + s^m b d/ds,
/// with theta = -ds + s^m conj(b) dz + s^m b dzb and coframe {theta, dz}.
/// b is a jet in (z, zb, s); m = 0 is allowed.
inline CRFrame build_s_power_frame(const Jet& b, int m, int order) {
  if (!b.vars().is_cr() || b.vars().n() != 1)
    throw Error(Errc::VariableMismatch, "b must be a jet in z1, zb1, s");
  if (m < 0) throw Error(Errc::InvalidInput, "exponent m must be non-negative");
  const VarsPtr& vars = b.vars_ptr();
  const std::size_t s = vars->s(), z = vars->z(1), zb = vars->zb(1);
  const Monomial sm = Monomial::unit(s, m);
  Jet sb = b.truncated(order).times_monomial(sm).truncated(order);
  VectorField l = VectorField::coordinate(vars, order, zb);
  l[s] = sb;
  OneForm theta = OneForm::zero(vars, order);
  theta[s] = Jet::constant(vars, order, -1);
  theta[z] = sb.conj();
  theta[zb] = sb;
  return build_abstract_frame(1, 1, {l}, {theta}, {OneForm::coordinate(vars, order, z)}, order);
}

/// Flat structure of CR dimension n: L_j = d/dzb_j, theta = -ds.
inline CRFrame flat_frame(int n, int order) {
  auto vars = make_vars(VariableSet::cr(n));
  return build_hypersurface_frame(n, 1, Jet(vars, order), order);
}

/// Coefficients (c_1..c_N) with eta = sum_l c_l coframe^l. eta must
/// annihilate every CR field.
inline std::vector<Jet> expand_in_coframe(const CRFrame& f, const OneForm& eta) {
  for (int k = 0; k < f.n; ++k) {
    Jet p = pair(eta, f.L[k]);
    if (!p.is_zero())
      throw Error(Errc::NotHolomorphic,
                  "form does not annihilate L" + std::to_string(k + 1) + ": pairing " + p.to_string());
  }
  const std::size_t big_n = f.coframe.size();
  std::vector<Jet> c;
  c.reserve(big_n);
  for (std::size_t l = 0; l < big_n; ++l) {
    Jet acc(f.vars, eta.order());
    for (std::size_t k = 0; k < big_n; ++k) {
      const Jet& e = eta[f.columns[k]];
      if (!e.is_zero()) acc += e * f.dual[k][l];
    }
    c.push_back(acc.truncated(eta.order()));
  }
  OneForm rebuilt = OneForm::zero(f.vars, eta.order());
  for (std::size_t l = 0; l < big_n; ++l) rebuilt = rebuilt + c[l] * f.coframe[l];
  if (!agree(rebuilt, eta))
    throw Error(Errc::NotHolomorphic, "form is not in the span of the holomorphic coframe");
  return c;
}

/// Lie derivative of a holomorphic form along a CR field: the form
/// K -> L(eta(K)) - eta([L,K]). Refuses when eta(L) != 0. Both the
/// coordinate formula and contract(d eta, L) are evaluated and must agree.
inline OneForm lie_derivative_form(const CRFrame& f, const VectorField& l, const OneForm& eta) {
  Jet el = pair(eta, l);
  if (!el.is_zero())
    throw Error(Errc::NotAnnihilated, "eta(L) = " + el.to_string() + " is not zero");
  OneForm via_d = contract(exterior_derivative(eta), l);
  OneForm via_bracket = lie_derivative_coordinate(l, eta);
  if (!agree(via_d, via_bracket))
    throw std::logic_error("Cartan identity violated in lie_derivative_form");
  (void)f;
  return via_d.truncated(std::min(via_d.order(), via_bracket.order()));
}

/// B[j][k][l] with d coframe^j (L_k, .) = sum_l B[j][k][l] coframe^l.
inline std::vector<std::vector<std::vector<Jet>>> structure_coefficients(const CRFrame& f) {
  std::vector<std::vector<std::vector<Jet>>> b(f.coframe.size());
  for (std::size_t j = 0; j < f.coframe.size(); ++j) {
    TwoForm dw = exterior_derivative(f.coframe[j]);
    for (int k = 0; k < f.n; ++k) b[j].push_back(expand_in_coframe(f, contract(dw, f.L[k])));
  }
  return b;
}

struct InfinitesimalCRCheck {
  bool field_real = false;
  bool pairing_real = false;
  bool cr_equations = false;
  std::string witness;

  bool ok() const { return field_real && pairing_real && cr_equations; }
  explicit operator bool() const { return ok(); }
};

/// Symbolic test for an infinitesimal CR automorphism: X is a real field,
/// theta^j(X) is real for all j, and omega([L_k, X]) = 0 for every coframe
/// form and CR field. The witness names the first violated condition.
inline InfinitesimalCRCheck is_symbolic_infinitesimal_cr(const CRFrame& f, const VectorField& x) {
  InfinitesimalCRCheck r;
  r.field_real = true;
  for (std::size_t a = 0; a < x.dim() && r.field_real; ++a)
    if (!agree(x[f.vars->conj(a)], x[a].conj())) {
      r.field_real = false;
      r.witness = "reality-of-field: coefficient of d/d" + f.vars->name(f.vars->conj(a)) +
                  " is not the conjugate of the coefficient of d/d" + f.vars->name(a);
    }
  r.pairing_real = true;
  for (int j = 0; j < f.d && r.pairing_real; ++j) {
    Jet v = pair(f.theta[j], x);
    if (!agree(v.conj(), v)) {
      r.pairing_real = false;
      if (r.witness.empty()) r.witness = "reality: theta" + std::to_string(j + 1) + "(X) is not real";
    }
  }
  r.cr_equations = true;
  for (int k = 0; k < f.n && r.cr_equations; ++k) {
    VectorField br = lie_bracket(f.L[k], x);
    for (std::size_t l = 0; l < f.coframe.size(); ++l)
      if (!pair(f.coframe[l], br).is_zero()) {
        r.cr_equations = false;
        if (r.witness.empty())
          r.witness = "cr: coframe form " + std::to_string(l + 1) + " applied to [L" +
                      std::to_string(k + 1) + ", X] is not zero";
        break;
      }
  }
  return r;
}

}  // namespace crmult
