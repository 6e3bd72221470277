#pragma once

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crmult/linalg.hpp"
#include "crmult/rational_form.hpp"

namespace crmult {

using SymbolMatrix = std::vector<std::vector<RationalForm>>;

namespace detail {

inline SymbolMatrix zero_matrix(const SpacePtr& sp, int order, std::size_t nu) {
  return SymbolMatrix(nu, std::vector<RationalForm>(nu, RationalForm(sp, order)));
}

inline SymbolMatrix identity_matrix(const SpacePtr& sp, int order, std::size_t nu) {
  SymbolMatrix m = zero_matrix(sp, order, nu);
  for (std::size_t i = 0; i < nu; ++i) m[i][i] = RationalForm::constant(sp, order, 1);
  return m;
}

inline SymbolMatrix mat_mul(const SymbolMatrix& a, const SymbolMatrix& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(Errc::SizeMismatch, "symbol matrices of different sizes");
  SymbolMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int o = std::numeric_limits<int>::max();
      for (std::size_t k = 0; k < n; ++k) o = std::min({o, a[i][k].order(), b[k][j].order()});
      RationalForm acc(a[i][j].space(), o);
      for (std::size_t k = 0; k < n; ++k)
        if (!a[i][k].is_zero() && !b[k][j].is_zero()) acc = acc + a[i][k] * b[k][j];
      c[i].push_back(std::move(acc));
    }
  return c;
}

inline SymbolMatrix mat_add(SymbolMatrix a, const SymbolMatrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) a[i][j] = a[i][j] + b[i][j];
  return a;
}

template <class F>
SymbolMatrix map_entries(const SymbolMatrix& a, F&& f) {
  SymbolMatrix out = a;
  for (auto& row : out)
    for (auto& e : row) e = f(e);
  return out;
}

inline bool is_diagonal(const SymbolMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j && !a[i][j].is_zero()) return false;
  return true;
}

inline RationalForm determinant(const SymbolMatrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  RationalForm acc(m[0][0].space(), m[0][0].order());
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    SymbolMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<RationalForm> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    RationalForm t = m[0][c] * determinant(minor);
    acc = (c % 2 == 0) ? acc + t : acc - t;
  }
  return acc;
}

/// Inverse over the rational forms: entrywise for diagonal matrices,
/// otherwise adjugate / determinant.
inline SymbolMatrix inverse(const SymbolMatrix& m) {
  const std::size_t n = m.size();
  if (is_diagonal(m)) {
    SymbolMatrix out = m;
    for (std::size_t i = 0; i < n; ++i) out[i][i] = m[i][i].inverse();
    return out;
  }
  RationalForm det_inv = determinant(m).inverse();
  SymbolMatrix out = zero_matrix(m[0][0].space(), m[0][0].order(), n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      SymbolMatrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<RationalForm> row;
        for (std::size_t k = 0; k < n; ++k)
          if (k != i) row.push_back(m[r][k]);
        minor.push_back(std::move(row));
      }
      RationalForm cof = n == 1 ? RationalForm::constant(m[0][0].space(), m[0][0].order(), 1) : determinant(minor);
      out[i][j] = ((i + j) % 2 == 0 ? cof : -cof) * det_inv;
    }
  return out;
}

}  // namespace detail

/// One term of a classical symbol: a nu x nu matrix homogeneous of `degree` in xi.
struct HomogeneousTerm {
  int degree = 0;
  SymbolMatrix entries;

  std::size_t size() const { return entries.size(); }
  bool is_zero() const {
    for (const auto& row : entries)
      for (const auto& e : row)
        if (!e.is_zero()) return false;
    return true;
  }
  /// Euler's relation on every entry.
  bool is_homogeneous() const {
    for (const auto& row : entries)
      for (const auto& e : row)
        if (!e.is_zero() && !e.satisfies_euler(degree)) return false;
    return true;
  }
  int order() const {
    int o = std::numeric_limits<int>::max();
    for (const auto& row : entries)
      for (const auto& e : row) o = std::min(o, e.order());
    return o;
  }
};

/// p ~ p_m + p_{m-1} + ... . depth is the number of terms known; an empty
/// depth marks an exact symbol whose omitted terms are zero.
struct ClassicalSymbol {
  SpacePtr space;
  int order = 0;
  std::size_t nu = 1;
  std::vector<HomogeneousTerm> terms;
  std::optional<int> depth;

  bool exact() const { return !depth.has_value(); }
  int available_depth() const { return depth.value_or(std::numeric_limits<int>::max()); }

  /// p_{m-j}: stored, zero past the end of an exact symbol, else DepthExceeded.
  HomogeneousTerm term(int j) const {
    if (j < static_cast<int>(terms.size())) return terms[j];
    if (!exact() && j >= *depth)
      throw Error(Errc::DepthExceeded, "term " + std::to_string(j) + " requested from a symbol of depth " +
                                           std::to_string(*depth));
    int o = terms.empty() ? 0 : terms.back().order();
    return {order - j, detail::zero_matrix(space, o, nu)};
  }
  const HomogeneousTerm& principal() const {
    if (terms.empty()) throw Error(Errc::InvalidInput, "symbol has no terms");
    return terms.front();
  }
};

inline ClassicalSymbol make_symbol(int order, std::vector<SymbolMatrix> mats, std::optional<int> depth = std::nullopt) {
  if (mats.empty()) throw Error(Errc::InvalidInput, "symbol needs at least its principal term");
  ClassicalSymbol p;
  p.space = mats.front().at(0).at(0).space();
  p.order = order;
  p.nu = mats.front().size();
  p.depth = depth;
  for (std::size_t j = 0; j < mats.size(); ++j) {
    if (mats[j].size() != p.nu) throw Error(Errc::SizeMismatch, "terms of different matrix sizes");
    for (const auto& row : mats[j])
      if (row.size() != p.nu) throw Error(Errc::SizeMismatch, "symbol terms must be square");
    HomogeneousTerm t{order - static_cast<int>(j), std::move(mats[j])};
    if (!t.is_homogeneous())
      throw Error(Errc::InvalidInput, "term " + std::to_string(j) + " is not homogeneous of degree " +
                                          std::to_string(t.degree));
    p.terms.push_back(std::move(t));
  }
  return p;
}

namespace detail {

/// All multi-indices alpha in N^d with |alpha| = k.
inline std::vector<std::vector<int>> exact_degree_indices(std::size_t d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d, 0);
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos + 1 == d) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  if (d == 0) {
    if (k == 0) out.emplace_back();
    return out;
  }
  rec(rec, 0, k);
  return out;
}

/// (1/alpha!) d_xi^alpha a . D_x^alpha b with D_x = -i d_x.
inline SymbolMatrix expansion_term(const SymbolMatrix& a, const SymbolMatrix& b, const std::vector<int>& alpha) {
  GaussianRational coef = 1;
  int len = 0;
  for (int e : alpha) {
    coef /= factorial(e);
    len += e;
  }
  for (int t = 0; t < len; ++t) coef *= GaussianRational(0) - GaussianRational::i();
  SymbolMatrix da = map_entries(a, [&](const RationalForm& f) {
    RationalForm g = f;
    for (std::size_t k = 0; k < alpha.size(); ++k)
      for (int t = 0; t < alpha[k]; ++t) g = g.dxi(k);
    return g;
  });
  SymbolMatrix db = map_entries(b, [&](const RationalForm& f) {
    RationalForm g = f;
    for (std::size_t k = 0; k < alpha.size(); ++k)
      for (int t = 0; t < alpha[k]; ++t) g = g.dx(k);
    return coef * g;
  });
  return mat_mul(da, db);
}

inline int matrix_order(const SymbolMatrix& m) {
  int o = std::numeric_limits<int>::max();
  for (const auto& row : m)
    for (const auto& e : row) o = std::min(o, e.order());
  return o;
}

}  // namespace detail

/// a # b through `depth` homogeneous terms:
/// c_{m-l} = sum_{j+k+|alpha|=l} (1/alpha!) d_xi^alpha a_{m1-j} D_x^alpha b_{m2-k}.
inline ClassicalSymbol compose(const ClassicalSymbol& a, const ClassicalSymbol& b, int depth) {
  if (a.nu != b.nu) throw Error(Errc::SizeMismatch, "composing symbols of different matrix sizes");
  if (!(*a.space == *b.space)) throw Error(Errc::VariableMismatch, "symbols on different spaces");
  if (depth < 1) throw Error(Errc::InvalidInput, "depth must be at least 1");
  if (depth > a.available_depth() || depth > b.available_depth())
    throw Error(Errc::DepthExceeded, "requested depth " + std::to_string(depth) + " exceeds the inputs");
  ClassicalSymbol c;
  c.space = a.space;
  c.order = a.order + b.order;
  c.nu = a.nu;
  c.depth = depth;
  const std::size_t d = a.space->dim();
  for (int l = 0; l < depth; ++l) {
    SymbolMatrix acc;
    for (int j = 0; j <= l; ++j)
      for (int k = 0; j + k <= l; ++k) {
        HomogeneousTerm aj = a.term(j), bk = b.term(k);
        if (aj.is_zero() || bk.is_zero()) continue;
        for (const auto& alpha : detail::exact_degree_indices(d, l - j - k)) {
          SymbolMatrix t = detail::expansion_term(aj.entries, bk.entries, alpha);
          acc = acc.empty() ? t : detail::mat_add(acc, t);
        }
      }
    if (acc.empty()) {
      int o = std::min(detail::matrix_order(a.principal().entries), detail::matrix_order(b.principal().entries));
      acc = detail::zero_matrix(a.space, o, a.nu);
    }
    c.terms.push_back({c.order - l, std::move(acc)});
  }
  return c;
}

/// det p_m(x0, xi0) != 0, evaluated exactly.
inline bool is_elliptic_at(const ClassicalSymbol& p, std::span<const GaussianRational> x0,
                           std::span<const GaussianRational> xi0) {
  const std::size_t d = p.space->dim();
  if (x0.size() != d || xi0.size() != d) throw Error(Errc::SizeMismatch, "point and covector need dimension " + std::to_string(d));
  if (std::all_of(xi0.begin(), xi0.end(), [](const GaussianRational& v) { return v.is_zero(); }))
    throw Error(Errc::InvalidInput, "covector must be nonzero");
  ScalarMatrix m(p.nu, std::vector<GaussianRational>(p.nu));
  for (std::size_t i = 0; i < p.nu; ++i)
    for (std::size_t j = 0; j < p.nu; ++j) m[i][j] = p.principal().entries[i][j].evaluate(x0, xi0);
  return !determinant(m).is_zero();
}

/// det p_m as a rational form; its zero set is the characteristic set.
inline RationalForm char_determinant(const ClassicalSymbol& p) { return detail::determinant(p.principal().entries); }

namespace detail {

inline SymbolMatrix principal_inverse(const ClassicalSymbol& p) {
  try {
    return inverse(p.principal().entries);
  } catch (const Error& e) {
    if (e.code() == Errc::NotElliptic || e.code() == Errc::NotAUnit)
      throw Error(Errc::NotElliptic, std::string("principal symbol is not invertible as a rational matrix: ") + e.what());
    throw;
  }
}

inline void check_remainder(const ClassicalSymbol& prod, int depth) {
  for (int l = 0; l < depth; ++l) {
    const auto& t = prod.terms[l].entries;
    for (std::size_t i = 0; i < prod.nu; ++i)
      for (std::size_t j = 0; j < prod.nu; ++j) {
        const RationalForm& e = t[i][j];
        bool ok = (l == 0 && i == j) ? (e - RationalForm::constant(prod.space, e.order(), 1)).is_zero() : e.is_zero();
        if (!ok) throw std::logic_error("parametrix remainder check failed at degree " + std::to_string(-l));
      }
  }
}

}  // namespace detail

/// Left parametrix q with q # p = Id + r, r of degree <= -depth:
/// q_{-m} = p_m^{-1},
/// q_{-m-N} = -[ sum_{j+k+|alpha|=N, j<=N-1} (1/alpha!) d_xi^alpha q_{-m-j} D_x^alpha p_{m-k} ] p_m^{-1}.
inline ClassicalSymbol parametrix(const ClassicalSymbol& p, int depth) {
  if (depth < 1) throw Error(Errc::InvalidInput, "depth must be at least 1");
  if (depth > p.available_depth()) throw Error(Errc::DepthExceeded, "parametrix depth exceeds the symbol depth");
  const SymbolMatrix pinv = detail::principal_inverse(p);
  ClassicalSymbol q;
  q.space = p.space;
  q.order = -p.order;
  q.nu = p.nu;
  q.depth = depth;
  q.terms.push_back({-p.order, pinv});
  const std::size_t d = p.space->dim();
  for (int big_n = 1; big_n < depth; ++big_n) {
    SymbolMatrix acc;
    for (int j = 0; j < big_n; ++j)
      for (int k = 0; j + k <= big_n; ++k) {
        const HomogeneousTerm pk = p.term(k);
        if (pk.is_zero()) continue;
        for (const auto& alpha : detail::exact_degree_indices(d, big_n - j - k)) {
          SymbolMatrix t = detail::expansion_term(q.terms[j].entries, pk.entries, alpha);
          acc = acc.empty() ? t : detail::mat_add(acc, t);
        }
      }
    SymbolMatrix next = acc.empty() ? detail::zero_matrix(p.space, detail::matrix_order(pinv), p.nu)
                                    : detail::map_entries(detail::mat_mul(acc, pinv),
                                                          [](const RationalForm& f) { return -f; });
    q.terms.push_back({-p.order - big_n, std::move(next)});
  }
  detail::check_remainder(compose(q, p, depth), depth);
  return q;
}

/// Right parametrix q with p # q = Id + r:
/// q_{-m-N} = -p_m^{-1} [ sum_{j+k+|alpha|=N, k<=N-1} (1/alpha!) d_xi^alpha p_{m-j} D_x^alpha q_{-m-k} ].
inline ClassicalSymbol right_parametrix(const ClassicalSymbol& p, int depth) {
  if (depth < 1) throw Error(Errc::InvalidInput, "depth must be at least 1");
  if (depth > p.available_depth()) throw Error(Errc::DepthExceeded, "parametrix depth exceeds the symbol depth");
  const SymbolMatrix pinv = detail::principal_inverse(p);
  ClassicalSymbol q;
  q.space = p.space;
  q.order = -p.order;
  q.nu = p.nu;
  q.depth = depth;
  q.terms.push_back({-p.order, pinv});
  const std::size_t d = p.space->dim();
  for (int big_n = 1; big_n < depth; ++big_n) {
    SymbolMatrix acc;
    for (int k = 0; k < big_n; ++k)
      for (int j = 0; j + k <= big_n; ++j) {
        const HomogeneousTerm pj = p.term(j);
        if (pj.is_zero()) continue;
        for (const auto& alpha : detail::exact_degree_indices(d, big_n - j - k)) {
          SymbolMatrix t = detail::expansion_term(pj.entries, q.terms[k].entries, alpha);
          acc = acc.empty() ? t : detail::mat_add(acc, t);
        }
      }
    SymbolMatrix next = acc.empty() ? detail::zero_matrix(p.space, detail::matrix_order(pinv), p.nu)
                                    : detail::map_entries(detail::mat_mul(pinv, acc),
                                                          [](const RationalForm& f) { return -f; });
    q.terms.push_back({-p.order - big_n, std::move(next)});
  }
  detail::check_remainder(compose(p, q, depth), depth);
  return q;
}

/// Termwise exact comparison through the smaller depth.
inline bool agree(const ClassicalSymbol& a, const ClassicalSymbol& b) {
  if (a.order != b.order || a.nu != b.nu) return false;
  const int depth = std::min(a.available_depth(), b.available_depth());
  const int stored = static_cast<int>(std::max(a.terms.size(), b.terms.size()));
  for (int l = 0; l < std::min(depth, stored); ++l) {
    HomogeneousTerm ta = a.term(l), tb = b.term(l);
    for (std::size_t i = 0; i < a.nu; ++i)
      for (std::size_t j = 0; j < a.nu; ++j)
        if (!equivalent(ta.entries[i][j], tb.entries[i][j])) return false;
  }
  return true;
}

}  // namespace crmult
