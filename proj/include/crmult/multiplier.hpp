#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "crmult/division.hpp"
#include "crmult/frame.hpp"

namespace crmult {

/// alpha in N^n.
struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) {
    for (int v : entries)
      if (v < 0) throw Error(Errc::InvalidInput, "negative multi-index entry");
  }
  static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }
  static MultiIndex unit(int n, int j) {
    MultiIndex a = zero(n);
    a.entries.at(j) = 1;
    return a;
  }

  std::size_t size() const { return entries.size(); }
  int operator[](std::size_t j) const { return entries[j]; }
  int order() const {
    int s = 0;
    for (int v : entries) s += v;
    return s;
  }
  /// Index of the first nonzero entry, or -1 for alpha = 0.
  int first_nonzero() const {
    for (std::size_t j = 0; j < entries.size(); ++j)
      if (entries[j] != 0) return static_cast<int>(j);
    return -1;
  }
  MultiIndex minus_unit(int j) const {
    MultiIndex a = *this;
    if (--a.entries.at(j) < 0) throw Error(Errc::InvalidInput, "multi-index entry would be negative");
    return a;
  }
  MultiIndex plus_unit(int j) const {
    MultiIndex a = *this;
    ++a.entries.at(j);
    return a;
  }
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex a = *this;
    for (std::size_t j = 0; j < a.size(); ++j) {
      a.entries[j] -= o.entries.at(j);
      if (a.entries[j] < 0) throw Error(Errc::InvalidInput, "multi-index difference is negative");
    }
    return a;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t j = 0; j < entries.size(); ++j) s += (j ? "," : "") + std::to_string(entries[j]);
    return s + ")";
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  /// Graded order; within a degree the first variable comes first, so
  /// (1,0) < (0,1) and (2,0) < (1,1) < (0,2).
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    if (auto c = a.order() <=> b.order(); c != 0) return c;
    return b.entries <=> a.entries;
  }
};

/// All alpha in N^n with |alpha| <= k, in graded order.
inline std::vector<MultiIndex> multi_indices(int n, int k) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      cur[pos] = left;
      out.emplace_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  for (int deg = 0; deg <= k; ++deg) {
    if (n == 0) {
      if (deg == 0) out.emplace_back();
      continue;
    }
    rec(rec, 0, deg);
  }
  return out;
}

/// The chain alpha(1), ..., alpha(|alpha|): fill e_1 first, then e_2, ...
/// Entry nu is the coordinate index added at step nu+1.
inline std::vector<int> chain_steps(const MultiIndex& alpha) {
  std::vector<int> steps;
  for (std::size_t j = 0; j < alpha.size(); ++j)
    for (int t = 0; t < alpha[j]; ++t) steps.push_back(static_cast<int>(j));
  return steps;
}

struct RowKey {
  MultiIndex alpha;
  int j = 1;  // 1..d

  friend bool operator==(const RowKey&, const RowKey&) = default;
  friend std::strong_ordering operator<=>(const RowKey&, const RowKey&) = default;
};

struct ExpansionRow {
  OneForm form;           // L^alpha theta^j
  std::vector<Jet> coeffs;  // its coframe expansion, length N
};

struct ExpansionTable {
  CRFrame frame;
  int max_k = 0;
  std::map<RowKey, ExpansionRow> rows;

  const ExpansionRow& row(const MultiIndex& alpha, int j) const {
    auto it = rows.find(RowKey{alpha, j});
    if (it == rows.end())
      throw Error(Errc::OutOfTable, "row " + alpha.to_string() + ", j=" + std::to_string(j) + " not in table");
    return it->second;
  }
  /// Row keys in enumeration order: alpha graded, then j.
  std::vector<RowKey> keys() const {
    std::vector<RowKey> k;
    for (const auto& [key, row] : rows) k.push_back(key);
    return k;
  }
};

/// Rows (alpha, j) for |alpha| <= k. Row alpha is L_f applied to row
/// alpha - e_f, f the first nonzero index: L^alpha = L^{e_f} L^{alpha - e_f}
/// with the chain's first step outermost.
inline ExpansionTable build_expansion_table(const CRFrame& f, int k) {
  if (k < 0) throw Error(Errc::InvalidInput, "negative table depth");
  if (f.order < k + 1)
    throw OrderError(k + 1, f.order, "expansion table to depth " + std::to_string(k) + " needs frame order " +
                                         std::to_string(k + 1) + ", frame has " + std::to_string(f.order));
  const std::vector<MultiIndex> alphas = multi_indices(f.n, k);
  auto build_root = [&](int j) {
    std::map<MultiIndex, ExpansionRow> chain;
    ExpansionRow root;
    root.form = f.theta[j - 1];
    for (int l = 0; l < f.N(); ++l)
      root.coeffs.push_back(Jet::constant(f.vars, f.order, l == j - 1 ? 1 : 0));
    chain.emplace(MultiIndex::zero(f.n), std::move(root));
    for (const auto& a : alphas) {
      if (a.order() == 0) continue;
      const int fi = a.first_nonzero();
      const ExpansionRow& parent = chain.at(a.minus_unit(fi));
      ExpansionRow r;
      r.form = lie_derivative_form(f, f.L[fi], parent.form);
      r.coeffs = expand_in_coframe(f, r.form);
      chain.emplace(a, std::move(r));
    }
    return chain;
  };

  std::vector<std::future<std::map<MultiIndex, ExpansionRow>>> jobs;
  for (int j = 1; j <= f.d; ++j) jobs.push_back(std::async(std::launch::async, build_root, j));
  ExpansionTable t{f, k, {}};
  for (int j = 1; j <= f.d; ++j)
    for (auto& [a, row] : jobs[j - 1].get()) t.rows.emplace(RowKey{a, j}, std::move(row));
  return t;
}

/// det of the N x N matrix with rows A^{alpha^i, r_i}.
inline Jet multiplier_determinant(const ExpansionTable& t, const std::vector<MultiIndex>& alphas,
                                  const std::vector<int>& r) {
  const auto big_n = static_cast<std::size_t>(t.frame.N());
  if (alphas.size() != big_n || r.size() != big_n)
    throw Error(Errc::SizeMismatch, "need exactly N = " + std::to_string(big_n) + " multi-indices and r entries");
  JetMatrix m;
  for (std::size_t i = 0; i < big_n; ++i) {
    if (alphas[i].size() != static_cast<std::size_t>(t.frame.n))
      throw Error(Errc::SizeMismatch, "multi-index " + alphas[i].to_string() + " has the wrong length");
    if (alphas[i].order() > t.max_k || r[i] < 1 || r[i] > t.frame.d)
      throw Error(Errc::OutOfTable, "row " + alphas[i].to_string() + ", r=" + std::to_string(r[i]) +
                                        " is outside the table");
    m.push_back(t.row(alphas[i], r[i]).coeffs);
  }
  return determinant(m);
}

struct MultiplierKey {
  std::vector<MultiIndex> alphas;
  std::vector<int> r;

  std::string to_string() const {
    std::string s = "alphas=[";
    for (std::size_t i = 0; i < alphas.size(); ++i) s += (i ? "," : "") + alphas[i].to_string();
    s += "] r=[";
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
    return s + "]";
  }
  friend bool operator==(const MultiplierKey&, const MultiplierKey&) = default;
  friend std::strong_ordering operator<=>(const MultiplierKey& a, const MultiplierKey& b) {
    for (std::size_t i = 0; i < std::min(a.alphas.size(), b.alphas.size()); ++i) {
      if (auto c = RowKey{a.alphas[i], a.r[i]} <=> RowKey{b.alphas[i], b.r[i]}; c != 0) return c;
    }
    return a.alphas.size() <=> b.alphas.size();
  }
};

namespace detail {

inline MultiplierKey key_from_rows(const std::vector<RowKey>& keys, const std::vector<std::size_t>& pick) {
  MultiplierKey k;
  for (std::size_t p : pick) {
    k.alphas.push_back(keys[p].alpha);
    k.r.push_back(keys[p].j);
  }
  return k;
}

/// All strictly increasing N-subsets of the row keys with |alpha| <= k.
/// Other choices only repeat rows (D = 0) or permute them (sign change).
inline std::vector<MultiplierKey> enumerate_multiplier_keys(const ExpansionTable& t, int k) {
  std::vector<RowKey> keys;
  for (const auto& key : t.keys())
    if (key.alpha.order() <= k) keys.push_back(key);
  const std::size_t big_n = static_cast<std::size_t>(t.frame.N());
  std::vector<MultiplierKey> out;
  if (keys.size() < big_n) return out;
  std::vector<std::size_t> pick(big_n);
  for (std::size_t i = 0; i < big_n; ++i) pick[i] = i;
  while (true) {
    out.push_back(key_from_rows(keys, pick));
    std::size_t i = big_n;
    while (i > 0 && pick[i - 1] == keys.size() - big_n + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < big_n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

}  // namespace detail

/// Every multiplier D(alphas, r) with |alpha^i| <= k, computed in parallel
/// and merged by key, so the result does not depend on scheduling.
inline std::map<MultiplierKey, Jet> all_multipliers(const ExpansionTable& t, int k) {
  std::vector<MultiplierKey> keys = detail::enumerate_multiplier_keys(t, k);
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t chunk = (keys.size() + workers - 1) / std::max<std::size_t>(workers, 1);
  std::vector<std::future<std::vector<Jet>>> jobs;
  for (std::size_t begin = 0; begin < keys.size(); begin += chunk) {
    const std::size_t end = std::min(keys.size(), begin + chunk);
    jobs.push_back(std::async(std::launch::async, [&t, &keys, begin, end] {
      std::vector<Jet> d;
      for (std::size_t i = begin; i < end; ++i) d.push_back(multiplier_determinant(t, keys[i].alphas, keys[i].r));
      return d;
    }));
  }
  std::map<MultiplierKey, Jet> out;
  std::size_t i = 0;
  for (auto& job : jobs)
    for (auto& d : job.get()) out.emplace(keys[i++], std::move(d));
  return out;
}

/// Smallest k <= max_k for which the constant terms of the rows with
/// |alpha| <= k have rank N, i.e. some D(alphas, r)(0) != 0.
inline std::optional<int> finite_nondegeneracy_order(const ExpansionTable& t) {
  EchelonBasis basis;
  const std::size_t big_n = static_cast<std::size_t>(t.frame.N());
  for (int k = 0; k <= t.max_k; ++k) {
    for (const auto& [key, row] : t.rows) {
      if (key.alpha.order() != k) continue;
      std::vector<GaussianRational> v;
      for (const auto& c : row.coeffs) v.push_back(c.eval0());
      basis.add(std::move(v));
    }
    if (basis.rank() == big_n) return k;
  }
  return std::nullopt;
}

/// Rows picked greedily in enumeration order whose constant parts are
/// independent; D at that key is nonzero at the origin.
inline std::optional<MultiplierKey> finite_nondegeneracy_witness(const ExpansionTable& t, int k) {
  EchelonBasis basis;
  std::vector<RowKey> picked;
  for (const auto& [key, row] : t.rows) {
    if (key.alpha.order() > k) continue;
    std::vector<GaussianRational> v;
    for (const auto& c : row.coeffs) v.push_back(c.eval0());
    if (basis.add(std::move(v))) picked.push_back(key);
    if (picked.size() == static_cast<std::size_t>(t.frame.N())) break;
  }
  if (picked.size() != static_cast<std::size_t>(t.frame.N())) return std::nullopt;
  std::sort(picked.begin(), picked.end());
  std::vector<std::size_t> idx(picked.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return detail::key_from_rows(picked, idx);
}

/// Smallest k <= k_max with (a) phi_{z^alpha}(0) = phi_{zb^alpha}(0) = 0 for
/// |alpha| <= k and (b) span{grad_z phi_{zb^alpha}(0) : 0 < |alpha| <= k} = C^n.
inline std::optional<int> weak_nondegeneracy_order(const Jet& phi, int n, int k_max) {
  const VariableSet& v = phi.vars();
  if (!v.is_cr() || v.n() != n) throw Error(Errc::VariableMismatch, "phi must live on the CR variables of dimension n");
  if (phi.order() < k_max + 1)
    throw OrderError(k_max + 1, phi.order(), "weak nondegeneracy to k=" + std::to_string(k_max) +
                                                 " needs phi through order " + std::to_string(k_max + 1));
  auto alpha_factorial = [](const MultiIndex& a) {
    GaussianRational f = 1;
    for (int e : a.entries) f *= factorial(e);
    return f;
  };
  auto pure = [&](const MultiIndex& a, bool barred) {
    Monomial m;
    for (int j = 0; j < n; ++j) m.set(barred ? v.zb(j + 1) : v.z(j + 1), a[j]);
    return m;
  };
  if (!phi.eval0().is_zero()) return std::nullopt;
  EchelonBasis span;
  const std::vector<MultiIndex> all = multi_indices(n, k_max);
  for (int k = 1; k <= k_max; ++k) {
    for (const auto& a : all) {
      if (a.order() != k) continue;
      if (!phi.coefficient(pure(a, false)).is_zero() || !phi.coefficient(pure(a, true)).is_zero())
        return std::nullopt;
      std::vector<GaussianRational> grad;
      const Monomial zb_a = pure(a, true);
      for (int nu = 1; nu <= n; ++nu)
        grad.push_back(phi.coefficient(zb_a * Monomial::unit(v.z(nu))) * alpha_factorial(a));
      span.add(std::move(grad));
    }
    if (span.rank() == static_cast<std::size_t>(n)) return k;
  }
  return std::nullopt;
}

struct CRRegularity {
  int ell = 0;
  MultiplierKey witness;
  GaussianRational psi0;
  Jet psi;
};

/// The multiplier of smallest s-order ell that factors as s^ell * unit;
/// ties go to the first key in enumeration order.
inline std::optional<CRRegularity> cr_regularity_from(const std::map<MultiplierKey, Jet>& dets) {
  std::optional<CRRegularity> best;
  for (const auto& [key, d] : dets) {
    if (d.is_zero() || !d.vars().has_s()) continue;
    SFactorization fac = s_factor(d);
    if (!fac.unit_at_origin) continue;
    if (!best || fac.k < best->ell) best = CRRegularity{fac.k, key, fac.unit.eval0(), fac.unit};
  }
  return best;
}

inline std::optional<CRRegularity> cr_regularity_check(const ExpansionTable& t) {
  return cr_regularity_from(all_multipliers(t, t.max_k));
}

struct MultiplierReport {
  std::map<MultiplierKey, Jet> determinants;
  std::optional<int> finite_nondeg_order;
  std::optional<MultiplierKey> finite_nondeg_witness;
  std::optional<int> weak_nondeg_order;
  std::optional<CRRegularity> cr_regular;
  int searched_k = 0;
};

inline MultiplierReport analyze(const ExpansionTable& t) {
  MultiplierReport r;
  r.searched_k = t.max_k;
  r.determinants = all_multipliers(t, t.max_k);
  r.finite_nondeg_order = finite_nondegeneracy_order(t);
  if (r.finite_nondeg_order) r.finite_nondeg_witness = finite_nondegeneracy_witness(t, *r.finite_nondeg_order);
  if (t.frame.hypersurface && t.frame.hypersurface->phi.order() >= t.max_k + 1)
    r.weak_nondeg_order = weak_nondegeneracy_order(t.frame.hypersurface->phi, t.frame.n, t.max_k);
  r.cr_regular = cr_regularity_from(r.determinants);
  return r;
}

/// Evaluates the closed form
///   L^alpha theta = ((-L^t)^alpha 1) theta
///     + sum_l sum_nu L^{alpha(nu-1)} ( ((-L^t)^{alpha - alpha(nu)} 1)
///         (L^{e} conj(b^l) - conj(L_l) b^{e}) ) omega^l,   e = alpha(nu) - alpha(nu-1),
/// with -L_j^t g = L_j g + (d_s b^j) g, and compares it with the table row.
inline bool adjoint_expansion_crosscheck(const CRFrame& f, const MultiIndex& alpha) {
  if (!f.hypersurface || f.d != 1) throw Error(Errc::InvalidInput, "adjoint cross-check needs a hypersurface frame");
  const auto& b = f.hypersurface->b;
  const std::size_t s = f.vars->s();
  const int n = f.n;

  auto minus_lt = [&](int j, const Jet& g) { return f.L[j].apply(g) + b[j].derive(s) * g; };
  auto minus_lt_pow = [&](const MultiIndex& beta) {
    Jet g = Jet::constant(f.vars, f.order, 1);
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < beta[j]; ++t) g = minus_lt(j, g);
    return g;
  };
  auto l_pow = [&](const MultiIndex& beta, Jet g) {
    for (int j = n - 1; j >= 0; --j)
      for (int t = 0; t < beta[j]; ++t) g = f.L[j].apply(g);
    return g;
  };

  const std::vector<int> steps = chain_steps(alpha);
  std::vector<Jet> expected;
  expected.push_back(minus_lt_pow(alpha));
  for (int l = 0; l < n; ++l) {
    Jet acc(f.vars, f.order);
    MultiIndex prev = MultiIndex::zero(n);
    for (int e : steps) {
      MultiIndex cur = prev.plus_unit(e);
      Jet c = f.L[e].apply(b[l].conj()) - f.L[l].conj().apply(b[e]);
      acc += l_pow(prev, minus_lt_pow(alpha - cur) * c);
      prev = cur;
    }
    expected.push_back(acc);
  }

  ExpansionTable t = build_expansion_table(f, alpha.order());
  const auto& got = t.row(alpha, 1).coeffs;
  for (std::size_t l = 0; l < expected.size(); ++l)
    if (!agree(expected[l], got[l])) return false;
  return true;
}

}  // namespace crmult
