#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crmult/error.hpp"
#include "crmult/gaussian_rational.hpp"
#include "crmult/monomial.hpp"
#include "crmult/variables.hpp"

namespace crmult {

using VarsPtr = std::shared_ptr<const VariableSet>;

inline VarsPtr make_vars(VariableSet v) { return std::make_shared<const VariableSet>(std::move(v)); }

/// Truncated multivariate power series with Gaussian-rational coefficients.
///
/// A jet of order K is known through total degree K; every stored monomial
/// has degree <= K and no stored coefficient is zero. Binary operations take
/// the smaller order of their operands, derivatives lose one order. An order
/// of -1 means no coefficient is trustworthy (the jet carries no data).
class Jet {
 public:
  using Terms = std::map<Monomial, GaussianRational>;

  Jet() = default;
  Jet(VarsPtr vars, int order) : vars_(std::move(vars)), order_(std::max(order, -1)) {}

  static Jet constant(VarsPtr vars, int order, const GaussianRational& c) {
    Jet j(std::move(vars), order);
    j.add_term(Monomial{}, c);
    return j;
  }
  static Jet variable(VarsPtr vars, int order, std::size_t var) {
    return monomial(std::move(vars), order, Monomial::unit(var), 1);
  }
  static Jet monomial(VarsPtr vars, int order, const Monomial& m, const GaussianRational& c) {
    Jet j(std::move(vars), order);
    j.add_term(m, c);
    return j;
  }

  const VariableSet& vars() const { return *vars_; }
  const VarsPtr& vars_ptr() const noexcept { return vars_; }
  int order() const noexcept { return order_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  GaussianRational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? GaussianRational{} : it->second;
  }

  /// Adds c * m in place; terms above the order are dropped.
  void add_term(const Monomial& m, const GaussianRational& c) {
    if (m.degree() > order_ || c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Jet truncated(int k) const {
    Jet out(vars_, std::min(order_, k));
    for (const auto& [m, c] : terms_) {
      if (m.degree() > out.order_) break;
      out.terms_.emplace_hint(out.terms_.end(), m, c);
    }
    return out;
  }

  Jet& operator+=(const Jet& g) {
    check_vars(g);
    if (g.order_ < order_) *this = truncated(g.order_);
    for (const auto& [m, c] : g.terms_) add_term(m, c);
    return *this;
  }
  Jet& operator-=(const Jet& g) {
    check_vars(g);
    if (g.order_ < order_) *this = truncated(g.order_);
    for (const auto& [m, c] : g.terms_) add_term(m, -c);
    return *this;
  }
  friend Jet operator+(Jet f, const Jet& g) { return f += g; }
  friend Jet operator-(Jet f, const Jet& g) { return f -= g; }
  Jet operator-() const {
    Jet out(vars_, order_);
    for (const auto& [m, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, -c);
    return out;
  }

  friend Jet operator*(const Jet& f, const Jet& g) {
    f.check_vars(g);
    Jet out(f.vars_, std::min(f.order_, g.order_));
    for (const auto& [ma, ca] : f.terms_) {
      if (ma.degree() > out.order_) break;
      for (const auto& [mb, cb] : g.terms_) {
        if (ma.degree() + mb.degree() > out.order_) break;
        out.add_term(ma * mb, ca * cb);
      }
    }
    return out;
  }
  Jet& operator*=(const Jet& g) { return *this = *this * g; }

  friend Jet operator*(const GaussianRational& a, const Jet& f) {
    Jet out(f.vars_, f.order_);
    if (a.is_zero()) return out;
    for (const auto& [m, c] : f.terms_) out.terms_.emplace_hint(out.terms_.end(), m, a * c);
    return out;
  }

  /// Multiplication by the exact monomial c * m. The order rises by deg(m).
  Jet times_monomial(const Monomial& m, const GaussianRational& c = 1) const {
    Jet out(vars_, order_ < 0 ? order_ : order_ + m.degree());
    if (c.is_zero()) return out;
    for (const auto& [mm, cc] : terms_) out.terms_.emplace(mm * m, c * cc);
    return out;
  }

  /// Formal partial derivative; the result is trusted through order - 1.
  Jet derive(std::size_t var) const {
    if (var >= vars_->size()) throw Error(Errc::VariableMismatch, "derivative variable out of range");
    Jet out(vars_, order_ - 1);
    for (const auto& [m, c] : terms_) {
      int e = m[var];
      if (e == 0) continue;
      Monomial d = m;
      d.set(var, e - 1);
      out.add_term(d, GaussianRational(e) * c);
    }
    return out;
  }

  GaussianRational eval0() const { return coefficient(Monomial{}); }

  /// Multiplicative inverse through the same order, computed layer by layer
  /// on homogeneous components: g_0 = 1/f_0, g_d = -(1/f_0) sum_{j>=1} f_j g_{d-j}.
  Jet inverse() const {
    const GaussianRational c0 = eval0();
    if (order_ < 0) throw Error(Errc::NotAUnit, "inverse of a jet without trustworthy terms");
    if (c0.is_zero()) throw Error(Errc::NotAUnit, "constant term is zero");
    const GaussianRational inv0 = c0.inverse();
    std::vector<std::vector<std::pair<Monomial, GaussianRational>>> f_layers(order_ + 1);
    for (const auto& [m, c] : terms_) f_layers[m.degree()].emplace_back(m, c);
    std::vector<Terms> g_layers(order_ + 1);
    g_layers[0].emplace(Monomial{}, inv0);
    for (int d = 1; d <= order_; ++d) {
      Terms acc;
      for (int j = 1; j <= d; ++j)
        for (const auto& [mf, cf] : f_layers[j])
          for (const auto& [mg, cg] : g_layers[d - j]) {
            auto [it, ins] = acc.try_emplace(mf * mg, cf * cg);
            if (!ins) it->second += cf * cg;
          }
      for (auto& [m, c] : acc)
        if (!c.is_zero()) g_layers[d].emplace(m, -(inv0 * c));
    }
    Jet out(vars_, order_);
    for (auto& layer : g_layers)
      for (auto& [m, c] : layer) out.terms_.emplace_hint(out.terms_.end(), m, std::move(c));
    return out;
  }

  /// Swaps conjugate variables and conjugates coefficients.
  Jet conj() const {
    Jet out(vars_, order_);
    const auto& perm = vars_->conj_map();
    for (const auto& [m, c] : terms_) out.terms_.emplace(m.permuted(perm), c.conj());
    return out;
  }
  bool is_real() const { return conj().terms_ == terms_; }

  /// Evaluates the truncated polynomial at a point.
  GaussianRational evaluate(std::span<const GaussianRational> point) const {
    if (point.size() != vars_->size()) throw Error(Errc::VariableMismatch, "point dimension");
    GaussianRational sum;
    for (const auto& [m, c] : terms_) {
      GaussianRational t = c;
      for (std::size_t k = 0; k < point.size() && !t.is_zero(); ++k)
        for (int e = 0; e < m[k]; ++e) t *= point[k];
      sum += t;
    }
    return sum;
  }

  /// Composition f(g_1, ..., g_D) with jets g_k over `target` that have no
  /// constant term. The order is the minimum of f's and the images' orders.
  Jet substitute(const VarsPtr& target, std::span<const Jet> images) const {
    if (images.size() != vars_->size()) throw Error(Errc::VariableMismatch, "substitution arity");
    int order = order_;
    for (const auto& g : images) {
      if (!(g.vars() == *target)) throw Error(Errc::VariableMismatch, "substitution target");
      if (!g.eval0().is_zero())
        throw Error(Errc::InvalidInput, "substituted jets must vanish at the origin");
      order = std::min(order, g.order_);
    }
    std::vector<std::vector<Jet>> powers(images.size());
    auto power = [&](std::size_t k, int e) -> const Jet& {
      auto& p = powers[k];
      if (p.empty()) p.push_back(Jet::constant(target, order, 1));
      while (static_cast<int>(p.size()) <= e) p.push_back(p.back() * images[k].truncated(order));
      return p[e];
    };
    Jet out(target, order);
    for (const auto& [m, c] : terms_) {
      if (m.degree() > order) break;
      Jet t = Jet::constant(target, order, c);
      for (std::size_t k = 0; k < images.size(); ++k)
        if (m[k] > 0) t *= power(k, m[k]);
      out += t;
    }
    return out;
  }

  /// Canonical text form, parseable by the expression grammar.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string mono;
      for (std::size_t k = 0; k < vars_->size(); ++k) {
        if (m[k] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += vars_->name(k);
        if (m[k] > 1) mono += "^" + std::to_string(m[k]);
      }
      bool negative = false;
      std::string coef;
      const bool both = sgn(c.re()) != 0 && sgn(c.im()) != 0;
      if (both) {
        coef = "(" + c.to_string() + ")";
      } else {
        GaussianRational mag = c;
        if ((sgn(c.re()) < 0) || (sgn(c.re()) == 0 && sgn(c.im()) < 0)) {
          negative = true;
          mag = -c;
        }
        coef = mag.to_string();
      }
      std::string term;
      if (mono.empty())
        term = coef;
      else if (coef == "1")
        term = mono;
      else
        term = coef + "*" + mono;
      if (first)
        out = (negative ? "-" : "") + term;
      else
        out += (negative ? " - " : " + ") + term;
      first = false;
    }
    return out;
  }

  /// Structural equality: same variables, order and coefficients.
  friend bool operator==(const Jet& f, const Jet& g) {
    return f.order_ == g.order_ && f.terms_ == g.terms_ && f.same_vars(g);
  }

  bool same_vars(const Jet& g) const {
    return vars_ == g.vars_ || (vars_ && g.vars_ && *vars_ == *g.vars_);
  }

 private:
  void check_vars(const Jet& g) const {
    if (!same_vars(g)) throw Error(Errc::VariableMismatch, "jets over different variable sets");
  }

  VarsPtr vars_;
  int order_ = -1;
  Terms terms_;
};

/// True if f and g coincide through the smaller of their orders.
inline bool agree(const Jet& f, const Jet& g) { return (f - g).is_zero(); }

}  // namespace crmult
