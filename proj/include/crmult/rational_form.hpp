#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crmult/jet.hpp"

namespace crmult {

/// Base space for symbols: x coordinates (jets) and the dual variables xi,
/// one per x coordinate.
struct SymbolSpace {
  VarsPtr x;
  std::vector<std::string> xi;

  std::size_t dim() const { return xi.size(); }
  friend bool operator==(const SymbolSpace& a, const SymbolSpace& b) { return *a.x == *b.x && a.xi == b.xi; }
};
using SpacePtr = std::shared_ptr<const SymbolSpace>;

inline SpacePtr make_space(VarsPtr x, std::vector<std::string> xi_names = {}) {
  if (xi_names.empty())
    for (const auto& n : x->names()) xi_names.push_back("xi_" + n);
  if (xi_names.size() != x->size()) throw Error(Errc::SizeMismatch, "need one xi per x coordinate");
  return std::make_shared<const SymbolSpace>(SymbolSpace{std::move(x), std::move(xi_names)});
}

/// Polynomial in xi with constant coefficients.
using XiConst = std::map<Monomial, GaussianRational>;
/// Polynomial in xi with x-jet coefficients.
using XiPoly = std::map<Monomial, Jet>;

namespace detail {

inline std::string xi_monomial_string(const Monomial& m, const SymbolSpace& sp) {
  std::string s;
  for (std::size_t k = 0; k < sp.dim(); ++k) {
    if (m[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += sp.xi[k];
    if (m[k] > 1) s += "^" + std::to_string(m[k]);
  }
  return s;
}

inline std::string xi_const_string(const XiConst& p, const SymbolSpace& sp) {
  std::string s;
  for (const auto& [m, c] : p) {
    std::string cs = c.to_string();
    bool compound = cs.find_first_of("+-", 1) != std::string::npos;
    std::string mono = xi_monomial_string(m, sp);
    std::string piece;
    if (mono.empty())
      piece = cs;
    else if (c == GaussianRational(1))
      piece = mono;
    else if (c == GaussianRational(-1))
      piece = "-" + mono;
    else
      piece = (compound ? "(" + cs + ")" : cs) + "*" + mono;
    if (!s.empty() && piece[0] != '-') s += "+";
    s += piece;
  }
  return s.empty() ? "0" : s;
}

}  // namespace detail

/// Entry P(x, xi) / Q(xi) of a symbol. Q is kept as a product of monic
/// constant-coefficient atoms with multiplicities; P has jet coefficients.
class RationalForm {
 public:
  RationalForm() = default;
  RationalForm(SpacePtr sp, int order) : sp_(std::move(sp)), order_(order) {}

  static RationalForm constant(SpacePtr sp, int order, const GaussianRational& c) {
    RationalForm r(sp, order);
    if (!c.is_zero()) r.num_.emplace(Monomial{}, Jet::constant(sp->x, order, c));
    return r;
  }
  static RationalForm from_jet(SpacePtr sp, const Jet& f, const Monomial& xi_mono = {}) {
    RationalForm r(sp, f.order());
    if (!f.is_zero()) r.num_.emplace(xi_mono, f);
    return r;
  }
  /// The xi-coordinate xi_k.
  static RationalForm xi(SpacePtr sp, int order, std::size_t k) {
    RationalForm r(sp, order);
    r.num_.emplace(Monomial::unit(k), Jet::constant(sp->x, order, 1));
    return r;
  }
  static RationalForm from_poly(SpacePtr sp, int order, XiPoly num) {
    RationalForm r(std::move(sp), order);
    for (auto& [m, c] : num) {
      r.order_ = std::min(r.order_, c.order());
      if (!c.is_zero()) r.num_.emplace(m, std::move(c));
    }
    return r;
  }

  const SpacePtr& space() const { return sp_; }
  const XiPoly& numerator() const { return num_; }
  const std::map<XiConst, int>& denominator() const { return den_; }
  int order() const {
    int o = order_;
    for (const auto& [m, c] : num_) o = std::min(o, c.order());
    return o;
  }
  bool is_zero() const { return num_.empty(); }
  bool is_polynomial() const { return den_.empty(); }

  friend RationalForm operator+(const RationalForm& a, const RationalForm& b) {
    a.check_space(b);
    std::map<XiConst, int> den = a.den_;
    for (const auto& [atom, e] : b.den_) den[atom] = std::max(den[atom], e);
    RationalForm r(a.sp_, std::min(a.order(), b.order()));
    r.den_ = den;
    r.num_ = add(a.scaled_to(den), b.scaled_to(den));
    r.reduce();
    return r;
  }
  RationalForm operator-() const {
    RationalForm r = *this;
    for (auto& [m, c] : r.num_) c = -c;
    return r;
  }
  friend RationalForm operator-(const RationalForm& a, const RationalForm& b) { return a + (-b); }
  friend RationalForm operator*(const RationalForm& a, const RationalForm& b) {
    a.check_space(b);
    RationalForm r(a.sp_, std::min(a.order(), b.order()));
    r.num_ = mul(a.num_, b.num_);
    r.den_ = a.den_;
    for (const auto& [atom, e] : b.den_) r.den_[atom] += e;
    r.reduce();
    return r;
  }
  friend RationalForm operator*(const GaussianRational& c, RationalForm a) {
    if (c.is_zero()) {
      a.num_.clear();
      a.den_.clear();
      return a;
    }
    for (auto& [m, j] : a.num_) j = c * j;
    return a;
  }
  friend RationalForm operator*(const Jet& f, RationalForm a) {
    XiPoly out;
    for (auto& [m, j] : a.num_) {
      Jet p = f * j;
      if (!p.is_zero()) out.emplace(m, std::move(p));
    }
    a.order_ = std::min(a.order_, f.order());
    a.num_ = std::move(out);
    return a;
  }

  /// d/dx^a, acting on the jet coefficients.
  RationalForm dx(std::size_t a) const {
    RationalForm r(sp_, order() - 1);
    r.den_ = den_;
    for (const auto& [m, c] : num_) {
      Jet d = c.derive(a);
      if (!d.is_zero()) r.num_.emplace(m, std::move(d));
    }
    return r;
  }

  /// d/dxi_k by the quotient rule over the atoms:
  /// (P / prod a_i^e_i)' = (P' prod a_i - P sum_i e_i a_i' prod_{j!=i} a_j) / (Q prod a_i).
  RationalForm dxi(std::size_t k) const {
    RationalForm r(sp_, order());
    XiPoly dp = derive_xi(num_, k);
    std::vector<XiConst> atoms;
    for (const auto& [atom, e] : den_) atoms.push_back(atom);
    XiPoly top = dp;
    for (const auto& a : atoms) top = mul(top, a);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      XiConst da = derive_xi(atoms[i], k);
      if (da.empty()) continue;
      XiPoly t = mul(num_, da);
      t = scale(t, GaussianRational(den_.at(atoms[i])));
      for (std::size_t j = 0; j < atoms.size(); ++j)
        if (j != i) t = mul(t, atoms[j]);
      top = add(top, scale(t, GaussianRational(-1)));
    }
    r.num_ = std::move(top);
    r.den_ = den_;
    for (auto& [atom, e] : r.den_) ++e;
    r.reduce();
    return r;
  }

  /// Value at (x0, xi0); PoleAtXi if an atom vanishes at xi0.
  GaussianRational evaluate(std::span<const GaussianRational> x0, std::span<const GaussianRational> xi0) const {
    GaussianRational q = 1;
    for (const auto& [atom, e] : den_) {
      GaussianRational v = eval_const(atom, xi0);
      if (v.is_zero()) throw Error(Errc::PoleAtXi, "denominator vanishes at the covector");
      for (int t = 0; t < e; ++t) q *= v;
    }
    GaussianRational p = 0;
    for (const auto& [m, c] : num_) p += c.evaluate(x0) * eval_mono(m, xi0);
    return p / q;
  }

  /// Exact equality of rational functions through the common jet order.
  friend bool equivalent(const RationalForm& a, const RationalForm& b) {
    a.check_space(b);
    XiPoly l = a.num_, r = b.num_;
    for (const auto& [atom, e] : b.den_)
      for (int t = 0; t < e; ++t) l = mul(l, atom);
    for (const auto& [atom, e] : a.den_)
      for (int t = 0; t < e; ++t) r = mul(r, atom);
    return add(l, scale(r, GaussianRational(-1))).empty();
  }

  /// Degree of homogeneity read off the representation, if P is
  /// homogeneous and every atom is homogeneous.
  std::optional<int> degree() const {
    std::optional<int> dn;
    for (const auto& [m, c] : num_) {
      if (dn && *dn != m.degree()) return std::nullopt;
      dn = m.degree();
    }
    if (!dn) return std::nullopt;
    int d = *dn;
    for (const auto& [atom, e] : den_) {
      int ad = atom.begin()->first.degree();
      for (const auto& [m, c] : atom)
        if (m.degree() != ad) return std::nullopt;
      d -= e * ad;
    }
    return d;
  }

  /// Euler's relation sum_k xi_k d/dxi_k f = degree * f, checked exactly.
  bool satisfies_euler(int deg) const {
    RationalForm lhs(sp_, order());
    for (std::size_t k = 0; k < sp_->dim(); ++k) lhs = lhs + xi(sp_, order(), k) * dxi(k);
    return equivalent(lhs, GaussianRational(deg) * *this);
  }

  /// Multiplicative inverse; requires P = c(x) h(xi) with c a unit jet.
  RationalForm inverse() const {
    if (num_.empty()) throw Error(Errc::NotElliptic, "inverse of the zero symbol entry");
    const Jet& lead = num_.rbegin()->second;
    if (lead.eval0().is_zero())
      throw Error(Errc::NotElliptic, "leading x-coefficient " + lead.to_string() + " is not a unit");
    Jet c_inv = lead.inverse();
    XiConst h;
    for (const auto& [m, c] : num_) {
      Jet ratio = (c * c_inv).truncated(std::min(c.order(), lead.order()));
      GaussianRational g = ratio.eval0();
      if (!(ratio - Jet::constant(ratio.vars_ptr(), ratio.order(), g)).is_zero())
        throw Error(Errc::NotElliptic, "entry does not factor as c(x) h(xi); its inverse is not a rational form");
      if (!g.is_zero()) h.emplace(m, g);
    }
    RationalForm r(sp_, order());
    XiPoly top;
    top.emplace(Monomial{}, c_inv);
    for (const auto& [atom, e] : den_)
      for (int t = 0; t < e; ++t) top = mul(top, atom);
    auto [scale_c, atoms] = factor_atoms(h);
    r.num_ = scale(top, scale_c.inverse());
    for (const auto& [atom, e] : atoms) r.den_[atom] += e;
    r.reduce();
    return r;
  }

  RationalForm truncated(int k) const {
    RationalForm r = *this;
    r.order_ = std::min(order_, k);
    XiPoly out;
    for (const auto& [m, c] : num_) {
      Jet t = c.truncated(k);
      if (!t.is_zero()) out.emplace(m, std::move(t));
    }
    r.num_ = std::move(out);
    return r;
  }

  std::string to_string() const {
    std::string top;
    for (auto it = num_.rbegin(); it != num_.rend(); ++it) {
      const auto& [m, c] = *it;
      std::string cs = c.to_string();
      bool compound = c.terms().size() > 1 || cs.find_first_of("+-", 1) != std::string::npos;
      std::string mono = detail::xi_monomial_string(m, *sp_);
      std::string piece;
      if (mono.empty())
        piece = compound ? "(" + cs + ")" : cs;
      else if (cs == "1")
        piece = mono;
      else if (cs == "-1")
        piece = "-" + mono;
      else
        piece = (compound ? "(" + cs + ")" : cs) + "*" + mono;
      if (!top.empty() && piece[0] != '-') top += " + ";
      else if (!top.empty()) top += " ";
      top += piece;
    }
    if (top.empty()) top = "0";
    if (den_.empty()) return top;
    std::string bottom;
    for (const auto& [atom, e] : den_) {
      if (!bottom.empty()) bottom += "*";
      std::string a = detail::xi_const_string(atom, *sp_);
      const bool alone = den_.size() == 1 && e == 1;
      bottom += (atom.size() > 1 && !alone ? "(" + a + ")" : a);
      if (e > 1) bottom += "^" + std::to_string(e);
    }
    return "(" + top + ")/(" + bottom + ")";
  }

  /// Splits a constant polynomial into c * xi^mu * h' with h' monic and
  /// free of monomial content; xi^mu becomes single-variable atoms.
  static std::pair<GaussianRational, std::map<XiConst, int>> factor_atoms(const XiConst& h) {
    if (h.empty()) throw Error(Errc::NotElliptic, "zero denominator");
    Monomial content = h.begin()->first;
    for (const auto& [m, c] : h)
      for (std::size_t k = 0; k < kMaxVariables; ++k) content.set(k, std::min(content[k], m[k]));
    std::map<XiConst, int> atoms;
    for (std::size_t k = 0; k < kMaxVariables; ++k)
      if (content[k] > 0) atoms[XiConst{{Monomial::unit(k), GaussianRational(1)}}] += content[k];
    XiConst rest;
    for (const auto& [m, c] : h) rest.emplace(m / content, c);
    GaussianRational lc = rest.rbegin()->second;
    if (rest.size() > 1) {
      XiConst monic;
      GaussianRational inv = lc.inverse();
      for (const auto& [m, c] : rest) monic.emplace(m, c * inv);
      atoms[monic] += 1;
    }
    return {lc, atoms};
  }

 private:
  SpacePtr sp_;
  int order_ = -1;
  XiPoly num_;
  std::map<XiConst, int> den_;

  void check_space(const RationalForm& o) const {
    if (sp_ != o.sp_ && !(*sp_ == *o.sp_)) throw Error(Errc::VariableMismatch, "rational forms on different spaces");
  }

  static GaussianRational eval_mono(const Monomial& m, std::span<const GaussianRational> xi0) {
    GaussianRational v = 1;
    for (std::size_t k = 0; k < xi0.size(); ++k)
      for (int t = 0; t < m[k]; ++t) v *= xi0[k];
    return v;
  }
  static GaussianRational eval_const(const XiConst& p, std::span<const GaussianRational> xi0) {
    GaussianRational v = 0;
    for (const auto& [m, c] : p) v += c * eval_mono(m, xi0);
    return v;
  }

  static XiPoly add(XiPoly a, const XiPoly& b) {
    for (const auto& [m, c] : b) {
      auto [it, ins] = a.try_emplace(m, c);
      if (!ins) {
        it->second += c;
        if (it->second.is_zero()) a.erase(it);
      }
    }
    return a;
  }
  static XiPoly scale(XiPoly a, const GaussianRational& g) {
    for (auto& [m, c] : a) c = g * c;
    return a;
  }
  static XiPoly mul(const XiPoly& a, const XiPoly& b) {
    XiPoly out;
    for (const auto& [ma, ca] : a)
      for (const auto& [mb, cb] : b) {
        Jet p = ca * cb;
        if (p.is_zero()) continue;
        auto [it, ins] = out.try_emplace(ma * mb, p);
        if (!ins) {
          it->second += p;
          if (it->second.is_zero()) out.erase(it);
        }
      }
    return out;
  }
  static XiPoly mul(const XiPoly& a, const XiConst& b) {
    XiPoly out;
    for (const auto& [ma, ca] : a)
      for (const auto& [mb, cb] : b) {
        Jet p = cb * ca;
        auto [it, ins] = out.try_emplace(ma * mb, p);
        if (!ins) {
          it->second += p;
          if (it->second.is_zero()) out.erase(it);
        }
      }
    return out;
  }
  template <class Poly>
  static Poly derive_xi(const Poly& p, std::size_t k) {
    Poly out;
    for (const auto& [m, c] : p) {
      int e = m[k];
      if (e == 0) continue;
      Monomial d = m;
      d.set(k, e - 1);
      out.emplace(d, GaussianRational(e) * c);
    }
    return out;
  }

  XiPoly scaled_to(const std::map<XiConst, int>& den) const {
    XiPoly p = num_;
    for (const auto& [atom, e] : den) {
      auto it = den_.find(atom);
      int have = it == den_.end() ? 0 : it->second;
      for (int t = have; t < e; ++t) p = mul(p, atom);
    }
    return p;
  }

  /// Exact quotient p / atom, if the atom divides p.
  static std::optional<XiPoly> divide_exact(XiPoly p, const XiConst& atom) {
    const Monomial lead = atom.rbegin()->first;  // atom is monic in its largest monomial
    XiPoly q;
    while (!p.empty()) {
      auto it = p.rbegin();
      if (!lead.divides(it->first)) return std::nullopt;
      Monomial t = it->first / lead;
      Jet c = it->second;
      XiPoly sub;
      sub.emplace(t, c);
      p = add(p, scale(mul(sub, atom), GaussianRational(-1)));
      auto [qi, ins] = q.try_emplace(t, c);
      if (!ins) qi->second += c;
    }
    return q;
  }

  void reduce() {
    for (auto it = num_.begin(); it != num_.end();) it = it->second.is_zero() ? num_.erase(it) : std::next(it);
    if (num_.empty()) {
      den_.clear();
      return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
      while (it->second > 0) {
        auto q = divide_exact(num_, it->first);
        if (!q) break;
        num_ = std::move(*q);
        --it->second;
      }
      it = it->second == 0 ? den_.erase(it) : std::next(it);
    }
  }
};

}  // namespace crmult
