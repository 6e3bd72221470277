#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crmult/error.hpp"
#include "crmult/monomial.hpp"

namespace crmult {

/// Ordered list of formal variables with a conjugation involution on the
/// variable slots.
///
/// The CR layout is z_1..z_n, zb_1..zb_n, s (2n+1 variables, conj swaps
/// z_j and zb_j and fixes s). A real layout has conj = identity.
class VariableSet {
 public:
  VariableSet() = default;

  /// z1..zn, zb1..zbn followed by d real coordinates: "s" when d = 1,
  /// s1..sd otherwise (no distinguished s-coordinate then).
  static VariableSet cr(int n, int d = 1) {
    if (n < 1 || d < 1 || 2 * n + d > static_cast<int>(kMaxVariables))
      throw Error(Errc::InvalidInput, "CR dimension out of range: n=" + std::to_string(n) +
                                          ", d=" + std::to_string(d));
    VariableSet v;
    v.n_ = n;
    for (int j = 1; j <= n; ++j) v.names_.push_back("z" + std::to_string(j));
    for (int j = 1; j <= n; ++j) v.names_.push_back("zb" + std::to_string(j));
    if (d == 1)
      v.names_.push_back("s");
    else
      for (int j = 1; j <= d; ++j) v.names_.push_back("s" + std::to_string(j));
    for (int j = 0; j < n; ++j) v.conj_.push_back(static_cast<std::size_t>(n + j));
    for (int j = 0; j < n; ++j) v.conj_.push_back(static_cast<std::size_t>(j));
    for (int j = 0; j < d; ++j) v.conj_.push_back(static_cast<std::size_t>(2 * n + j));
    if (d == 1) v.s_ = static_cast<std::size_t>(2 * n);
    return v;
  }
  int d() const noexcept { return n_ > 0 ? static_cast<int>(names_.size()) - 2 * n_ : 0; }

  /// Real variables; names default to x1..xd. A variable named "s" is
  /// registered as the distinguished s-coordinate.
  static VariableSet real(std::vector<std::string> names) {
    if (names.size() > kMaxVariables) throw Error(Errc::InvalidInput, "too many variables");
    VariableSet v;
    v.names_ = std::move(names);
    for (std::size_t k = 0; k < v.names_.size(); ++k) {
      v.conj_.push_back(k);
      if (v.names_[k] == "s") v.s_ = k;
    }
    return v;
  }
  static VariableSet real(int d, const std::string& prefix = "x") {
    std::vector<std::string> names;
    for (int k = 1; k <= d; ++k) names.push_back(prefix + std::to_string(k));
    return real(std::move(names));
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t k) const { return names_.at(k); }
  const std::vector<std::size_t>& conj_map() const noexcept { return conj_; }
  std::size_t conj(std::size_t k) const { return conj_.at(k); }

  /// CR dimension for the CR layout, 0 otherwise.
  int n() const noexcept { return n_; }
  bool is_cr() const noexcept { return n_ > 0; }

  std::size_t z(int j) const { return require_cr(j), static_cast<std::size_t>(j - 1); }
  std::size_t zb(int j) const { return require_cr(j), static_cast<std::size_t>(n_ + j - 1); }
  bool has_s() const noexcept { return s_.has_value(); }
  std::size_t s() const {
    if (!s_) throw Error(Errc::VariableMismatch, "variable set has no s-coordinate");
    return *s_;
  }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t k = 0; k < names_.size(); ++k)
      if (names_[k] == name) return k;
    return std::nullopt;
  }

  friend bool operator==(const VariableSet& a, const VariableSet& b) {
    return a.names_ == b.names_ && a.conj_ == b.conj_;
  }

 private:
  void require_cr(int j) const {
    if (n_ == 0 || j < 1 || j > n_)
      throw Error(Errc::VariableMismatch, "no CR coordinate with index " + std::to_string(j));
  }

  std::vector<std::string> names_;
  std::vector<std::size_t> conj_;
  std::optional<std::size_t> s_;
  int n_ = 0;
};

}  // namespace crmult
