#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>

#include "crmult/error.hpp"

namespace crmult {

inline constexpr std::size_t kMaxVariables = 16;

/// Exponent vector of a monomial over at most kMaxVariables variables.
/// Ordered by total degree first, then lexicographically (larger leading
/// exponent first), so iterating a map of monomials visits low degrees first.
class Monomial {
 public:
  Monomial() = default;

  static Monomial unit(std::size_t var, int power = 1) {
    Monomial m;
    m.set(var, power);
    return m;
  }

  int operator[](std::size_t var) const noexcept { return exps_[var]; }
  int degree() const noexcept { return degree_; }

  void set(std::size_t var, int power) {
    if (var >= kMaxVariables) throw Error(Errc::InvalidInput, "too many variables");
    if (power < 0 || power > 255) throw Error(Errc::InvalidInput, "exponent out of range");
    degree_ += power - exps_[var];
    exps_[var] = static_cast<std::uint8_t>(power);
  }

  bool divides(const Monomial& o) const noexcept {
    for (std::size_t k = 0; k < kMaxVariables; ++k)
      if (exps_[k] > o.exps_[k]) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t k = 0; k < kMaxVariables; ++k) {
      int e = a.exps_[k] + b.exps_[k];
      if (e > 255) throw Error(Errc::InvalidInput, "exponent out of range");
      m.exps_[k] = static_cast<std::uint8_t>(e);
    }
    m.degree_ = a.degree_ + b.degree_;
    return m;
  }

  /// Requires b.divides(a).
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t k = 0; k < kMaxVariables; ++k)
      m.exps_[k] = static_cast<std::uint8_t>(a.exps_[k] - b.exps_[k]);
    m.degree_ = a.degree_ - b.degree_;
    return m;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
    for (std::size_t k = 0; k < kMaxVariables; ++k)
      if (a.exps_[k] != b.exps_[k])
        return a.exps_[k] > b.exps_[k] ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Permutes variable slots: result[perm[k]] = this[k].
  Monomial permuted(std::span<const std::size_t> perm) const {
    Monomial m;
    for (std::size_t k = 0; k < perm.size(); ++k) m.exps_[perm[k]] = exps_[k];
    m.degree_ = degree_;
    return m;
  }

 private:
  std::array<std::uint8_t, kMaxVariables> exps_{};
  int degree_ = 0;
};

}  // namespace crmult
