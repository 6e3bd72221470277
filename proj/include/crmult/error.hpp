#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crmult {

enum class Errc {
  VariableMismatch,
  NotAUnit,
  NotReal,
  OrderTooLow,
  NotCharacteristic,
  NotHolomorphic,
  DegenerateCoframe,
  NotAnnihilated,
  OutOfTable,
  SizeMismatch,
  DepthExceeded,
  PoleAtXi,
  NotElliptic,
  FlatInput,
  NotDivisible,
  SyntaxError,
  UnknownVariable,
  InvalidInput,
};

constexpr std::string_view errc_name(Errc e) noexcept {
  switch (e) {
    case Errc::VariableMismatch: return "VariableMismatch";
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::NotReal: return "NotReal";
    case Errc::OrderTooLow: return "OrderTooLow";
    case Errc::NotCharacteristic: return "NotCharacteristic";
    case Errc::NotHolomorphic: return "NotHolomorphic";
    case Errc::DegenerateCoframe: return "DegenerateCoframe";
    case Errc::NotAnnihilated: return "NotAnnihilated";
    case Errc::OutOfTable: return "OutOfTable";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::DepthExceeded: return "DepthExceeded";
    case Errc::PoleAtXi: return "PoleAtXi";
    case Errc::NotElliptic: return "NotElliptic";
    case Errc::FlatInput: return "FlatInput";
    case Errc::NotDivisible: return "NotDivisible";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Budget-type failures: the computation is well posed but needs more jet
/// orders or symbol terms than were supplied.
constexpr bool is_budget_error(Errc e) noexcept {
  return e == Errc::OrderTooLow || e == Errc::DepthExceeded || e == Errc::OutOfTable;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Error raised by the order bookkeeping; carries the order that would have
/// been sufficient next to the order that was available.
class OrderError : public Error {
 public:
  OrderError(int needed, int have, const std::string& what)
      : Error(Errc::OrderTooLow, what + " (needed order " + std::to_string(needed) + ", have " +
                                     std::to_string(have) + ")"),
        needed_(needed),
        have_(have) {}

  int needed() const noexcept { return needed_; }
  int have() const noexcept { return have_; }

 private:
  int needed_;
  int have_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(Errc code, int line, int column, const std::string& what)
      : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                        what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace crmult
