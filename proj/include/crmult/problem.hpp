#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "crmult/expression.hpp"
#include "crmult/frame.hpp"
#include "crmult/symbol.hpp"

namespace crmult {

struct ConfigValue {
  std::string text;
  SourcePos pos;  // position of the first character of text
  int key_column = 1;
};

struct ConfigSection {
  std::string name;  // "problem", "symbol a", ...
  int line = 0;
  std::map<std::string, ConfigValue> values;

  const ConfigValue* get(const std::string& key) const {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  }
};

/// Sectioned key-value text: "[section]" headers, "key = value" lines,
/// '#' comments and blank lines.
struct ConfigFile {
  std::vector<ConfigSection> sections;

  const ConfigSection* find(std::string_view name) const {
    for (const auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

}  // namespace detail

inline ConfigFile parse_config(std::string_view text) {
  ConfigFile cfg;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = detail::trim(raw);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw SyntaxError(Errc::SyntaxError, line_no, indent + static_cast<int>(line.size()),
                          "expected ']' to close section header");
      std::string name(detail::trim(line.substr(1, line.size() - 2)));
      std::string normalized;
      for (std::istringstream is(name); is >> name;) normalized += (normalized.empty() ? "" : " ") + name;
      if (normalized.empty()) throw SyntaxError(Errc::SyntaxError, line_no, indent, "empty section name");
      if (cfg.find(normalized))
        throw SyntaxError(Errc::SyntaxError, line_no, indent, "duplicate section [" + normalized + "]");
      cfg.sections.push_back(ConfigSection{normalized, line_no, {}});
    } else {
      const auto eq = raw.find('=');
      if (eq == std::string_view::npos)
        throw SyntaxError(Errc::SyntaxError, line_no, indent, "expected 'key = value'");
      if (cfg.sections.empty())
        throw SyntaxError(Errc::SyntaxError, line_no, indent, "key outside of any [section]");
      std::string key(detail::trim(raw.substr(0, eq)));
      if (key.empty()) throw SyntaxError(Errc::SyntaxError, line_no, indent, "missing key before '='");
      std::string_view after = raw.substr(eq + 1);
      std::string_view value = detail::trim(after);
      const auto lead = after.find_first_not_of(" \t");
      const int col = static_cast<int>(eq) + 2 + static_cast<int>(lead == std::string_view::npos ? 0 : lead);
      auto& values = cfg.sections.back().values;
      if (values.contains(key))
        throw SyntaxError(Errc::SyntaxError, line_no, indent, "duplicate key '" + key + "'");
      values.emplace(key, ConfigValue{std::string(value), SourcePos{line_no, col}, indent});
    }
    if (end == text.size()) break;
  }
  return cfg;
}

enum class ProblemKind { Hypersurface, Abstract, Symbol };

inline std::string_view kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::Hypersurface: return "hypersurface";
    case ProblemKind::Abstract: return "abstract";
    case ProblemKind::Symbol: return "symbol";
  }
  return "?";
}

struct ProblemSpec {
  std::string source = "<input>";
  std::string text;
  ConfigFile config;
  ProblemKind kind = ProblemKind::Hypersurface;
  int n = 1;
  int d = 1;
  int m = 1;
  int order = 0;  // truncation order K of every jet read from the file
  int k_max = 1;
  // symbol problems
  int dim = 1;
  int nu = 1;
};

namespace detail {

/// Rethrows `e` with `where` prepended, keeping the error code.
[[noreturn]] inline void rethrow_at(const Error& e, const std::string& where) {
  std::string msg = e.what();
  const std::string prefix = std::string(errc_name(e.code())) + ": ";
  if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
  if (const auto* oe = dynamic_cast<const OrderError*>(&e)) throw OrderError(oe->needed(), oe->have(), where + ": " + msg);
  throw Error(e.code(), where + ": " + msg);
}

inline std::string at(const ProblemSpec& p, int line) { return p.source + ":" + std::to_string(line); }

inline int read_int(const ProblemSpec& p, const ConfigSection& sec, const std::string& key,
                    std::optional<int> fallback, int lo, int hi) {
  const ConfigValue* v = sec.get(key);
  if (!v) {
    if (fallback) return *fallback;
    throw Error(Errc::InvalidInput, at(p, sec.line) + ": [" + sec.name + "] needs '" + key + "'");
  }
  int out = 0;
  const char* b = v->text.data();
  const char* e = b + v->text.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || ptr != e)
    throw SyntaxError(Errc::SyntaxError, v->pos.line, v->pos.column, "'" + key + "' must be an integer");
  if (out < lo || out > hi)
    throw Error(Errc::InvalidInput, at(p, v->pos.line) + ": '" + key + "' must lie in [" + std::to_string(lo) +
                                        ", " + std::to_string(hi) + "]");
  return out;
}

}  // namespace detail

/// Checks K >= m + k_max + 1 for frame problems.
inline void validate_budget(const ProblemSpec& p) {
  if (p.kind == ProblemKind::Symbol) return;
  if (p.order < p.m + p.k_max + 1)
    throw OrderError(p.m + p.k_max + 1, p.order,
                     p.source + ": truncation order K must be at least m + k_max + 1");
}

inline ProblemSpec parse_problem(std::string text, std::string source = "<input>") {
  ProblemSpec p;
  p.source = std::move(source);
  p.text = std::move(text);
  try {
    p.config = parse_config(p.text);
  } catch (const SyntaxError& e) {
    detail::rethrow_at(e, p.source);
  }
  const ConfigSection* sec = p.config.find("problem");
  if (!sec) throw Error(Errc::InvalidInput, p.source + ": missing [problem] section");
  const ConfigValue* kind = sec->get("kind");
  if (!kind) throw Error(Errc::InvalidInput, detail::at(p, sec->line) + ": [problem] needs 'kind'");
  if (kind->text == "hypersurface")
    p.kind = ProblemKind::Hypersurface;
  else if (kind->text == "abstract")
    p.kind = ProblemKind::Abstract;
  else if (kind->text == "symbol")
    p.kind = ProblemKind::Symbol;
  else
    throw Error(Errc::InvalidInput, detail::at(p, kind->pos.line) + ": unknown kind '" + kind->text +
                                        "' (hypersurface, abstract or symbol)");
  static const std::map<ProblemKind, std::vector<std::string>> allowed = {
      {ProblemKind::Hypersurface, {"kind", "n", "m", "order", "k_max"}},
      {ProblemKind::Abstract, {"kind", "n", "d", "m", "order", "k_max"}},
      {ProblemKind::Symbol, {"kind", "dim", "nu", "order"}},
  };
  for (const auto& [key, v] : sec->values)
    if (std::ranges::find(allowed.at(p.kind), key) == allowed.at(p.kind).end())
      throw Error(Errc::InvalidInput, detail::at(p, v.pos.line) + ": unknown key '" + key + "' for kind " +
                                          std::string(kind_name(p.kind)));
  try {
    p.order = detail::read_int(p, *sec, "order", std::nullopt, 1, 64);
    if (p.kind == ProblemKind::Symbol) {
      p.dim = detail::read_int(p, *sec, "dim", std::nullopt, 1, 8);
      p.nu = detail::read_int(p, *sec, "nu", 1, 1, 16);
    } else {
      p.n = detail::read_int(p, *sec, "n", std::nullopt, 1, 7);
      p.d = p.kind == ProblemKind::Abstract ? detail::read_int(p, *sec, "d", 1, 1, 16 - 2 * p.n) : 1;
      p.m = detail::read_int(p, *sec, "m", p.kind == ProblemKind::Abstract ? std::optional<int>(0) : std::nullopt,
                             p.kind == ProblemKind::Abstract ? 0 : 1, 64);
      p.k_max = detail::read_int(p, *sec, "k_max", 1, 0, 16);
    }
  } catch (const SyntaxError& e) {
    detail::rethrow_at(e, p.source);
  }
  validate_budget(p);
  return p;
}

inline ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidInput, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str(), path);
}

/// Copy of `p` analyzed to depth k instead of the file's k_max.
inline ProblemSpec with_k_max(ProblemSpec p, int k) {
  if (k < 0) throw Error(Errc::InvalidInput, "k must be non-negative");
  p.k_max = k;
  validate_budget(p);
  return p;
}

namespace detail {

inline Jet parse_value(const ProblemSpec& p, const ConfigValue& v, const VarsPtr& vars, int order) {
  try {
    return parse_expression(v.text, vars, order, v.pos);
  } catch (const Error& e) {
    rethrow_at(e, p.source);
  }
}

/// Splits "L2.zb1" into ("L", 2, "zb1").
inline bool split_frame_key(const std::string& key, std::string& head, int& index, std::string& var) {
  const auto dot = key.find('.');
  if (dot == std::string::npos) return false;
  std::size_t k = 0;
  while (k < dot && std::isalpha(static_cast<unsigned char>(key[k]))) ++k;
  head = key.substr(0, k);
  auto [ptr, ec] = std::from_chars(key.data() + k, key.data() + dot, index);
  if (ec != std::errc{} || ptr != key.data() + dot || k == 0) return false;
  var = key.substr(dot + 1);
  return true;
}

inline CRFrame build_abstract_from(const ProblemSpec& p) {
  const ConfigSection* sec = p.config.find("frame");
  if (!sec) throw Error(Errc::InvalidInput, p.source + ": abstract problems need a [frame] section");
  auto vars = make_vars(VariableSet::cr(p.n, p.d));
  std::vector<VectorField> l(static_cast<std::size_t>(p.n), VectorField::zero(vars, p.order));
  std::vector<OneForm> theta(static_cast<std::size_t>(p.d), OneForm::zero(vars, p.order));
  std::vector<OneForm> omega(static_cast<std::size_t>(p.n), OneForm::zero(vars, p.order));
  for (const auto& [key, v] : sec->values) {
    std::string head, var;
    int index = 0;
    auto bad = [&](const std::string& what, Errc code = Errc::InvalidInput) {
      throw SyntaxError(code, v.pos.line, v.key_column, what);
    };
    try {
      if (!split_frame_key(key, head, index, var))
        bad("frame keys look like L1.zb1, theta1.s or omega1.z1; got '" + key + "'");
      auto slot = vars->find(var);
      if (!slot) bad("unknown variable '" + var + "' in key '" + key + "'", Errc::UnknownVariable);
      Jet c = parse_value(p, v, vars, p.order);
      auto pick = [&](auto& list, const char* what) -> auto& {
        if (index < 1 || index > static_cast<int>(list.size()))
          bad(std::string(what) + " index " + std::to_string(index) + " out of range 1.." + std::to_string(list.size()));
        return list[static_cast<std::size_t>(index - 1)];
      };
      if (head == "L")
        pick(l, "L")[*slot] = c;
      else if (head == "theta")
        pick(theta, "theta")[*slot] = c;
      else if (head == "omega")
        pick(omega, "omega")[*slot] = c;
      else
        bad("unknown frame object '" + head + "' (L, theta or omega)");
    } catch (const SyntaxError& e) {
      rethrow_at(e, p.source);
    }
  }
  try {
    return build_abstract_frame(p.n, p.d, std::move(l), std::move(theta), std::move(omega), p.order);
  } catch (const Error& e) {
    rethrow_at(e, at(p, sec->line));
  }
}

}  // namespace detail

inline CRFrame build_frame(const ProblemSpec& p) {
  if (p.kind == ProblemKind::Symbol) throw Error(Errc::InvalidInput, p.source + ": symbol problems have no frame");
  if (p.kind == ProblemKind::Abstract) return detail::build_abstract_from(p);
  const ConfigSection* sec = p.config.find("hypersurface");
  const ConfigValue* phi = sec ? sec->get("phi") : nullptr;
  if (!phi) throw Error(Errc::InvalidInput, p.source + ": hypersurface problems need [hypersurface] phi = ...");
  auto vars = make_vars(VariableSet::cr(p.n));
  Jet f = detail::parse_value(p, *phi, vars, p.order);
  try {
    return build_hypersurface_frame(p.n, p.m, f, p.order);
  } catch (const Error& e) {
    detail::rethrow_at(e, detail::at(p, phi->pos.line));
  }
}

/// Reads [symbol <name>]: "order" is the symbol order, p0, p1, ... the
/// homogeneous terms of degree order, order - 1, ...; rows are separated by
/// ';' and entries by ','. Entries are polynomials in x1..x<dim> and
/// xi1..xi<dim>. "exact = false" marks the listed terms as a truncated
/// expansion rather than the whole symbol.
inline ClassicalSymbol build_symbol(const ProblemSpec& p, const std::string& name) {
  if (p.kind != ProblemKind::Symbol) throw Error(Errc::InvalidInput, p.source + ": not a symbol problem");
  const ConfigSection* sec = p.config.find("symbol " + name);
  if (!sec) throw Error(Errc::InvalidInput, p.source + ": missing [symbol " + name + "] section");
  std::vector<std::string> names;
  for (int k = 1; k <= p.dim; ++k) names.push_back("x" + std::to_string(k));
  std::vector<std::string> xi_names;
  for (int k = 1; k <= p.dim; ++k) xi_names.push_back("xi" + std::to_string(k));
  SpacePtr sp = make_space(make_vars(VariableSet::real(names)), xi_names);
  std::vector<std::string> all = names;
  all.insert(all.end(), xi_names.begin(), xi_names.end());
  auto combined = make_vars(VariableSet::real(all));
  const std::size_t dim = static_cast<std::size_t>(p.dim);
  // Large enough that no xi-power is cut; x-parts are truncated to K below.
  const int parse_order = p.order + 128;

  auto to_form = [&](const Jet& f) {
    XiPoly poly;
    for (const auto& [mono, c] : f.terms()) {
      Monomial xm, xim;
      for (std::size_t k = 0; k < dim; ++k) {
        xm.set(k, mono[k]);
        xim.set(k, mono[dim + k]);
      }
      if (xm.degree() > p.order) continue;
      auto it = poly.try_emplace(xim, Jet(sp->x, p.order)).first;
      it->second.add_term(xm, c);
    }
    return RationalForm::from_poly(sp, p.order, std::move(poly));
  };

  int order = 0;
  try {
    order = detail::read_int(p, *sec, "order", std::nullopt, -64, 64);
  } catch (const SyntaxError& e) {
    detail::rethrow_at(e, p.source);
  }
  bool exact = true;
  if (const ConfigValue* ex = sec->get("exact")) {
    if (ex->text != "true" && ex->text != "false")
      throw SyntaxError(Errc::SyntaxError, ex->pos.line, ex->pos.column, "'exact' must be true or false");
    exact = ex->text == "true";
  }
  std::vector<SymbolMatrix> mats;
  for (int j = 0;; ++j) {
    const ConfigValue* v = sec->get("p" + std::to_string(j));
    if (!v) break;
    SymbolMatrix mat;
    std::size_t offset = 0;
    int line = v->pos.line, col = v->pos.column;
    for (std::size_t r = 0;; ++r) {
      const auto semi = v->text.find(';', offset);
      std::string row = v->text.substr(offset, semi == std::string::npos ? std::string::npos : semi - offset);
      std::vector<RationalForm> entries;
      std::size_t roff = 0;
      for (;;) {
        const auto comma = row.find(',', roff);
        std::string entry = row.substr(roff, comma == std::string::npos ? std::string::npos : comma - roff);
        ConfigValue cell{entry, SourcePos{line, col + static_cast<int>(offset + roff)}, v->key_column};
        entries.push_back(to_form(detail::parse_value(p, cell, combined, parse_order)));
        if (comma == std::string::npos) break;
        roff = comma + 1;
      }
      if (entries.size() != static_cast<std::size_t>(p.nu))
        throw SyntaxError(Errc::SyntaxError, line, col + static_cast<int>(offset),
                          "row " + std::to_string(r + 1) + " has " + std::to_string(entries.size()) +
                              " entries, expected nu = " + std::to_string(p.nu));
      mat.push_back(std::move(entries));
      if (semi == std::string::npos) break;
      offset = semi + 1;
    }
    if (mat.size() != static_cast<std::size_t>(p.nu))
      throw SyntaxError(Errc::SyntaxError, line, col,
                        "term p" + std::to_string(j) + " has " + std::to_string(mat.size()) +
                            " rows, expected nu = " + std::to_string(p.nu));
    mats.push_back(std::move(mat));
  }
  if (mats.empty()) throw Error(Errc::InvalidInput, detail::at(p, sec->line) + ": [symbol " + name + "] needs p0");
  const auto depth = exact ? std::nullopt : std::optional<int>(static_cast<int>(mats.size()));
  try {
    return make_symbol(order, std::move(mats), depth);
  } catch (const Error& e) {
    detail::rethrow_at(e, detail::at(p, sec->line));
  }
}

}  // namespace crmult
