#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "crmult/division.hpp"
#include "crmult/multiplier.hpp"
#include "crmult/problem.hpp"

#ifndef CRMULT_VERSION
#define CRMULT_VERSION "0.0.0"
#endif

namespace crmult {

inline constexpr int kReportSchemaVersion = 1;

enum class OutputFormat { Text, Json };

using Json = nlohmann::ordered_json;

inline std::string fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Provenance {
  std::string tool_version = CRMULT_VERSION;
  int schema_version = kReportSchemaVersion;
  std::string input_hash;  // FNV-1a 64 of the problem file
  int order = 0;
  int k_max = 0;
};

inline Provenance provenance_of(const ProblemSpec& p) {
  return {CRMULT_VERSION, kReportSchemaVersion, fnv1a64(p.text), p.order, p.k_max};
}

struct Report {
  Provenance provenance;
  ProblemKind kind = ProblemKind::Hypersurface;
  int n = 1, d = 1, m = 1;
  int frame_order = 0;
  std::optional<int> integrability_verified_order;
  std::vector<std::string> warnings;
  MultiplierReport result;
};

inline Report run(const ProblemSpec& spec) {
  validate_budget(spec);
  CRFrame frame = build_frame(spec);
  ExpansionTable table = build_expansion_table(frame, spec.k_max);
  Report r;
  r.provenance = provenance_of(spec);
  r.kind = spec.kind;
  r.n = spec.n;
  r.d = spec.d;
  r.m = spec.m;
  r.frame_order = frame.order;
  r.integrability_verified_order = frame.integrability_verified_order;
  r.warnings = frame.warnings;
  r.result = analyze(table);
  return r;
}

namespace detail {

inline Json key_json(const MultiplierKey& k) {
  Json alphas = Json::array();
  for (const auto& a : k.alphas) alphas.push_back(a.entries);
  return Json{{"alphas", alphas}, {"r", k.r}};
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json header_json(const Provenance& p) {
  return Json{{"schema_version", p.schema_version},
              {"tool", {{"name", "crmult"}, {"version", p.tool_version}}},
              {"input_hash", "fnv1a64:" + p.input_hash},
              {"K", p.order},
              {"k_max", p.k_max}};
}

inline std::string header_text(const Provenance& p) {
  return "crmult " + p.tool_version + " (report schema " + std::to_string(p.schema_version) + ")\n" +
         "input: fnv1a64:" + p.input_hash + ", K = " + std::to_string(p.order) + ", k_max = " +
         std::to_string(p.k_max) + "\n";
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

inline Json to_json(const Report& r) {
  Json j = detail::header_json(r.provenance);
  j["problem"] = {{"kind", kind_name(r.kind)}, {"n", r.n}, {"d", r.d}, {"m", r.m}};
  j["frame"] = {{"order", r.frame_order},
                {"integrability_verified_order", detail::optional_json(r.integrability_verified_order)},
                {"warnings", r.warnings}};
  Json dets = Json::array();
  for (const auto& [key, det] : r.result.determinants) {
    Json e = detail::key_json(key);
    e["value"] = det.to_string();
    dets.push_back(std::move(e));
  }
  j["determinants"] = std::move(dets);
  j["finite_nondeg_order"] = detail::optional_json(r.result.finite_nondeg_order);
  j["finite_nondeg_witness"] =
      r.result.finite_nondeg_witness ? detail::key_json(*r.result.finite_nondeg_witness) : Json(nullptr);
  j["weak_nondeg_order"] = detail::optional_json(r.result.weak_nondeg_order);
  if (r.result.cr_regular) {
    const auto& c = *r.result.cr_regular;
    j["cr_regular"] = {{"ell", c.ell},
                       {"witness", detail::key_json(c.witness)},
                       {"psi0", c.psi0.to_string()},
                       {"psi", c.psi.to_string()}};
  } else {
    j["cr_regular"] = nullptr;
  }
  j["searched_k"] = r.result.searched_k;
  return j;
}

inline std::string emit(const Report& r, OutputFormat format) {
  if (format == OutputFormat::Json) return detail::dump(to_json(r));
  const auto& res = r.result;
  std::string out = detail::header_text(r.provenance);
  out += "problem: " + std::string(kind_name(r.kind)) + ", n = " + std::to_string(r.n) + ", d = " +
         std::to_string(r.d) + ", m = " + std::to_string(r.m) + "\n";
  out += "frame: order " + std::to_string(r.frame_order) + ", integrability ";
  out += r.integrability_verified_order
             ? "verified through order " + std::to_string(*r.integrability_verified_order) + "\n"
             : std::string("NOT verified\n");
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  std::size_t nonzero = 0;
  for (const auto& [key, det] : res.determinants) nonzero += det.is_zero() ? 0 : 1;
  out += "multipliers (|alpha| <= " + std::to_string(res.searched_k) + "): " +
         std::to_string(res.determinants.size()) + " computed, " + std::to_string(nonzero) + " nonzero\n";
  for (const auto& [key, det] : res.determinants)
    if (!det.is_zero()) out += "  D(" + key.to_string() + ") = " + det.to_string() + "\n";
  const std::string searched = " (searched k <= " + std::to_string(res.searched_k) + ")";
  out += "finitely nondegenerate: ";
  out += res.finite_nondeg_order ? "order " + std::to_string(*res.finite_nondeg_order) + ", witness " +
                                       res.finite_nondeg_witness->to_string()
                                 : "absent" + searched;
  out += "\nweakly nondegenerate: ";
  if (r.kind != ProblemKind::Hypersurface)
    out += "not applicable (no defining function)";
  else
    out += res.weak_nondeg_order ? "order " + std::to_string(*res.weak_nondeg_order) : "absent" + searched;
  out += "\nCR-regular: ";
  if (res.cr_regular)
    out += "ell = " + std::to_string(res.cr_regular->ell) + ", psi(0) = " + res.cr_regular->psi0.to_string() +
           ", witness " + res.cr_regular->witness.to_string();
  else
    out += "absent" + searched;
  return out + "\n";
}

/// Comma-separated integers, e.g. "1,0".
inline std::vector<int> parse_int_list(std::string_view s, const std::string& what) {
  std::vector<int> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = s.find(',', start);
    std::string_view piece = detail::trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    int v = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (piece.empty() || ec != std::errc{} || ptr != piece.data() + piece.size())
      throw Error(Errc::InvalidInput, what + ": expected integers separated by ',', got '" + std::string(s) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Multi-indices separated by ';', entries by ',': "0,0;1,0".
inline std::vector<MultiIndex> parse_multi_index_list(std::string_view s, int n) {
  std::vector<MultiIndex> out;
  std::size_t start = 0;
  for (;;) {
    auto semi = s.find(';', start);
    auto e = parse_int_list(s.substr(start, semi == std::string_view::npos ? s.npos : semi - start), "multi-index");
    if (static_cast<int>(e.size()) != n)
      throw Error(Errc::SizeMismatch, "multi-index needs " + std::to_string(n) + " entries");
    for (int v : e)
      if (v < 0) throw Error(Errc::InvalidInput, "multi-index entries must be non-negative");
    out.emplace_back(std::move(e));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return out;
}

/// One multiplier D(alphas, r) with its s-factorization when there is an
/// s-coordinate.
inline std::string emit_multiplier(const ProblemSpec& spec, const std::vector<MultiIndex>& alphas,
                                   const std::vector<int>& r, OutputFormat format) {
  int k = 0;
  for (const auto& a : alphas) k = std::max(k, a.order());
  CRFrame frame = build_frame(spec);
  ExpansionTable table = build_expansion_table(frame, k);
  Jet det = multiplier_determinant(table, alphas, r);
  Provenance prov = provenance_of(spec);
  prov.k_max = k;
  MultiplierKey key{alphas, r};
  std::optional<SFactorization> fac;
  if (frame.vars->has_s() && !det.is_zero()) fac = s_factor(det);
  if (format == OutputFormat::Json) {
    Json j = detail::header_json(prov);
    j["multiplier"] = detail::key_json(key);
    j["value"] = det.to_string();
    if (fac)
      j["s_factorization"] = {{"k", fac->k},
                              {"unit", fac->unit.to_string()},
                              {"unit_at_origin", fac->unit_at_origin},
                              {"value_at_origin", fac->unit.eval0().to_string()}};
    else
      j["s_factorization"] = nullptr;
    return detail::dump(j);
  }
  std::string out = detail::header_text(prov) + "D(" + key.to_string() + ") = " + det.to_string() + "\n";
  if (fac)
    out += "= s^" + std::to_string(fac->k) + " * (" + fac->unit.to_string() + ")" +
           (fac->unit_at_origin ? ", unit with value " + fac->unit.eval0().to_string() + " at 0"
                                : ", cofactor vanishes at 0") +
           "\n";
  return out;
}

/// Row L^alpha theta^j of the expansion table with its coframe coefficients.
inline std::string emit_lie_derivative(const ProblemSpec& spec, const MultiIndex& alpha, int j,
                                       OutputFormat format) {
  CRFrame frame = build_frame(spec);
  if (j < 1 || j > frame.d)
    throw Error(Errc::OutOfTable, "characteristic form index " + std::to_string(j) + " out of range 1.." +
                                      std::to_string(frame.d));
  ExpansionTable table = build_expansion_table(frame, alpha.order());
  const ExpansionRow& row = table.row(alpha, j);
  Provenance prov = provenance_of(spec);
  prov.k_max = alpha.order();
  const VariableSet& v = *frame.vars;
  if (format == OutputFormat::Json) {
    Json j2 = detail::header_json(prov);
    j2["alpha"] = alpha.entries;
    j2["j"] = j;
    Json form = Json::object();
    for (std::size_t a = 0; a < v.size(); ++a) form[v.name(a)] = row.form[a].to_string();
    j2["form"] = std::move(form);
    Json coeffs = Json::array();
    for (const auto& c : row.coeffs) coeffs.push_back(c.to_string());
    j2["coframe_coefficients"] = std::move(coeffs);
    return detail::dump(j2);
  }
  std::string out = detail::header_text(prov);
  out += "L^" + alpha.to_string() + " theta" + std::to_string(j) + ":\n";
  for (std::size_t a = 0; a < v.size(); ++a)
    if (!row.form[a].is_zero()) out += "  d" + v.name(a) + ": " + row.form[a].to_string() + "\n";
  auto range = [](const std::string& name, int count) {
    return count == 1 ? name + "1" : name + "1.." + name + std::to_string(count);
  };
  out += "in the coframe (" + range("theta", frame.d) + ", " + range("omega", frame.n) + "):\n";
  for (std::size_t l = 0; l < row.coeffs.size(); ++l) out += "  [" + std::to_string(l + 1) + "] " + row.coeffs[l].to_string() + "\n";
  return out;
}

inline Json symbol_json(const ClassicalSymbol& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms) {
    Json rows = Json::array();
    for (const auto& row : t.entries) {
      Json r = Json::array();
      for (const auto& e : row) r.push_back(e.to_string());
      rows.push_back(std::move(r));
    }
    terms.push_back(Json{{"degree", t.degree}, {"entries", std::move(rows)}});
  }
  return Json{{"order", p.order}, {"nu", p.nu}, {"depth", detail::optional_json(p.depth)}, {"terms", std::move(terms)}};
}

inline std::string symbol_text(const ClassicalSymbol& p) {
  std::string out = "symbol of order " + std::to_string(p.order) + ", " + std::to_string(p.nu) + "x" +
                    std::to_string(p.nu) + ", " + (p.exact() ? "exact" : "depth " + std::to_string(*p.depth)) + "\n";
  for (std::size_t j = 0; j < p.terms.size(); ++j) {
    out += "  term " + std::to_string(j) + " (degree " + std::to_string(p.terms[j].degree) + "):\n";
    for (const auto& row : p.terms[j].entries) {
      out += "    [";
      for (std::size_t c = 0; c < row.size(); ++c) out += (c ? ", " : "") + row[c].to_string();
      out += "]\n";
    }
  }
  return out;
}

enum class SymbolCommand { Compose, Parametrix };

/// compose: a # b from [symbol a] and [symbol b]; parametrix: left
/// parametrix of [symbol a]. Both to `depth` terms.
inline std::string emit_symbol_command(const ProblemSpec& spec, SymbolCommand cmd, int depth, OutputFormat format) {
  if (depth < 1) throw Error(Errc::InvalidInput, "depth must be at least 1");
  ClassicalSymbol a = build_symbol(spec, "a");
  ClassicalSymbol out = cmd == SymbolCommand::Compose ? compose(a, build_symbol(spec, "b"), depth) : parametrix(a, depth);
  Provenance prov = provenance_of(spec);
  prov.k_max = 0;
  const char* name = cmd == SymbolCommand::Compose ? "compose" : "parametrix";
  if (format == OutputFormat::Json) {
    Json j = detail::header_json(prov);
    j.erase("k_max");
    j["operation"] = name;
    j["depth"] = depth;
    j["result"] = symbol_json(out);
    return detail::dump(j);
  }
  return "crmult " + prov.tool_version + " (report schema " + std::to_string(prov.schema_version) + ")\ninput: fnv1a64:" +
         prov.input_hash + ", K = " + std::to_string(prov.order) + "\n" + name + " to depth " + std::to_string(depth) +
         ": " + symbol_text(out);
}

}  // namespace crmult
