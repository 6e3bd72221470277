#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "crmult/report.hpp"

namespace {

constexpr int kInputError = 2;
constexpr int kBudgetError = 3;

crmult::OutputFormat parse_format(const std::string& s) {
  return s == "json" ? crmult::OutputFormat::Json : crmult::OutputFormat::Text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplier ideals, nondegeneracy checks and symbol calculus for CR structures"};
  app.set_version_flag("--version", std::string(CRMULT_VERSION));
  app.require_subcommand(1);

  std::string file;
  std::string format = "text";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "problem file")->required();
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
  };

  auto* check = app.add_subcommand("check", "classify the structure described by a problem file");
  add_common(check);
  std::optional<int> k;
  check->add_option("--k", k, "search depth (overrides k_max from the file)");

  auto* multiplier = app.add_subcommand("multiplier", "one multiplier determinant D(alphas, r)");
  add_common(multiplier);
  std::string alphas, rows;
  multiplier->add_option("--alphas", alphas, "multi-indices, e.g. \"0,0;1,0\"")->required();
  multiplier->add_option("--r", rows, "characteristic form indices, e.g. \"1,1\"")->required();

  auto* lieder = app.add_subcommand("lieder", "iterated Lie derivative of a characteristic form");
  add_common(lieder);
  std::string alpha;
  int j = 1;
  lieder->add_option("--alpha", alpha, "multi-index, e.g. \"1,0\"")->required();
  lieder->add_option("--j", j, "characteristic form index");

  auto* symbol = app.add_subcommand("symbol", "composition or parametrix of matrix symbols");
  std::string op;
  int depth = 1;
  symbol->add_option("operation", op, "compose or parametrix")->required()->check(CLI::IsMember({"compose", "parametrix"}));
  add_common(symbol);
  symbol->add_option("--depth", depth, "number of terms")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  const auto fmt = parse_format(format);
  try {
    crmult::ProblemSpec spec = crmult::load_problem(file);
    if (*check) {
      if (k) spec = crmult::with_k_max(spec, *k);
      std::cout << crmult::emit(crmult::run(spec), fmt);
    } else if (*multiplier) {
      auto list = crmult::parse_multi_index_list(alphas, spec.n);
      std::cout << crmult::emit_multiplier(spec, list, crmult::parse_int_list(rows, "--r"), fmt);
    } else if (*lieder) {
      auto list = crmult::parse_multi_index_list(alpha, spec.n);
      if (list.size() != 1) throw crmult::Error(crmult::Errc::InvalidInput, "--alpha takes one multi-index");
      std::cout << crmult::emit_lie_derivative(spec, list.front(), j, fmt);
    } else {
      auto cmd = op == "compose" ? crmult::SymbolCommand::Compose : crmult::SymbolCommand::Parametrix;
      std::cout << crmult::emit_symbol_command(spec, cmd, depth, fmt);
    }
  } catch (const crmult::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return crmult::is_budget_error(e.code()) ? kBudgetError : kInputError;
  }
  return 0;
}
