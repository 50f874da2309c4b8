// gradcalc run <file|-> [--format text|json] [--seed N] [--samples N]
// gradcalc check-suite [--seed N] [--cases N] [--format text|json]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gradcalc/dsl.hpp"
#include "gradcalc/suite.hpp"

namespace {

int run(const std::string& path, const std::string& format, const gradcalc::RunOptions& opt) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      std::cerr << "gradcalc: cannot open " << path << "\n";
      return 3;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto res = gradcalc::run_script(text, opt);
  if (format == "json") {
    std::cout << gradcalc::format_json(res, opt);
  } else {
    std::cout << gradcalc::format_text(res);
    if (res.error)
      std::cerr << path << ":" << res.error->pos.line << ":" << res.error->pos.column << ": " << res.error->code
                << ": " << res.error->message << "\n";
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact tensor calculus on graded charts"};
  app.set_version_flag("--version", GRADCALC_VERSION);
  app.require_subcommand(1);

  std::string path, format = "text";
  gradcalc::RunOptions ropt;
  auto* run_cmd = app.add_subcommand("run", "execute a script");
  run_cmd->add_option("file", path, "script file, or - for stdin")->required();
  run_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  run_cmd->add_option("--seed", ropt.seed, "seed for sampled checks");
  run_cmd->add_option("--samples", ropt.samples, "points per sampled check")->check(CLI::PositiveNumber);

  gradcalc::SuiteOptions sopt;
  std::string suite_format = "text";
  auto* suite_cmd = app.add_subcommand("check-suite", "run the built-in theorem battery");
  suite_cmd->add_option("--seed", sopt.seed);
  suite_cmd->add_option("--cases", sopt.cases, "random inputs per identity")->check(CLI::PositiveNumber);
  suite_cmd->add_option("--format", suite_format)->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*run_cmd) return run(path, format, ropt);

  auto entries = gradcalc::run_check_suite(sopt);
  if (suite_format == "json")
    std::cout << gradcalc::suite_json(entries, sopt).dump(2) << "\n";
  else
    std::cout << gradcalc::suite_text(entries);
  for (const auto& e : entries)
    if (!e.pass) return 1;
  return 0;
}
