#pragma once

// The gradcalc scripting language.
//
//   chart M { x:0, y:0 }
//   vf X on M = x * d/dy
//   lift X lambda=1 r=1
//
// Statements end at a newline or ';' (not inside braces); '#' starts a
// comment.  Unicode operators are accepted as aliases on input.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gradcalc/error.hpp"
#include "gradcalc/report.hpp"
#include "gradcalc/tensor.hpp"

namespace gradcalc {

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// Diagnostic codes: E_LEX, E_SYNTAX, E_NAME (exit 2), E_SEMANTIC (exit 3).
struct Diagnostic {
  std::string code;
  std::string message;
  SourcePos pos;
};

class ScriptError : public Error {
 public:
  explicit ScriptError(Diagnostic d) : Error(d.message), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diag_; }
  int exit_code() const { return diag_.code == "E_SEMANTIC" ? 3 : 2; }

 private:
  Diagnostic diag_;
};

struct Expr {
  enum class Kind { number, ident, vector_basis, add, sub, mul, div, pow, neg, tensor, wedge };
  Kind kind = Kind::number;
  Rational value;    // number
  std::string name;  // ident, vector_basis (variable name)
  std::vector<Expr> args;
  SourcePos pos;
};

struct ChartDecl {
  std::string name;
  std::vector<std::pair<std::string, std::vector<int>>> vars;
  std::optional<int> vb;
};

struct TensorDecl {
  std::string kind;  // fn, vf, form, tensor
  int q = 0;
  int p = 0;
  Symmetry symmetry = Symmetry::none;
  std::string name;
  std::string chart;
  Expr value;
};

struct ConnectionDecl {
  struct Entry {
    std::string upper, lower1, lower2;
    Expr value;
    SourcePos pos;
  };
  std::string name;
  std::string chart;
  std::vector<Entry> entries;
};

struct Command {
  std::string verb;
  std::vector<std::string> args;
  std::vector<std::pair<std::string, long>> options;  // key=INT in order
  std::vector<std::pair<std::string, Rational>> point;  // at (x=.., y=..)
  bool has_point = false;
  std::optional<std::string> alias;  // as NAME
};

struct Statement {
  enum class Kind { chart, tensor, connection, command };
  Kind kind = Kind::command;
  SourcePos pos;
  std::string text;  // source of the statement, trimmed
  ChartDecl chart;
  TensorDecl tensor;
  ConnectionDecl connection;
  Command command;
};

struct Script {
  std::vector<Statement> statements;
};

/// Throws ScriptError with E_LEX or E_SYNTAX.
Script parse_script(std::string_view text);

/// Parses a single expression.  Throws ScriptError.
Expr parse_expression(std::string_view text);

/// Parses and evaluates a tensor expression on a chart.  Throws ScriptError.
TensorField parse_tensor(std::string_view text, const Chart& chart);

/// ASCII spelling of the Unicode aliases.
std::string normalize_unicode(std::string_view text);

struct RunOptions {
  std::uint64_t seed = 42;
  int samples = 8;
};

struct OutputRecord {
  std::string command;
  int line = 0;
  std::vector<std::string> text;
  nlohmann::ordered_json result;
  std::optional<CheckReport> report;
};

struct RunResult {
  int exit_code = 0;
  std::vector<OutputRecord> records;
  std::optional<Diagnostic> error;
};

RunResult execute(const Script& script, const RunOptions& options = {});
/// parse_script + execute; parse errors end up in RunResult::error.
RunResult run_script(std::string_view text, const RunOptions& options = {});

std::string format_text(const RunResult& r);
std::string format_json(const RunResult& r, const RunOptions& options);

nlohmann::ordered_json report_json(const CheckReport& r);

}  // namespace gradcalc
