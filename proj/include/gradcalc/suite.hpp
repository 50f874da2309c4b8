#pragma once

// Built-in theorem battery behind `gradcalc check-suite`.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gradcalc {

struct SuiteOptions {
  std::uint64_t seed = 42;
  /// Random inputs per identity for the randomized checks.
  int cases = 200;
};

struct SuiteEntry {
  std::string id;
  std::string title;
  bool pass = true;
  long cases = 0;
  std::optional<std::string> witness;

  void fail(std::string why) {
    if (pass) witness = std::move(why);
    pass = false;
  }
};

struct SuiteCheck {
  std::string id;
  std::string title;
  std::function<SuiteEntry(const SuiteOptions&)> run;
};

/// Checks in table order.
const std::vector<SuiteCheck>& suite_checks();

std::vector<SuiteEntry> run_check_suite(const SuiteOptions& options);

nlohmann::ordered_json suite_json(const std::vector<SuiteEntry>& entries, const SuiteOptions& options);
std::string suite_text(const std::vector<SuiteEntry>& entries);

}  // namespace gradcalc
