#pragma once

// Verdicts of structural checks and the sample plans used by the
// probabilistic ones.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gradcalc/poly.hpp"

namespace gradcalc {

struct CheckReport {
  std::string check;
  bool pass = true;
  /// Counterexample in canonical text; always present on failure.
  std::optional<std::string> witness;
  std::map<std::string, std::string> degrees;
  bool probabilistic = false;
  std::optional<std::uint64_t> seed;

  void fail(std::string why) {
    if (pass) witness = std::move(why);
    pass = false;
  }
  /// Folds another report in; the first failure keeps its witness.
  void absorb(const CheckReport& o);
};

struct SamplePlan {
  std::uint64_t seed = 42;
  int count = 8;
  int lo = -5;
  int hi = 5;
  bool skip_zero = true;
};

/// Deterministic generator: mt19937_64 with a fixed mapping to ranges, so
/// results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t next() { return g_(); }
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool coin() { return below(2) == 1; }

 private:
  std::mt19937_64 g_;
};

/// count points with coordinates drawn from [lo, hi] (minus 0 if skip_zero).
std::vector<std::vector<Rational>> sample_points(const SamplePlan& plan, std::size_t dim);

std::string render_point(const std::vector<Rational>& point, const std::vector<std::string>& names);

}  // namespace gradcalc
