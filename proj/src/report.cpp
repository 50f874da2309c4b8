#include "gradcalc/report.hpp"

#include "gradcalc/error.hpp"

namespace gradcalc {

void CheckReport::absorb(const CheckReport& o) {
  if (!o.pass) fail(o.witness.value_or(o.check + " failed"));
  for (const auto& [k, v] : o.degrees) degrees.emplace(k, v);
  probabilistic = probabilistic || o.probabilistic;
  if (o.seed && !seed) seed = o.seed;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw DomainError("empty range");
  // rejection sampling keeps the mapping exactly uniform
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do v = g_();
  while (v >= limit);
  return v % n;
}

std::vector<std::vector<Rational>> sample_points(const SamplePlan& plan, std::size_t dim) {
  if (plan.count < 1) throw DomainError("sample plan needs at least one point");
  if (plan.lo > plan.hi || (plan.skip_zero && plan.lo == 0 && plan.hi == 0))
    throw DomainError("empty sampling range");
  Rng rng(plan.seed);
  std::vector<std::vector<Rational>> pts;
  for (int i = 0; i < plan.count; ++i) {
    std::vector<Rational> p;
    for (std::size_t d = 0; d < dim; ++d) {
      long v;
      do v = rng.range(plan.lo, plan.hi);
      while (plan.skip_zero && v == 0);
      p.emplace_back(v);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

std::string render_point(const std::vector<Rational>& point, const std::vector<std::string>& names) {
  std::string s = "(";
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) s += ", ";
    if (i < names.size()) s += names[i] + "=";
    s += to_string(point[i]);
  }
  return s + ")";
}

}  // namespace gradcalc
