#include "gradcalc/random.hpp"

#include "gradcalc/error.hpp"

namespace gradcalc {

namespace {

// All monomials in the chart's variables of total degree <= max_degree.
void enumerate_monomials(std::size_t nvars, int max_degree, const std::function<void(const Monomial&)>& fn) {
  Monomial::Storage cur;
  std::function<void(std::uint32_t, int)> rec = [&](std::uint32_t from, int left) {
    fn(Monomial::from_sorted(cur));
    if (left == 0) return;
    for (std::uint32_t v = from; v < nvars; ++v) {
      bool bumped = !cur.empty() && cur.back().var == v;
      if (bumped)
        ++cur.back().exp;
      else
        cur.push_back({v, 1});
      rec(v, left - 1);
      if (bumped)
        --cur.back().exp;
      else
        cur.pop_back();
    }
  };
  rec(0, max_degree);
}

}  // namespace

Rational Sampler::coefficient(bool allow_fractions) {
  long num;
  do num = rng_.range(-4, 4);
  while (num == 0);
  long den = 1;
  if (allow_fractions && rng_.below(4) == 0) den = rng_.range(2, 3);
  return make_rational(num, den);
}

Poly Sampler::poly(const Chart& chart, int max_degree, int max_terms, bool nonzero) {
  const auto tok = chart.token();
  do {
    std::vector<Poly::Term> terms;
    int n = static_cast<int>(rng_.range(nonzero ? 1 : 0, max_terms));
    for (int t = 0; t < n; ++t) {
      int deg = static_cast<int>(rng_.range(0, max_degree));
      Monomial m;
      for (int e = 0; e < deg && chart.size() > 0; ++e)
        m = m * Monomial::variable(VarRef{static_cast<std::uint32_t>(rng_.below(chart.size()))});
      terms.push_back({m, coefficient()});
    }
    Poly f = Poly::from_terms(tok, std::move(terms));
    if (!nonzero || !f.is_zero()) return f;
  } while (true);
}

Poly Sampler::homogeneous_poly(const Chart& chart, int component, long w, int max_degree, int max_terms) {
  chart.check_component(component);
  auto weights = chart.weights_in(component);
  std::vector<Monomial> pool;
  enumerate_monomials(chart.size(), max_degree, [&](const Monomial& m) {
    if (weight_of_monomial(m, weights) == w) pool.push_back(m);
  });
  if (pool.empty()) return chart.constant(0);
  std::vector<Poly::Term> terms;
  int n = static_cast<int>(rng_.range(1, max_terms));
  for (int t = 0; t < n; ++t) terms.push_back({pool[rng_.below(pool.size())], coefficient()});
  return Poly::from_terms(chart.token(), std::move(terms));
}

Index Sampler::random_index(const Chart& chart, int slots) {
  Index idx(slots);
  for (auto& i : idx) i = static_cast<std::uint32_t>(rng_.below(chart.size()));
  return idx;
}

TensorField Sampler::tensor(const Chart& chart, int q, int p, Symmetry contra, Symmetry cov, int max_degree,
                            int density) {
  TensorField out(chart, q, p, contra, cov);
  if (q + p == 0) return TensorField::scalar(chart, poly(chart, max_degree, density));
  for (int e = 0; e < density; ++e)
    out.add(random_index(chart, q + p), poly(chart, max_degree, 2, true));
  return out;
}

TensorField Sampler::homogeneous_tensor(const Chart& chart, int component, int q, int p, Symmetry contra,
                                        Symmetry cov, long w, int max_degree, int density) {
  if (q + p == 0) return TensorField::scalar(chart, homogeneous_poly(chart, component, w, max_degree, density));
  TensorField out(chart, q, p, contra, cov);
  for (int e = 0; e < density; ++e) {
    Index idx = random_index(chart, q + p);
    long need = w;
    for (int s = 0; s < q + p; ++s) need += (s < q ? 1 : -1) * chart.weight(VarRef{idx[s]}, component);
    out.add(std::move(idx), homogeneous_poly(chart, component, need, max_degree, 2));
  }
  return out;
}

}  // namespace gradcalc
