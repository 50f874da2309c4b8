#include "gradcalc/checkers.hpp"

#include <algorithm>

#include "gradcalc/calculus.hpp"
#include "gradcalc/error.hpp"
#include "gradcalc/render.hpp"

namespace gradcalc {

namespace {

CheckReport report(std::string name) {
  CheckReport r;
  r.check = std::move(name);
  return r;
}

void require_valence(const TensorField& t, int q, int p, const char* what) {
  if (t.q() != q || t.p() != p)
    throw ValenceError(std::string(what) + " needs a (" + std::to_string(q) + "," + std::to_string(p) +
                       ") tensor, got (" + std::to_string(t.q()) + "," + std::to_string(t.p()) + ")");
}

TensorField as_bivector(const TensorField& lambda) {
  require_valence(lambda, 2, 0, "bivector check");
  if (!lambda.has_symmetry(Symmetry::antisymmetric, Symmetry::none))
    throw ValenceError("bivector is not antisymmetric");
  return lambda.with_symmetry(Symmetry::antisymmetric, Symmetry::none);
}

void expect_zero(CheckReport& r, const TensorField& t, const std::string& what) {
  if (!t.is_zero()) r.fail(what + " = " + render_tensor(t));
}

void expect_degree(CheckReport& r, const TensorField& t, int component, long want, const std::string& key) {
  auto d = degree_of_tensor(t, component);
  r.degrees[key] = render_degree(d);
  if (!d.matches(want)) r.fail("deg " + key + " = " + render_degree(d) + ", expected " + std::to_string(want));
}

CheckReport compare_square(const TensorField& n, const TensorField& target, const char* name) {
  require_valence(n, 1, 1, name);
  auto r = report(name);
  auto sq = compose_11(n, n);
  if (!(sq == target)) r.fail("N o N = " + render_tensor(sq));
  return r;
}

std::vector<Rational> evaluate_field(const TensorField& x, std::span<const Rational> point) {
  std::vector<Rational> row(x.chart().size());
  for (const auto& [idx, f] : x.components()) row[idx[0]] = evaluate(f, point);
  return row;
}

std::size_t matrix_rank(std::vector<std::vector<Rational>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::vector<Rational> as_vector(std::span<const Rational> s) { return {s.begin(), s.end()}; }

// Checks that each extra field stays in the span at every sampled point.
void membership(CheckReport& r, const Distribution& d, const std::vector<std::pair<std::string, TensorField>>& extra,
                const SamplePlan& plan) {
  r.probabilistic = true;
  r.seed = plan.seed;
  const auto& names = d.chart.names();
  std::vector<std::string> nv(names.begin(), names.end());
  for (const auto& pt : sample_points(plan, d.chart.size())) {
    const auto base = rank_at_point(d, pt);
    for (const auto& [label, x] : extra) {
      auto fields = d.generators;
      fields.push_back(x);
      if (rank_of_fields(fields, pt) > base) {
        r.fail(label + " = " + render_tensor(x) + " leaves D at " + render_point(pt, nv));
        return;
      }
    }
  }
}

bool only_base_variables(const Poly& f, const Chart& chart, int vb) {
  for (const auto& t : f.terms())
    for (const auto& fac : t.mono.factors())
      if (chart.weight(VarRef{fac.var}, vb) != 0) return false;
  return true;
}

int require_vb(const Chart& chart) {
  auto vb = chart.vb_component();
  if (!vb) throw DomainError("chart " + chart.label() + " has no vector bundle component");
  return *vb;
}

}  // namespace

CheckReport is_weighted_tensor(const TensorField& k, int component, int degree) {
  k.chart().check_component(component);
  auto r = report("weighted");
  auto grad = weight_vector_field(k.chart(), component);
  auto lk = lie_derivative(grad, k);
  r.degrees["K"] = render_degree(degree_of_tensor(k, component));
  expect_zero(r, lk + k * Rational((k.q() - 1) * degree), "L_grad K + (q-1)k K");
  return r;
}

CheckReport is_poisson(const TensorField& lambda) {
  auto l = as_bivector(lambda);
  auto r = report("poisson");
  expect_zero(r, schouten_bracket(l, l), "[L,L]");
  return r;
}

CheckReport is_weighted_poisson(const TensorField& lambda, int k, int component) {
  lambda.chart().check_component(component);
  auto r = is_poisson(lambda);
  r.check = "weighted-poisson";
  expect_degree(r, lambda, component, -k, "L");
  return r;
}

CheckReport is_nijenhuis(const TensorField& n) {
  require_valence(n, 1, 1, "nijenhuis");
  auto r = report("nijenhuis");
  expect_zero(r, nijenhuis_torsion(n), "[N,N]");
  return r;
}

CheckReport is_weighted_nijenhuis(const TensorField& n, int component) {
  n.chart().check_component(component);
  auto r = is_nijenhuis(n);
  r.check = "weighted-nijenhuis";
  expect_degree(r, n, component, 0, "N");
  return r;
}

CheckReport is_almost_complex(const TensorField& n) {
  return compare_square(n, -id_11(n.chart()), "almost-complex");
}
CheckReport is_almost_product(const TensorField& n) {
  return compare_square(n, id_11(n.chart()), "almost-product");
}
CheckReport is_almost_tangent(const TensorField& n) {
  return compare_square(n, TensorField(n.chart(), 1, 1), "almost-tangent");
}

CheckReport is_weighted_pn(const TensorField& lambda, const TensorField& n, int k, int component) {
  auto l = as_bivector(lambda);
  require_valence(n, 1, 1, "weighted-pn");
  require_same_chart(l, n);
  auto r = report("weighted-pn");
  r.absorb(is_weighted_poisson(l, k, component));
  r.absorb(is_weighted_nijenhuis(n, component));
  auto nl = n_lambda(n, l);
  r.degrees["NL"] = render_degree(degree_of_tensor(nl, component));
  expect_zero(r, nl + transpose(nl), "NL + (NL)^t");
  auto c = concomitant(l, n);
  r.degrees["C"] = render_degree(degree_of_tensor(c, component));
  expect_zero(r, c, "C(L,N)");
  return r;
}

BundleMatrix sharp_map(const TensorField& lambda) {
  require_valence(lambda, 2, 0, "sharp");
  const auto n = lambda.chart().size();
  BundleMatrix m{lambda.chart(), std::vector<std::vector<Poly>>(n, std::vector<Poly>(n))};
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) m.entries[i][j] = lambda.component({i, j});
  return m;
}

BundleMatrix flat_map(const TensorField& omega) {
  require_valence(omega, 0, 2, "flat");
  const auto n = omega.chart().size();
  BundleMatrix m{omega.chart(), std::vector<std::vector<Poly>>(n, std::vector<Poly>(n))};
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) m.entries[i][j] = omega.component({i, j});
  return m;
}

CheckReport sharp_degree_report(const TensorField& lambda, int k, int component) {
  auto m = sharp_map(lambda);
  const auto& base = lambda.chart();
  auto star = phase_shifted_cotangent_chart(base, k, component);
  const auto n = base.size();
  auto r = report("sharp-degree");
  for (std::uint32_t j = 0; j < n; ++j) {
    Poly entry = star.constant(0);
    for (std::uint32_t l = 0; l < n; ++l)
      entry += m.entries[l][j].rebind(star.token()) * star.var(VarRef{static_cast<std::uint32_t>(n + l)});
    auto d = degree_of_function(entry, star, component);
    const auto& name = base.name(VarRef{j});
    r.degrees[name] = render_degree(d);
    if (!d.matches(base.weight(VarRef{j}, component)))
      r.fail("xdot of " + name + " maps to " + render_poly(entry, star) + " of degree " + render_degree(d));
  }
  return r;
}

TensorField inverse_bivector(const TensorField& omega) {
  auto m = flat_map(omega);
  const auto n = m.entries.size();
  // [W | I] -> [I | W^-1]
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!m.entries[i][j].is_constant()) throw DomainError("2-form has non-constant components");
      a[i][j] = m.entries[i][j].constant_term();
    }
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) throw DomainError("2-form is degenerate");
    std::swap(a[piv], a[c]);
    Rational inv = 1 / a[c][c];
    for (auto& v : a[c]) v *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  TensorField out(omega.chart(), 2, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      if (a[i][n + j] != 0) out.add({i, j}, omega.chart().constant(a[i][n + j]));
  if (out.has_symmetry(Symmetry::antisymmetric, Symmetry::none))
    return out.with_symmetry(Symmetry::antisymmetric, Symmetry::none);
  return out;
}

std::size_t rank_of_fields(const std::vector<TensorField>& fields, std::span<const Rational> point) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& x : fields) {
    require_valence(x, 1, 0, "rank");
    if (point.size() != x.chart().size())
      throw DomainError("point has " + std::to_string(point.size()) + " coordinates, chart has " +
                        std::to_string(x.chart().size()));
    rows.push_back(evaluate_field(x, point));
  }
  return matrix_rank(std::move(rows));
}

std::size_t rank_at_point(const Distribution& d, std::span<const Rational> point) {
  return rank_of_fields(d.generators, point);
}

CheckReport is_weighted_distribution(const Distribution& d, int component, const SamplePlan& plan) {
  d.chart.check_component(component);
  auto r = report("weighted-distribution");
  auto grad = weight_vector_field(d.chart, component);
  std::vector<std::pair<std::string, TensorField>> extra;
  for (std::size_t j = 0; j < d.generators.size(); ++j)
    extra.emplace_back("L_grad X" + std::to_string(j + 1), lie_bracket(grad, d.generators[j]));
  membership(r, d, extra, plan);
  return r;
}

CheckReport is_involutive(const Distribution& d, const SamplePlan& plan) {
  auto r = report("involutive");
  std::vector<std::pair<std::string, TensorField>> extra;
  for (std::size_t i = 0; i < d.generators.size(); ++i)
    for (std::size_t j = i + 1; j < d.generators.size(); ++j)
      extra.emplace_back("[X" + std::to_string(i + 1) + ",X" + std::to_string(j + 1) + "]",
                         lie_bracket(d.generators[i], d.generators[j]));
  membership(r, d, extra, plan);
  return r;
}

CheckReport is_weighted_contact(const TensorField& alpha, int k, int component) {
  require_valence(alpha, 0, 1, "contact");
  const auto dim = alpha.chart().size();
  if (dim % 2 == 0) throw DomainError("contact forms need an odd dimensional chart, got " + std::to_string(dim));
  alpha.chart().check_component(component);
  auto r = report("weighted-contact");
  auto a = alpha.with_symmetry(Symmetry::none, Symmetry::antisymmetric);
  expect_degree(r, a, component, k, "alpha");
  auto da = exterior_derivative(a);
  auto top = a;
  for (std::size_t i = 0; i < (dim - 1) / 2; ++i) top = wedge(top, da);
  if (top.is_zero()) r.fail("alpha ^ (d alpha)^" + std::to_string((dim - 1) / 2) + " = 0");
  return r;
}

Degree section_degree(const Chart& grl, const std::map<VarRef, Poly>& components, int graded_component) {
  const int vb = require_vb(grl);
  grl.check_component(graded_component);
  Degree lambda = Degree::any();
  int k = 0;
  for (const auto& [v, f] : components) {
    grl.check_var(v);
    if (grl.weight(v, vb) != 1) throw DomainError(grl.name(v) + " is not a fibre variable");
    if (!only_base_variables(f, grl, vb))
      throw DomainError("component for " + grl.name(v) + " depends on fibre variables");
    const int s = grl.weight(v, graded_component);
    k = std::max(k, s);
    auto d = degree_of_function(f, grl, graded_component);
    if (d.is_any()) continue;
    lambda = lambda.merge(d.is_homogeneous() ? Degree::of(d.value() - s) : d);
  }
  // second opinion: the linear function on the dual
  auto dual = shifted_dual_grl_chart(grl, k, graded_component);
  Poly iota = dual.constant(0);
  for (const auto& [v, f] : components) iota += f.rebind(dual.token()) * dual.var(v);
  auto d = degree_of_function(iota, dual, graded_component);
  Degree via = d.is_homogeneous() && !d.is_any() ? Degree::of(d.value() - k) : d;
  if (!(via == lambda)) throw Error("section degree paths disagree: " + lambda.to_string() + " vs " + via.to_string());
  return lambda;
}

std::vector<VarRef> fibre_variables(const Chart& chart) {
  const int vb = require_vb(chart);
  std::vector<VarRef> out;
  for (std::uint32_t i = 0; i < chart.size(); ++i)
    if (chart.weight(VarRef{i}, vb) == 1) out.push_back(VarRef{i});
  return out;
}

Poly linear_function(const Chart& dual, const Section& x) {
  const int vb = require_vb(dual);
  auto fib = fibre_variables(dual);
  if (x.size() != fib.size())
    throw DomainError("section has " + std::to_string(x.size()) + " components, bundle rank is " +
                      std::to_string(fib.size()));
  Poly out = dual.constant(0);
  for (std::size_t a = 0; a < fib.size(); ++a) {
    Poly c = x[a].rebind(dual.token());
    if (!only_base_variables(c, dual, vb)) throw DomainError("section components must not depend on fibre variables");
    out += c * dual.var(fib[a]);
  }
  return out;
}

Section algebroid_bracket(const TensorField& lambda, const Section& x, const Section& y) {
  auto l = as_bivector(lambda);
  const auto& chart = l.chart();
  const int vb = require_vb(chart);
  if (!degree_of_tensor(l, vb).matches(-1)) throw DomainError("bivector is not linear in the fibre variables");
  Poly f = linear_function(chart, x), g = linear_function(chart, y);
  Poly h = chart.constant(0);
  l.for_each_expanded([&](const Index& idx, const Poly& c) {
    h += c * partial_derivative(f, VarRef{idx[0]}) * partial_derivative(g, VarRef{idx[1]});
  });
  auto fib = fibre_variables(chart);
  Section out(fib.size(), chart.constant(0));
  for (const auto& t : h.terms()) {
    std::optional<std::size_t> slot;
    for (const auto& fac : t.mono.factors()) {
      if (chart.weight(VarRef{fac.var}, vb) == 0) continue;
      if (slot || fac.exp != 1) throw DomainError("bracket is not linear; the bivector is malformed");
      slot = std::find(fib.begin(), fib.end(), VarRef{fac.var}) - fib.begin();
    }
    if (!slot) throw DomainError("bracket is not linear; the bivector is malformed");
    out[*slot] += Poly::monomial(chart.token(), t.mono.without(fib[*slot]), t.coef);
  }
  return out;
}

}  // namespace gradcalc
