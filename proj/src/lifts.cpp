#include "gradcalc/lifts.hpp"

#include "gradcalc/calculus.hpp"
#include "gradcalc/error.hpp"

namespace gradcalc {

namespace {

Chart make_scratch(const Chart& prolonged) {
  std::vector<std::string> names(prolonged.names().begin(), prolonged.names().end());
  std::string t = "t__";
  while (prolonged.find(t)) t += "_";
  names.push_back(t);
  std::vector<std::vector<int>> w(names.size(), std::vector<int>{0});
  return make_chart(std::move(names), std::move(w), {}, "jet");
}

}  // namespace

LiftContext::LiftContext(Chart base, int r) : base_(std::move(base)), r_(r) {
  if (r < 0) throw DomainError("lift order must be non-negative");
  prolonged_ = r == 0 ? base_ : prolong_chart(base_, r);
  scratch_ = make_scratch(prolonged_);
}

LiftContext::LiftContext(Chart base, Chart prolonged) : base_(std::move(base)), prolonged_(std::move(prolonged)) {
  const Chart* from = prolonged_.prolonged_from();
  if (!from || !(*from == base_)) throw DomainError("chart is not a prolongation of the base chart");
  r_ = prolonged_.prolongation_order();
  scratch_ = make_scratch(prolonged_);
}

VarRef LiftContext::lifted(VarRef v, int mu) const {
  base_.check_var(v);
  if (mu < 0 || mu > r_) throw DomainError("lift index out of range");
  if (r_ == 0) return v;
  return prolonged_.prolonged_var(v, mu);
}

int LiftContext::canonical_component() const {
  if (r_ == 0) throw DomainError("no canonical grading for r = 0");
  return prolonged_.grading_count() - 1;
}

std::vector<Poly> LiftContext::lift_all(const Poly& f) const {
  std::vector<Poly> out(r_ + 1, prolonged_.constant(0));
  if (f.is_zero()) return out;
  if (f.is_constant()) {
    out[0] = prolonged_.constant(f.constant_term());
    return out;
  }
  if (!(f.token() == base_.token())) throw ChartMismatch("function does not live on the lift base chart");
  if (r_ == 0) {
    out[0] = f;
    return out;
  }
  const auto st = scratch_.token();
  const VarRef t{static_cast<std::uint32_t>(prolonged_.size())};
  std::map<VarRef, Poly> jet;
  for (std::uint32_t i = 0; i < base_.size(); ++i) {
    VarRef v{i};
    if (f.span_end() <= i) break;
    Poly img(0, st);
    for (int mu = 0; mu <= r_; ++mu)
      img += Poly::monomial(st, Monomial::variable(lifted(v, mu)) * Monomial::variable(t, mu), Rational(1));
    jet.emplace(v, std::move(img));
  }
  // substitute() wants every variable of f assigned; unused ones are harmless.
  Poly g = substitute(f, jet);
  std::vector<std::vector<Poly::Term>> parts(r_ + 1);
  for (const auto& term : g.terms()) {
    auto e = term.mono.exponent(t);
    if (e > static_cast<std::uint32_t>(r_)) continue;
    parts[e].push_back({term.mono.without(t), term.coef});
  }
  for (int l = 0; l <= r_; ++l) out[l] = Poly::from_terms(prolonged_.token(), std::move(parts[l]));
  return out;
}

Poly lift_function(const Poly& f, int lambda, const LiftContext& ctx) {
  if (lambda < 0 || lambda > ctx.r()) return ctx.prolonged().constant(0);
  return ctx.lift_all(f)[lambda];
}

TensorField lift_tensor(const TensorField& k, int lambda, const LiftContext& ctx) {
  if (!(k.chart() == ctx.base())) throw ChartMismatch("tensor does not live on the lift base chart");
  const int q = k.q(), p = k.p(), n = q + p, r = ctx.r();
  TensorField out(ctx.prolonged(), q, p, k.contra_symmetry(), k.cov_symmetry());
  if (lambda < 0 || lambda > r) return out;

  std::vector<int> mu(n, 0);
  for (const auto& [stored, f] : k.components()) {
    auto lifts = ctx.lift_all(f);
    k.for_each_expansion_of(stored, [&](const Index& idx, int sign) {
      // enumerate (mu_1..mu_n) in [0,r]^n with the coefficient taking
      // lambda - sum(mu) in [0,r]
      std::fill(mu.begin(), mu.end(), 0);
      while (true) {
        int s = 0;
        for (int m : mu) s += m;
        int c = lambda - s;
        if (c >= 0 && c <= r && !lifts[c].is_zero()) {
          Index j(n);
          for (int i = 0; i < n; ++i) {
            VarRef v{idx[i]};
            j[i] = ctx.lifted(v, i < q ? r - mu[i] : mu[i]).index;
          }
          out.add_full(j, sign > 0 ? lifts[c] : -lifts[c]);
        }
        int pos = 0;
        while (pos < n && ++mu[pos] > r) mu[pos++] = 0;
        if (pos == n) break;
      }
    });
  }
  return out;
}

TensorField lift_one_form(const TensorField& w, int lambda, const LiftContext& ctx) {
  if (w.q() != 0 || w.p() != 1) throw ValenceError("expected a one-form");
  return lift_tensor(w, lambda, ctx);
}

TensorField lift_vector_field(const TensorField& x, int lambda, const LiftContext& ctx) {
  if (x.q() != 1 || x.p() != 0) throw ValenceError("expected a vector field");
  return lift_tensor(x, lambda, ctx);
}

TensorField lift_weight_vector_field(const LiftContext& ctx, int component) {
  const auto& base = ctx.base();
  auto w = base.weights_in(component);
  TensorField out(ctx.prolonged(), 1, 0);
  for (int mu = 0; mu <= ctx.r(); ++mu)
    for (std::uint32_t i = 0; i < base.size(); ++i) {
      if (w[i] == 0) continue;
      VarRef v = ctx.lifted(VarRef{i}, mu);
      out.add({v.index}, ctx.prolonged().var(v) * Rational(w[i]));
    }
  return out;
}

// ---------------------------------------------------------------- distributions

Distribution make_distribution(std::vector<TensorField> generators) {
  if (generators.empty()) throw DomainError("distribution needs at least one generator");
  for (const auto& g : generators) {
    if (g.q() != 1 || g.p() != 0) throw ValenceError("distribution generators must be vector fields");
    require_same_chart(g, generators.front());
  }
  Chart c = generators.front().chart();
  return Distribution{c, std::move(generators)};
}

Distribution lift_distribution(const Distribution& d, const LiftContext& ctx) {
  std::vector<TensorField> gens;
  for (int nu = 0; nu <= ctx.r(); ++nu)
    for (const auto& x : d.generators) gens.push_back(lift_vector_field(x, nu, ctx));
  return Distribution{ctx.prolonged(), std::move(gens)};
}

// ---------------------------------------------------------------- connections

Poly LinearConnection::christoffel(std::uint32_t a, std::uint32_t k, std::uint32_t b) const {
  auto it = gamma.find({a, k, b});
  return it == gamma.end() ? chart.constant(0) : it->second;
}

TensorField LinearConnection::horizontal_field(std::uint32_t k) const {
  if (k >= base.size()) throw DomainError("base index out of range");
  TensorField x = TensorField::vector_basis(chart, base[k]);
  for (const auto& [key, g] : gamma) {
    if (key[1] != k) continue;
    Poly coef = -(g * chart.var(fiber[key[2]]));
    x.add({fiber[key[0]].index}, coef);
  }
  return x;
}

LinearConnection make_linear_connection(Chart chart, std::vector<VarRef> base, std::vector<VarRef> fiber,
                                        std::map<std::array<std::uint32_t, 3>, Poly> gamma) {
  for (auto v : base) chart.check_var(v);
  for (auto v : fiber) chart.check_var(v);
  if (auto vb = chart.vb_component()) {
    for (auto v : base)
      if (chart.weight(v, *vb) != 0) throw DomainError(chart.name(v) + " is not a base coordinate");
    for (auto v : fiber)
      if (chart.weight(v, *vb) != 1) throw DomainError(chart.name(v) + " is not a linear fibre coordinate");
  }
  std::vector<bool> is_base(chart.size(), false);
  for (auto v : base) is_base[v.index] = true;
  std::map<std::array<std::uint32_t, 3>, Poly> g;
  for (auto& [key, f] : gamma) {
    if (key[0] >= fiber.size() || key[1] >= base.size() || key[2] >= fiber.size())
      throw DomainError("Christoffel index out of range");
    Poly h = f.rebind(chart.token());
    for (const auto& t : h.terms())
      for (const auto& fac : t.mono.factors())
        if (!is_base[fac.var]) throw DomainError("Christoffel symbols must depend on base coordinates only");
    if (!h.is_zero()) g.emplace(key, std::move(h));
  }
  return LinearConnection{std::move(chart), std::move(base), std::move(fiber), std::move(g)};
}

LinearConnection lift_linear_connection(const LinearConnection& c, const LiftContext& ctx) {
  if (!(c.chart == ctx.base())) throw ChartMismatch("connection does not live on the lift base chart");
  const int r = ctx.r();
  const auto nb = static_cast<std::uint32_t>(c.base.size());
  const auto nf = static_cast<std::uint32_t>(c.fiber.size());
  LinearConnection out;
  out.chart = ctx.prolonged();
  for (int mu = 0; mu <= r; ++mu) {
    for (auto v : c.base) out.base.push_back(ctx.lifted(v, mu));
    for (auto v : c.fiber) out.fiber.push_back(ctx.lifted(v, mu));
  }
  for (const auto& [key, g] : c.gamma) {
    auto lifts = ctx.lift_all(g);
    for (int rho = 0; rho <= r; ++rho)
      for (int l = 0; l <= rho; ++l)
        for (int m = 0; l + m <= rho; ++m) {
          const Poly& f = lifts[rho - l - m];
          if (f.is_zero()) continue;
          out.gamma.emplace(std::array<std::uint32_t, 3>{rho * nf + key[0], l * nb + key[1], m * nf + key[2]}, f);
        }
  }
  return out;
}

Poly AffineConnection::christoffel(std::uint32_t i, std::uint32_t k, std::uint32_t j) const {
  auto it = gamma.find({i, k, j});
  return it == gamma.end() ? chart.constant(0) : it->second;
}

AffineConnection make_affine_connection(Chart chart, std::map<std::array<std::uint32_t, 3>, Poly> gamma) {
  std::map<std::array<std::uint32_t, 3>, Poly> g;
  for (auto& [key, f] : gamma) {
    for (auto i : key) chart.check_var(VarRef{i});
    Poly h = f.rebind(chart.token());
    if (!h.is_zero()) g.emplace(key, std::move(h));
  }
  return AffineConnection{std::move(chart), std::move(g)};
}

AffineConnection lift_affine_connection(const AffineConnection& c, const LiftContext& ctx) {
  if (!(c.chart == ctx.base())) throw ChartMismatch("connection does not live on the lift base chart");
  const int r = ctx.r();
  AffineConnection out{ctx.prolonged(), {}};
  for (const auto& [key, g] : c.gamma) {
    auto lifts = ctx.lift_all(g);
    for (int rho = 0; rho <= r; ++rho)
      for (int l = 0; l <= rho; ++l)
        for (int m = 0; l + m <= rho; ++m) {
          const Poly& f = lifts[rho - l - m];
          if (f.is_zero()) continue;
          out.gamma.emplace(std::array<std::uint32_t, 3>{ctx.lifted(VarRef{key[0]}, rho).index,
                                                         ctx.lifted(VarRef{key[1]}, l).index,
                                                         ctx.lifted(VarRef{key[2]}, m).index},
                            f);
        }
  }
  return out;
}

TensorField covariant_derivative(const AffineConnection& c, const TensorField& x, const TensorField& y) {
  if (x.q() != 1 || x.p() != 0 || y.q() != 1 || y.p() != 0)
    throw ValenceError("covariant derivative needs two vector fields");
  if (!(x.chart() == c.chart) || !(y.chart() == c.chart)) throw ChartMismatch("fields and connection differ in chart");
  TensorField out(c.chart, 1, 0);
  for (const auto& [idx, yk] : y.components()) out.add(idx, apply_vector_field(x, yk));
  for (const auto& [key, g] : c.gamma) {
    Poly xj = x.component({key[1]});
    if (xj.is_zero()) continue;
    Poly yl = y.component({key[2]});
    if (yl.is_zero()) continue;
    out.add({key[0]}, g * xj * yl);
  }
  return out;
}

LinearConnection as_linear_connection(const AffineConnection& c, const Chart& tangent) {
  const Chart* base = tangent.bundle_base();
  if (!base || !(*base == c.chart) || tangent.size() != 2 * c.chart.size())
    throw DomainError("chart is not the tangent chart of the connection's manifold");
  const auto n = static_cast<std::uint32_t>(c.chart.size());
  std::vector<VarRef> b, f;
  for (std::uint32_t i = 0; i < n; ++i) {
    b.push_back(VarRef{i});
    f.push_back(VarRef{n + i});
  }
  std::map<std::array<std::uint32_t, 3>, Poly> g;
  for (const auto& [key, v] : c.gamma) g.emplace(key, v.rebind(tangent.token()));
  return make_linear_connection(tangent, std::move(b), std::move(f), std::move(g));
}

}  // namespace gradcalc
