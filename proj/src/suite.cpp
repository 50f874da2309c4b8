#include "gradcalc/suite.hpp"

#include "gradcalc/calculus.hpp"
#include "gradcalc/checkers.hpp"
#include "gradcalc/lifts.hpp"
#include "gradcalc/oracle.hpp"
#include "gradcalc/random.hpp"
#include "gradcalc/render.hpp"

#ifndef GRADCALC_VERSION
#define GRADCALC_VERSION "0.0.0"
#endif

namespace gradcalc {

namespace {

using json = nlohmann::ordered_json;

Chart flat_chart(std::size_t dim) {
  static const char* names[] = {"x", "y", "z"};
  std::vector<std::string> n(names, names + dim);
  return make_chart(n, std::vector<std::vector<int>>(dim, {0}), {}, "R" + std::to_string(dim));
}

std::string where(long i, int r, int l, int m) {
  return "case " + std::to_string(i) + " (r=" + std::to_string(r) + ", lambda=" + std::to_string(l) +
         ", mu=" + std::to_string(m) + ")";
}

// f d/dx^i -> sum_mu f^(mu) d/dx^i_(r-lambda+mu), f dx^i -> sum_mu f^(mu) dx^i_(lambda-mu),
// with function lifts taken from the Taylor oracle.
TensorField structural_lift(const TensorField& t, int lambda, const LiftContext& ctx) {
  const auto& pc = ctx.prolonged();
  const int r = ctx.r();
  TensorField out(pc, t.q(), t.p());
  for (const auto& [idx, f] : t.components())
    for (int mu = 0; mu <= lambda; ++mu) {
      int order = t.q() == 1 ? r - lambda + mu : lambda - mu;
      if (order < 0 || order > r) continue;
      out.add({pc.prolonged_var(VarRef{idx[0]}, order).index}, taylor_lift_oracle(f, mu, ctx));
    }
  return out;
}

SuiteEntry formula_display(const SuiteOptions&) {
  SuiteEntry e;
  auto m = make_chart({"x", "y"}, {{0}, {0}}, {}, "M");
  auto x = m.var("x");
  auto X = x * TensorField::vector_basis(m, m.at("y"));
  auto a = x * TensorField::covector_basis(m, m.at("y"));
  for (int r = 1; r <= 2; ++r) {
    LiftContext ctx(m, r);
    for (int l = 0; l <= r; ++l) {
      ++e.cases;
      for (const auto* t : {&X, &a}) {
        auto got = lift_tensor(*t, l, ctx);
        auto want = structural_lift(*t, l, ctx);
        if (!(got == want))
          e.fail("r=" + std::to_string(r) + ", lambda=" + std::to_string(l) + ": " + render_tensor(got) + " vs " +
                 render_tensor(want));
      }
    }
  }
  LiftContext c1(m, 1), c2(m, 2);
  const std::pair<std::string, std::string> texts[] = {
      {render_tensor(lift_tensor(X, 1, c1)), "x*d/dy + x_1*d/dy_1"},
      {render_tensor(lift_tensor(X, 2, c2)), "x*d/dy + x_1*d/dy_1 + x_2*d/dy_2"},
      {render_tensor(lift_tensor(a, 2, c2)), "x_2*dy + x_1*dy_1 + x*dy_2"},
  };
  for (const auto& [got, want] : texts)
    if (got != want) e.fail("rendered " + got + ", expected " + want);
  return e;
}

// One random input per case; every (lambda, mu) pair is checked.
SuiteEntry bracket_battery(const SuiteOptions& o) {
  SuiteEntry e;
  Sampler s(o.seed ^ 0x5eed0002);
  std::vector<Chart> charts{flat_chart(1), flat_chart(2), flat_chart(3)};
  std::vector<std::vector<LiftContext>> ctx(3);
  for (int d = 0; d < 3; ++d)
    for (int r = 1; r <= 3; ++r) ctx[d].emplace_back(charts[d], r);

  for (long i = 0; i < o.cases; ++i) {
    const int d = static_cast<int>(i % 3);
    const auto& c = charts[d];
    const auto& lc = ctx[d][(i / 3) % 3];
    const int r = lc.r();
    const int dim = d + 1;
    auto lifts = [&](const TensorField& t) {
      std::vector<TensorField> out;
      for (int l = 0; l <= r; ++l) out.push_back(lift_tensor(t, l, lc));
      return out;
    };
    auto check = [&](const char* name, const std::vector<TensorField>& A, const std::vector<TensorField>& B,
                     const std::function<TensorField(const TensorField&, const TensorField&)>& op,
                     const TensorField& base_result) {
      for (int l = 0; l <= r; ++l)
        for (int m = 0; m <= r; ++m) {
          auto got = op(A[l], B[m]);
          auto want = lift_tensor(base_result, l + m - r, lc);
          if (!(got == want))
            e.fail(std::string(name) + " " + where(i, r, l, m) + ": difference " + render_tensor(got - want));
        }
    };

    auto X = s.vector_field(c, 2), Y = s.vector_field(c, 2);
    auto LX = lifts(X), LY = lifts(Y);
    check("lie", LX, LY, lie_bracket, lie_bracket(X, Y));

    const int p = 1 + static_cast<int>(s.rng().below(dim));
    auto w = s.form(c, p, 2);
    auto Lw = lifts(w);
    check("insertion", LX, Lw, interior, interior(X, w));
    auto dw = exterior_derivative(w);
    for (int l = 0; l <= r; ++l)
      if (!(exterior_derivative(Lw[l]) == lift_tensor(dw, l, lc)))
        e.fail("d " + where(i, r, l, l) + ": " + render_tensor(w));

    const int q = static_cast<int>(s.rng().below(3)), pk = static_cast<int>(s.rng().below(3));
    auto K = s.tensor(c, q, pk, Symmetry::none, Symmetry::none, 2, 3);
    check("lie-derivative", LX, lifts(K), lie_derivative, lie_derivative(X, K));

    const int ka = 1 + static_cast<int>(s.rng().below(std::min(dim, 2)));
    const int kb = 1 + static_cast<int>(s.rng().below(std::min(dim, 2)));
    auto P = s.multivector(c, ka, 2), Q = s.multivector(c, kb, 2);
    check("schouten", lifts(P), lifts(Q), schouten_bracket, schouten_bracket(P, Q));

    const int va = static_cast<int>(s.rng().below(std::min(dim, 2) + 1));
    int vb = static_cast<int>(s.rng().below(std::min(dim, 2) + 1));
    if (va + vb == 0) vb = 1;
    auto M = s.vector_valued_form(c, va, 2), N = s.vector_valued_form(c, vb, 2);
    auto LM = lifts(M), LN = lifts(N);
    check("nr", LM, LN, nr_bracket, nr_bracket(M, N));
    check("fn", LM, LN, fn_bracket, fn_bracket(M, N));
    ++e.cases;
  }
  return e;
}

SuiteEntry degree_theorem(const SuiteOptions& o) {
  SuiteEntry e;
  Sampler s(o.seed ^ 0x5eed0003);
  std::vector<Chart> charts{make_chart({"x", "y", "z"}, {{0}, {1}, {2}}, {}, "F"),
                            make_chart({"x", "y"}, {{1}, {3}}, {}, "G"), flat_chart(3)};
  for (long i = 0; i < o.cases; ++i) {
    const auto& c = charts[i % charts.size()];
    LiftContext ctx(c, 1 + static_cast<int>(i % 3));
    int q = static_cast<int>(s.rng().below(3)), p = static_cast<int>(s.rng().below(3));
    if (q + p == 0) p = 1;
    long w = s.rng().range(-2, 4);
    auto k = s.homogeneous_tensor(c, 0, q, p, Symmetry::none, Symmetry::none, w, 2, 3);
    if (k.is_zero()) k = s.tensor(c, q, p, Symmetry::none, Symmetry::none, 2, 3);
    if (k.is_zero()) continue;
    ++e.cases;
    const int r = ctx.r();
    for (int l = 0; l <= r; ++l) {
      auto lifted = lift_tensor(k, l, ctx);
      if (lifted.is_zero()) continue;
      auto d = degree_of_tensor(lifted, ctx.canonical_component());
      if (!(d == Degree::of(l - q * r)))
        e.fail("case " + std::to_string(i) + ": (" + std::to_string(q) + "," + std::to_string(p) +
               ") tensor, lambda=" + std::to_string(l) + ", r=" + std::to_string(r) + " has degree " + d.to_string());
    }
  }
  return e;
}

SuiteEntry weight_field_commutation(const SuiteOptions&) {
  SuiteEntry e;
  static const char* names[] = {"x", "y", "z"};
  for (int dim = 1; dim <= 3; ++dim) {
    long total = 1;
    for (int i = 0; i < dim; ++i) total *= 4;
    for (long code = 0; code < total; ++code) {
      std::vector<std::string> n;
      std::vector<std::vector<int>> w;
      std::string label = "F";
      for (int i = 0, c = static_cast<int>(code); i < dim; ++i, c /= 4) {
        n.push_back(names[i]);
        w.push_back({c % 4});
        label += std::to_string(c % 4);
      }
      auto chart = make_chart(n, w, {}, label);
      for (int r = 1; r <= 3; ++r) {
        LiftContext ctx(chart, r);
        ++e.cases;
        auto lifted = lift_weight_vector_field(ctx, 0);
        auto canonical = weight_vector_field(ctx.prolonged(), ctx.canonical_component());
        auto br = lie_bracket(canonical, lifted);
        if (!br.is_zero()) e.fail(label + ", r=" + std::to_string(r) + ": bracket " + render_tensor(br));
        if (!(lifted == complete_lift(weight_vector_field(chart, 0), ctx)))
          e.fail(label + ", r=" + std::to_string(r) + ": lifted weight field differs from the complete lift");
      }
    }
  }
  return e;
}

SuiteEntry poisson_lifts(const SuiteOptions&) {
  SuiteEntry e;
  auto c = flat_chart(3);
  auto x = c.var("x"), y = c.var("y"), z = c.var("z");
  auto b = [&](const char* i, const char* j) {
    return wedge(TensorField::vector_basis(c, c.at(i)), TensorField::vector_basis(c, c.at(j)));
  };
  std::vector<std::pair<std::string, TensorField>> bases{
      {"dx^dy", b("x", "y")},
      {"so(3)", x * b("y", "z") + y * b("z", "x") + z * b("x", "y")},
      {"x^2 dy^dz", (x * x) * b("y", "z")},
      {"xz dx^dy", (x * z) * b("x", "y")},
      {"aff(1)", x * b("x", "y") + b("y", "z")},
  };
  for (const auto& [name, l] : bases) {
    auto base = is_poisson(l);
    if (!base.pass) e.fail(name + " is not Poisson: " + base.witness.value_or(""));
    for (int r = 1; r <= 2; ++r) {
      LiftContext ctx(c, r);
      ++e.cases;
      auto rep = is_weighted_poisson(complete_lift(l, ctx), r, ctx.canonical_component());
      if (!rep.pass) e.fail(name + ", r=" + std::to_string(r) + ": " + rep.witness.value_or(""));
    }
  }
  return e;
}

SuiteEntry nijenhuis_lifts(const SuiteOptions& o) {
  SuiteEntry e;
  auto m = flat_chart(2);
  auto d = [&](const char* n) { return TensorField::vector_basis(m, m.at(n)); };
  auto dx = [&](const char* n) { return TensorField::covector_basis(m, m.at(n)); };
  auto j = tensor_product(d("y"), dx("x")) - tensor_product(d("x"), dx("y"));
  for (int r = 1; r <= 2; ++r) {
    LiftContext ctx(m, r);
    auto jc = complete_lift(j, ctx);
    ++e.cases;
    auto ac = is_almost_complex(jc);
    if (!ac.pass) e.fail("r=" + std::to_string(r) + ": " + ac.witness.value_or(""));
    auto nj = is_nijenhuis(jc);
    if (!nj.pass) e.fail("r=" + std::to_string(r) + ": " + nj.witness.value_or(""));
  }
  Sampler s(o.seed ^ 0x5eed0006);
  auto c3 = flat_chart(3);
  for (long i = 0; i < 100; ++i) {
    auto n1 = s.tensor(c3, 1, 1, Symmetry::none, Symmetry::none, 0, 5);
    auto n2 = s.tensor(c3, 1, 1, Symmetry::none, Symmetry::none, 0, 5);
    LiftContext ctx(c3, 1 + static_cast<int>(i % 3));
    ++e.cases;
    if (!(complete_lift(compose_11(n1, n2), ctx) == compose_11(complete_lift(n1, ctx), complete_lift(n2, ctx))))
      e.fail("pair " + std::to_string(i) + ": " + render_tensor(n1) + ", " + render_tensor(n2));
  }
  return e;
}

SuiteEntry distribution_lifts(const SuiteOptions& o) {
  SuiteEntry e;
  auto c = flat_chart(3);
  auto d = make_distribution(
      {TensorField::vector_basis(c, c.at("x")), c.var("x") * TensorField::vector_basis(c, c.at("y"))});
  SamplePlan plan;
  plan.seed = o.seed;
  for (int r = 1; r <= 2; ++r) {
    LiftContext ctx(c, r);
    auto lifted = lift_distribution(d, ctx);
    for (const auto& pt : sample_points(plan, ctx.prolonged().size())) {
      ++e.cases;
      auto rank = rank_at_point(lifted, pt);
      if (rank != static_cast<std::size_t>(2 * (r + 1)))
        e.fail("r=" + std::to_string(r) + ": rank " + std::to_string(rank) + " at a sample point");
    }
    auto inv = is_involutive(lifted, plan);
    if (!inv.pass) e.fail("r=" + std::to_string(r) + ": " + inv.witness.value_or(""));
    auto wd = is_weighted_distribution(lifted, ctx.canonical_component(), plan);
    if (!wd.pass) e.fail("r=" + std::to_string(r) + ": " + wd.witness.value_or(""));
  }
  return e;
}

SuiteEntry connection_lifts(const SuiteOptions& o) {
  SuiteEntry e;
  Sampler s(o.seed ^ 0x5eed0008);
  auto m = flat_chart(2);
  std::vector<AffineConnection> conns{make_affine_connection(m, {{{1, 0, 0}, m.constant(1)}})};
  while (conns.size() < 21) {
    std::map<std::array<std::uint32_t, 3>, Poly> g;
    for (int k = 0; k < 3; ++k)
      g[{static_cast<std::uint32_t>(s.rng().below(2)), static_cast<std::uint32_t>(s.rng().below(2)),
         static_cast<std::uint32_t>(s.rng().below(2))}] = s.poly(m, 2, 2, true);
    conns.push_back(make_affine_connection(m, g));
  }
  for (std::size_t ci = 0; ci < conns.size(); ++ci)
    for (int r = 1; r <= 2; ++r) {
      LiftContext ctx(m, r);
      auto lc = lift_affine_connection(conns[ci], ctx);
      auto X = s.vector_field(m, 2), Y = s.vector_field(m, 2);
      auto nab = covariant_derivative(conns[ci], X, Y);
      for (int l = 0; l <= r; ++l)
        for (int u = 0; u <= r; ++u) {
          ++e.cases;
          auto got = covariant_derivative(lc, lift_tensor(X, l, ctx), lift_tensor(Y, u, ctx));
          auto want = lift_tensor(nab, l + u - r, ctx);
          if (!(got == want))
            e.fail("connection " + std::to_string(ci) + ", r=" + std::to_string(r) + ", lambda=" + std::to_string(l) +
                   ", mu=" + std::to_string(u) + ": difference " + render_tensor(got - want));
        }
    }
  // index placement: Gamma^{(A,rho)}_{(k,l)(B,m)} = (Gamma^A_{kB})^(rho-l-m) at positions
  // rho*n + A, l*n + k, m*n + B; for the constant symbol only rho = l + m survives
  for (int r = 1; r <= 2; ++r) {
    LiftContext ctx(m, r);
    auto lc = lift_affine_connection(conns[0], ctx);
    std::map<std::array<std::uint32_t, 3>, Poly> want;
    for (std::uint32_t l = 0; l <= static_cast<std::uint32_t>(r); ++l)
      for (std::uint32_t u = 0; l + u <= static_cast<std::uint32_t>(r); ++u)
        want[{(l + u) * 2 + 1, l * 2, u * 2}] = ctx.prolonged().constant(1);
    ++e.cases;
    if (lc.gamma != want) e.fail("r=" + std::to_string(r) + ": lifted symbols of the one-symbol connection differ");
  }
  // and for a bundle connection the lifted horizontal fields are the lifted horizontal fields
  auto eb = make_chart({"x", "y"}, {{0}, {1}}, {}, "E", 0);
  auto lin = make_linear_connection(eb, {eb.at("x")}, {eb.at("y")}, {{{0, 0, 0}, eb.var("x")}});
  for (int r = 1; r <= 2; ++r) {
    LiftContext ctx(eb, r);
    auto lifted = lift_linear_connection(lin, ctx);
    for (int l = 0; l <= r; ++l) {
      ++e.cases;
      if (!(lifted.horizontal_field(static_cast<std::uint32_t>(r - l)) ==
            lift_tensor(lin.horizontal_field(0), l, ctx)))
        e.fail("bundle connection r=" + std::to_string(r) + ", lambda=" + std::to_string(l));
    }
  }
  return e;
}

SuiteEntry concomitant_dual_path(const SuiteOptions& o) {
  SuiteEntry e;
  Sampler s(o.seed ^ 0x5eed0009);
  auto c = flat_chart(3);
  for (long i = 0; i < 100; ++i) {
    auto l = s.multivector(c, 2, 2, 3);
    // N = f I + L#W keeps N L skew
    auto n = s.poly(c, 1, 2) * id_11(c) + contract(tensor_product(l, s.form(c, 2, 1, 3)), 1, 0);
    auto a = s.form(c, 1, 2, 2), b = s.form(c, 1, 2, 2);
    ++e.cases;
    auto coord = pair_concomitant(concomitant(l, n), a, b);
    auto kos = koszul_concomitant_oracle(l, n, a, b);
    if (!(coord == kos)) e.fail("case " + std::to_string(i) + ": difference " + render_tensor(coord - kos));
    auto ci = concomitant(l, id_11(c));
    if (!ci.is_zero()) e.fail("case " + std::to_string(i) + ": C(L, I) = " + render_tensor(ci));
  }
  return e;
}

SuiteEntry oracle_independence(const SuiteOptions& o) {
  SuiteEntry e;
  Sampler s(o.seed ^ 0x5eed000a);
  std::vector<Chart> charts{flat_chart(1), flat_chart(2), flat_chart(3),
                            make_chart({"x", "y", "z"}, {{0}, {1}, {2}}, {}, "F")};
  for (long i = 0; i < 500; ++i) {
    const auto& c = charts[i % charts.size()];
    LiftContext ctx(c, 1 + static_cast<int>(s.rng().below(3)));
    auto f = s.poly(c, 3, 4);
    int l = static_cast<int>(s.rng().below(ctx.r() + 1));
    ++e.cases;
    auto a = lift_function(f, l, ctx), b = taylor_lift_oracle(f, l, ctx);
    if (!(a == b))
      e.fail("case " + std::to_string(i) + ": f = " + render_poly(f, c) + ", lambda=" + std::to_string(l) + ": " +
             render_poly(a, ctx.prolonged()) + " vs " + render_poly(b, ctx.prolonged()));
  }
  return e;
}

}  // namespace

const std::vector<SuiteCheck>& suite_checks() {
  static const std::vector<SuiteCheck> checks{
      {"lift-formulas", "lifts of x d/dy and x dy match the coordinate formulas", formula_display},
      {"bracket-lifts", "brackets, insertion, d and Lie derivatives commute with lifts", bracket_battery},
      {"lift-degrees", "degrees of lifted tensors", degree_theorem},
      {"weight-field-lift", "the canonical weight field commutes with the lifted weight field",
       weight_field_commutation},
      {"poisson-lifts", "complete lifts of Poisson tensors are weighted Poisson", poisson_lifts},
      {"nijenhuis-lifts", "complete lifts preserve complex structures, torsion and composition", nijenhuis_lifts},
      {"distribution-lifts", "lifted distributions: rank, involutivity, weighted", distribution_lifts},
      {"connection-lifts", "lifted connections differentiate lifted fields", connection_lifts},
      {"concomitant", "coordinate concomitant equals the bracket formula", concomitant_dual_path},
      {"taylor-oracle", "function lifts equal Taylor coefficients", oracle_independence},
  };
  return checks;
}

std::vector<SuiteEntry> run_check_suite(const SuiteOptions& options) {
  std::vector<SuiteEntry> out;
  for (const auto& c : suite_checks()) {
    SuiteEntry e;
    try {
      e = c.run(options);
    } catch (const std::exception& ex) {
      e.fail(std::string("error: ") + ex.what());
    }
    e.id = c.id;
    e.title = c.title;
    out.push_back(std::move(e));
  }
  return out;
}

json suite_json(const std::vector<SuiteEntry>& entries, const SuiteOptions& options) {
  json rows = json::array();
  bool all = true;
  for (const auto& e : entries) {
    json r{{"id", e.id}, {"title", e.title}, {"verdict", e.pass ? "pass" : "fail"}, {"cases", e.cases}};
    if (e.witness) r["witness"] = *e.witness;
    rows.push_back(std::move(r));
    all = all && e.pass;
  }
  return json{{"gradcalc_version", GRADCALC_VERSION},
              {"schema", 1},
              {"seed", options.seed},
              {"cases", options.cases},
              {"checks", rows},
              {"verdict", all ? "pass" : "fail"}};
}

std::string suite_text(const std::vector<SuiteEntry>& entries) {
  std::size_t w = 0;
  for (const auto& e : entries) w = std::max(w, e.id.size());
  std::string out;
  for (const auto& e : entries) {
    out += e.id + std::string(w - e.id.size() + 2, ' ') + (e.pass ? "pass" : "FAIL") + "  " +
           std::to_string(e.cases) + " cases  " + e.title + "\n";
    if (e.witness) out += std::string(w + 2, ' ') + e.witness.value() + "\n";
  }
  return out;
}

}  // namespace gradcalc
