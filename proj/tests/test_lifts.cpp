#include "gradcalc/calculus.hpp"
#include "gradcalc/error.hpp"
#include "gradcalc/lifts.hpp"
#include "gradcalc/oracle.hpp"
#include "gradcalc/random.hpp"
#include "support.hpp"

using namespace testing;

TEST_SUITE("lifts") {
  TEST_CASE("function lifts") {
    auto m = plane();
    LiftContext c2(m, 2);
    const auto& t = c2.prolonged();
    auto x = m.var("x"), y = m.var("y");
    for (int l = 0; l <= 2; ++l) CHECK(lift_function(x, l, c2) == t.var(t.prolonged_var(m.at("x"), l)));
    CHECK(lift_function(x * y, -1, c2).is_zero());
    CHECK(lift_function(x * y, 3, c2).is_zero());
    auto xy1 = lift_function(x * y, 1, c2);
    CHECK(xy1 == t.var("x") * t.var("y_1") + t.var("x_1") * t.var("y"));
    CHECK(xy1 == taylor_lift_oracle(x * y, 1, c2));
    CHECK(lift_function(m.constant(5), 0, c2) == t.constant(5));
    CHECK(lift_function(m.constant(5), 1, c2).is_zero());
    CHECK_THROWS_AS(lift_function(plane().var("x"), 0, c2), ChartMismatch);
  }

  TEST_CASE("r = 0 is the identity") {
    auto m = plane();
    LiftContext c0(m, 0);
    CHECK(c0.prolonged() == m);
    auto X = vf(m, {{"y", m.var("x")}});
    CHECK(lift_vector_field(X, 0, c0) == X);
    CHECK(lift_function(m.var("x") * m.var("y"), 0, c0) == m.var("x") * m.var("y"));
    CHECK(lift_vector_field(X, 1, c0).is_zero());
  }

  TEST_CASE("one-form lifts") {
    auto m = plane();
    LiftContext c2(m, 2);
    const auto& t = c2.prolonged();
    auto x = m.var("x"), y = m.var("y");
    CHECK(lift_one_form(dx_(m, "x"), 1, c2) == dx_(t, "x_1"));
    auto alpha = (x * y) * dx_(m, "x") + x * dx_(m, "y");
    CHECK(lift_one_form(alpha, 0, c2) == (t.var("x") * t.var("y")) * dx_(t, "x") + t.var("x") * dx_(t, "y"));
    auto a2 = lift_one_form(x * dx_(m, "y"), 2, c2);
    CHECK(a2 == t.var("x_2") * dx_(t, "y") + t.var("x_1") * dx_(t, "y_1") + t.var("x") * dx_(t, "y_2"));
    CHECK_THROWS_AS(lift_one_form(d_(m, "x"), 0, c2), ValenceError);
  }

  TEST_CASE("vector field lifts") {
    auto m = plane();
    auto X = vf(m, {{"y", m.var("x")}});
    LiftContext c1(m, 1);
    const auto& t1 = c1.prolonged();
    CHECK(lift_vector_field(X, 1, c1) == vf(t1, {{"y", t1.var("x")}, {"y_1", t1.var("x_1")}}));
    CHECK(lift_vector_field(X, 0, c1) == vf(t1, {{"y_1", t1.var("x")}}));
    CHECK(render_tensor(lift_vector_field(X, 1, c1)) == "x*d/dy + x_1*d/dy_1");
    LiftContext c2(m, 2);
    const auto& t2 = c2.prolonged();
    CHECK(lift_vector_field(X, 2, c2) ==
          vf(t2, {{"y", t2.var("x")}, {"y_1", t2.var("x_1")}, {"y_2", t2.var("x_2")}}));
    CHECK(lift_vector_field(d_(m, "x"), 0, c2) == d_(t2, "x_2"));
  }

  TEST_CASE("tensor lifts") {
    auto m = plane();
    LiftContext c1(m, 1);
    const auto& t = c1.prolonged();
    auto k = tensor_product(dx_(m, "x"), dx_(m, "y"));
    CHECK(lift_tensor(k, 1, c1) ==
          tensor_product(dx_(t, "x_1"), dx_(t, "y")) + tensor_product(dx_(t, "x"), dx_(t, "y_1")));
    auto f = m.var("x") * m.var("y");
    CHECK(lift_tensor(fn(m, f), 1, c1).as_scalar() == lift_function(f, 1, c1));
    auto L = wedge(d_(m, "x"), d_(m, "y"));
    auto Lc = complete_lift(L, c1);
    CHECK(Lc == wedge(d_(t, "x_1"), d_(t, "y")) + wedge(d_(t, "x"), d_(t, "y_1")));
    CHECK(Lc.contra_symmetry() == Symmetry::antisymmetric);
    CHECK(lift_tensor(k, 5, c1).is_zero());
    CHECK(lift_tensor(k, 5, c1).p() == 2);
  }

  TEST_CASE("generalized Leibniz rule") {
    Sampler s(201);
    auto c = space();
    for (int round = 0; round < 60; ++round) {
      LiftContext ctx(c, 1 + round % 3);
      auto f = s.poly(c, 2, 3), g = s.poly(c, 2, 3);
      auto fl = ctx.lift_all(f), gl = ctx.lift_all(g);
      int lambda = static_cast<int>(s.rng().below(ctx.r() + 1));
      Poly sum = ctx.prolonged().constant(0);
      for (int mu = 0; mu <= lambda; ++mu) sum += fl[mu] * gl[lambda - mu];
      CHECK(lift_function(f * g, lambda, ctx) == sum);
    }
  }

  TEST_CASE("Taylor oracle agrees with coefficient extraction") {
    Sampler s(202);
    std::vector<Chart> charts{space(), graded3(), plane()};
    for (int round = 0; round < 120; ++round) {
      const auto& c = charts[round % 3];
      LiftContext ctx(c, static_cast<int>(s.rng().below(4)));
      auto f = s.poly(c, 3, 4);
      for (int l = 0; l <= ctx.r(); ++l) CHECK(lift_function(f, l, ctx) == taylor_lift_oracle(f, l, ctx));
    }
  }

  TEST_CASE("lifts commute with the brackets") {
    Sampler s(203);
    auto c = space();
    for (int round = 0; round < 24; ++round) {
      LiftContext ctx(c, 1 + round % 3);
      const int r = ctx.r();
      auto X = s.vector_field(c, 2, 2), Y = s.vector_field(c, 2, 2);
      auto w = s.form(c, 1 + round % 2, 2, 2);
      auto K = s.tensor(c, 1, 1, Symmetry::none, Symmetry::none, 2, 2);
      auto A = s.multivector(c, 2, 1, 2);
      auto mu = s.vector_valued_form(c, 1, 1, 2), nu = s.vector_valued_form(c, round % 2, 1, 2);
      int l = static_cast<int>(s.rng().below(r + 1)), m = static_cast<int>(s.rng().below(r + 1));
      CHECK(lie_bracket(lift_vector_field(X, l, ctx), lift_vector_field(Y, m, ctx)) ==
            lift_vector_field(lie_bracket(X, Y), l + m - r, ctx));
      CHECK(interior(lift_vector_field(X, l, ctx), lift_tensor(w, m, ctx)) ==
            lift_tensor(interior(X, w), l + m - r, ctx));
      CHECK(exterior_derivative(lift_tensor(w, m, ctx)) == lift_tensor(exterior_derivative(w), m, ctx));
      CHECK(lie_derivative(lift_vector_field(X, l, ctx), lift_tensor(K, m, ctx)) ==
            lift_tensor(lie_derivative(X, K), l + m - r, ctx));
      CHECK(schouten_bracket(lift_tensor(X, l, ctx), lift_tensor(A, m, ctx)) ==
            lift_tensor(schouten_bracket(X, A), l + m - r, ctx));
      CHECK(nr_bracket(lift_tensor(mu, l, ctx), lift_tensor(nu, m, ctx)) ==
            lift_tensor(nr_bracket(mu, nu), l + m - r, ctx));
      CHECK(fn_bracket(lift_tensor(mu, l, ctx), lift_tensor(nu, m, ctx)) ==
            lift_tensor(fn_bracket(mu, nu), l + m - r, ctx));
    }
  }

  TEST_CASE("complete lifts preserve composition") {
    Sampler s(204);
    auto c = space();
    for (int round = 0; round < 30; ++round) {
      LiftContext ctx(c, 1 + round % 2);
      auto n1 = s.tensor(c, 1, 1, Symmetry::none, Symmetry::none, 2, 4);
      auto n2 = s.tensor(c, 1, 1, Symmetry::none, Symmetry::none, 2, 4);
      CHECK(complete_lift(compose_11(n1, n2), ctx) == compose_11(complete_lift(n1, ctx), complete_lift(n2, ctx)));
      CHECK(complete_lift(id_11(c), ctx) == id_11(ctx.prolonged()));
    }
  }

  TEST_CASE("degrees of lifts") {
    Sampler s(205);
    auto c = space();
    for (int round = 0; round < 60; ++round) {
      LiftContext ctx(c, 1 + round % 3);
      int q = static_cast<int>(s.rng().below(3)), p = static_cast<int>(s.rng().below(3));
      if (q + p == 0) q = 1;
      auto k = s.tensor(c, q, p, Symmetry::none, Symmetry::none, 2, 3);
      int l = static_cast<int>(s.rng().below(ctx.r() + 1));
      auto lifted = lift_tensor(k, l, ctx);
      if (lifted.is_zero()) continue;
      CHECK(degree_of_tensor(lifted, ctx.canonical_component()) == Degree::of(l - q * ctx.r()));
    }
  }

  TEST_CASE("lifted weight vector field") {
    auto g = make_chart({"x", "y"}, {{0}, {1}});
    LiftContext c1(g, 1);
    const auto& t = c1.prolonged();
    CHECK(lift_weight_vector_field(c1, 0) == vf(t, {{"y", t.var("y")}, {"y_1", t.var("y_1")}}));
    LiftContext flat(plane(), 2);
    CHECK(lift_weight_vector_field(flat, 0).is_zero());
    for (int r = 1; r <= 3; ++r) {
      auto f = graded3();
      LiftContext ctx(f, r);
      auto wc = lift_weight_vector_field(ctx, 0);
      CHECK(wc == complete_lift(weight_vector_field(f, 0), ctx));
      CHECK(lie_bracket(weight_vector_field(ctx.prolonged(), ctx.canonical_component()), wc).is_zero());
    }
  }

  TEST_CASE("distribution lifts") {
    auto m = plane();
    LiftContext c1(m, 1);
    auto d = lift_distribution(make_distribution({d_(m, "x")}), c1);
    REQUIRE(d.generators.size() == 2);
    CHECK(d.generators[0] == d_(c1.prolonged(), "x_1"));
    CHECK(d.generators[1] == d_(c1.prolonged(), "x"));
    CHECK_THROWS_AS(make_distribution({}), DomainError);
    CHECK_THROWS_AS(make_distribution({dx_(m, "x")}), ValenceError);
  }

  TEST_CASE("linear connection lifts") {
    // rank one bundle over the line, Gamma(x) = x
    auto e = make_chart({"x", "y"}, {{0}, {1}}, {}, "E", 0);
    auto x = e.var("x");
    auto conn = make_linear_connection(e, {e.at("x")}, {e.at("y")}, {{{0, 0, 0}, x}});
    CHECK(conn.horizontal_field(0) == vf(e, {{"x", e.constant(1)}, {"y", -(x * e.var("y"))}}));
    LiftContext ctx(e, 1);
    const auto& t = ctx.prolonged();
    auto lifted = lift_linear_connection(conn, ctx);
    std::map<std::array<std::uint32_t, 3>, Poly> expect{
        {{0, 0, 0}, t.var("x")}, {{1, 0, 0}, t.var("x_1")}, {{1, 1, 0}, t.var("x")}, {{1, 0, 1}, t.var("x")}};
    CHECK(lifted.gamma == expect);
    CHECK(lifted.base == std::vector<VarRef>{t.at("x"), t.at("x_1")});
    CHECK(lifted.fiber == std::vector<VarRef>{t.at("y"), t.at("y_1")});
    // horizontal fields of the lift are the lifts of the horizontal field
    for (int l = 0; l <= 1; ++l)
      CHECK(lifted.horizontal_field((1 - l) * 1 + 0) == lift_vector_field(conn.horizontal_field(0), l, ctx));

    auto zero = make_linear_connection(e, {e.at("x")}, {e.at("y")}, {});
    CHECK(lift_linear_connection(zero, ctx).gamma.empty());
    CHECK_THROWS_AS(make_linear_connection(e, {e.at("x")}, {e.at("y")}, {{{0, 0, 0}, e.var("y")}}), DomainError);
    CHECK_THROWS_AS(make_linear_connection(e, {e.at("y")}, {e.at("x")}, {}), DomainError);
  }

  TEST_CASE("horizontal fields of lifted connections") {
    Sampler s(206);
    auto base = plane();
    auto e = make_chart({"x", "y", "u", "v"}, {{0}, {0}, {1}, {1}}, {}, "E", 0);
    for (int round = 0; round < 10; ++round) {
      std::map<std::array<std::uint32_t, 3>, Poly> g;
      auto bc = make_chart({"x", "y"}, {{0}, {0}});
      for (int e2 = 0; e2 < 3; ++e2) {
        std::array<std::uint32_t, 3> key{static_cast<std::uint32_t>(s.rng().below(2)),
                                         static_cast<std::uint32_t>(s.rng().below(2)),
                                         static_cast<std::uint32_t>(s.rng().below(2))};
        g[key] = s.poly(bc, 2, 2).rebind(e.token());
      }
      auto conn = make_linear_connection(e, {e.at("x"), e.at("y")}, {e.at("u"), e.at("v")}, g);
      LiftContext ctx(e, 1 + round % 2);
      auto lifted = lift_linear_connection(conn, ctx);
      const int r = ctx.r();
      for (std::uint32_t k = 0; k < 2; ++k)
        for (int l = 0; l <= r; ++l)
          CHECK(lifted.horizontal_field((r - l) * 2 + k) == lift_vector_field(conn.horizontal_field(k), l, ctx));
    }
  }

  TEST_CASE("covariant derivative") {
    auto m = plane();
    auto flat = make_affine_connection(m, {});
    CHECK(covariant_derivative(flat, d_(m, "x"), d_(m, "y")).is_zero());
    auto one = make_affine_connection(m, {{{1, 0, 0}, m.constant(1)}});
    CHECK(covariant_derivative(one, d_(m, "x"), d_(m, "x")) == d_(m, "y"));
    CHECK_THROWS_AS(covariant_derivative(one, dx_(m, "x"), d_(m, "x")), ValenceError);

    Sampler s(207);
    auto c = space();
    for (int round = 0; round < 30; ++round) {
      std::map<std::array<std::uint32_t, 3>, Poly> g;
      for (int e = 0; e < 4; ++e)
        g[{static_cast<std::uint32_t>(s.rng().below(3)), static_cast<std::uint32_t>(s.rng().below(3)),
           static_cast<std::uint32_t>(s.rng().below(3))}] = s.poly(c, 2, 2);
      auto conn = make_affine_connection(c, g);
      auto X = s.vector_field(c, 2), Y = s.vector_field(c, 2);
      auto f = s.poly(c, 2, 2);
      CHECK(covariant_derivative(conn, X, f * Y) ==
            apply_vector_field(X, f) * Y + f * covariant_derivative(conn, X, Y));
      CHECK(covariant_derivative(conn, f * X, Y) == f * covariant_derivative(conn, X, Y));
    }
  }

  TEST_CASE("lifted affine connections") {
    Sampler s(208);
    auto m = plane();
    auto one = make_affine_connection(m, {{{1, 0, 0}, m.constant(1)}});
    std::vector<AffineConnection> conns{one};
    for (int i = 0; i < 6; ++i) {
      std::map<std::array<std::uint32_t, 3>, Poly> g;
      for (int e = 0; e < 3; ++e)
        g[{static_cast<std::uint32_t>(s.rng().below(2)), static_cast<std::uint32_t>(s.rng().below(2)),
           static_cast<std::uint32_t>(s.rng().below(2))}] = s.poly(m, 2, 2);
      conns.push_back(make_affine_connection(m, g));
    }
    for (const auto& conn : conns)
      for (int r = 1; r <= 2; ++r) {
        LiftContext ctx(m, r);
        auto lc = lift_affine_connection(conn, ctx);
        auto X = s.vector_field(m, 2, 2), Y = s.vector_field(m, 2, 2);
        for (int l = 0; l <= r; ++l)
          for (int u = 0; u <= r; ++u)
            CHECK(covariant_derivative(lc, lift_vector_field(X, l, ctx), lift_vector_field(Y, u, ctx)) ==
                  lift_vector_field(covariant_derivative(conn, X, Y), l + u - r, ctx));
      }
  }

  TEST_CASE("affine lift through the tangent bundle") {
    // the direct lifted symbols coincide with lifting the connection as a
    // linear connection on TM and reading off the same positions
    auto m = plane();
    auto conn = make_affine_connection(m, {{{1, 0, 0}, m.var("x")}, {{0, 1, 0}, m.var("y") * m.var("x")}});
    auto tm = tangent_chart(m);
    auto lin = as_linear_connection(conn, tm);
    for (int r = 1; r <= 2; ++r) {
      LiftContext ca(m, r), cl(tm, r);
      auto direct = lift_affine_connection(conn, ca);
      auto via = lift_linear_connection(lin, cl);
      // positions (A,k,B) in mu-major base/fibre lists correspond to
      // variables of T^r M in its mu-major order
      std::map<std::array<std::uint32_t, 3>, std::string> a, b;
      for (const auto& [key, f] : direct.gamma) a[key] = render_poly(f, ca.prolonged());
      for (const auto& [key, f] : via.gamma) b[key] = render_poly(f, cl.prolonged());
      CHECK(a.size() == b.size());
      for (const auto& [key, text] : a) {
        auto it = b.find(key);
        REQUIRE(it != b.end());
        CHECK(it->second == text);
      }
    }
  }
}
