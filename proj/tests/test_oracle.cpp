#include "gradcalc/calculus.hpp"
#include "gradcalc/error.hpp"
#include "gradcalc/oracle.hpp"
#include "gradcalc/random.hpp"
#include "support.hpp"

using namespace testing;

namespace {

// N = c I + Lambda#W with W a 2-form keeps N Lambda skew
TensorField compatible_n(Sampler& s, const TensorField& lambda, const Chart& c) {
  auto w = s.form(c, 2, 1, 3);
  auto lw = contract(tensor_product(lambda, w), 1, 0);
  return s.poly(c, 1, 2) * id_11(c) + lw;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("Taylor oracle examples") {
    auto m = plane();
    LiftContext c2(m, 2);
    const auto& t = c2.prolonged();
    auto x = m.var("x"), y = m.var("y");
    CHECK(taylor_lift_oracle(x * x, 2, c2) == t.var("x_1") * t.var("x_1") + 2 * t.var("x") * t.var("x_2"));
    CHECK(taylor_lift_oracle(x * y, 0, c2) == t.var("x") * t.var("y"));
    CHECK(taylor_lift_oracle(m.constant(7), 1, c2).is_zero());
    CHECK_THROWS_AS(taylor_lift_oracle(x, 3, c2), DomainError);
    CHECK_THROWS_AS(taylor_lift_oracle(x, -1, c2), DomainError);
  }

  TEST_CASE("Taylor oracle against lift_function") {
    Sampler s(301);
    std::vector<Chart> charts{plane(), space(), graded3()};
    int done = 0;
    for (int round = 0; round < 500; ++round) {
      const auto& c = charts[round % 3];
      LiftContext ctx(c, 1 + static_cast<int>(s.rng().below(3)));
      auto f = s.poly(c, 3, 3);
      int l = static_cast<int>(s.rng().below(ctx.r() + 1));
      CHECK(taylor_lift_oracle(f, l, ctx) == lift_function(f, l, ctx));
      ++done;
    }
    CHECK(done == 500);
  }

  TEST_CASE("evaluation at a point") {
    auto m = plane();
    auto x = m.var("x"), y = m.var("y");
    std::vector<Rational> pt{Rational(2), Rational(3, 2)};
    auto v = evaluate_tensor_at(fn(m, x * y), pt);
    REQUIRE(v.size() == 1);
    CHECK(v.begin()->second == Rational(3));

    auto w = y * dx_(m, "x") + (x - 2) * dx_(m, "y");
    auto vw = evaluate_tensor_at(w, pt);
    CHECK(vw.size() == 1);
    CHECK(vw.at(Index{0}) == Rational(3, 2));

    // antisymmetric storage evaluates to full components
    auto L = (x * y) * wedge(d_(m, "x"), d_(m, "y"));
    auto vl = evaluate_tensor_at(L, std::map<VarRef, Rational>{{m.at("x"), 1}, {m.at("y"), 1}});
    CHECK(vl.at(Index{0, 1}) == Rational(1));

    CHECK_THROWS_AS(evaluate_tensor_at(fn(m, x), std::map<VarRef, Rational>{{m.at("y"), 1}}), DomainError);
    CHECK_THROWS_AS(evaluate_tensor_at(fn(m, x), std::vector<Rational>{Rational(1)}), DomainError);
  }

  TEST_CASE("identity spot check") {
    auto m = plane();
    auto x = m.var("x"), y = m.var("y");
    SamplePlan plan;
    auto bad = identity_spot_check(fn(m, (x + y) * (x + y)), fn(m, x * x + y * y), plan);
    CHECK_FALSE(bad.pass);
    CHECK(bad.probabilistic);
    CHECK(bad.seed == plan.seed);
    REQUIRE(bad.witness);
    CHECK(bad.witness->find("at (x=") == 0);
    auto good = identity_spot_check(fn(m, (x + y) * (x + y)), fn(m, x * x + 2 * x * y + y * y), plan);
    CHECK(good.pass);
    CHECK_FALSE(good.witness);

    plan.count = 0;
    CHECK_THROWS_AS(identity_spot_check(fn(m, x), fn(m, x), plan), DomainError);
  }

  TEST_CASE("spot checks are reproducible") {
    auto m = plane();
    auto x = m.var("x"), y = m.var("y");
    SamplePlan plan;
    plan.seed = 9;
    auto a = identity_spot_check(fn(m, x * y), fn(m, x + y), plan);
    auto b = identity_spot_check(fn(m, x * y), fn(m, x + y), plan);
    CHECK(a.witness == b.witness);
    CHECK(sample_points(plan, 3) == sample_points(plan, 3));
    for (const auto& p : sample_points(plan, 3))
      for (const auto& v : p) {
        CHECK(v != 0);
        CHECK(v >= plan.lo);
        CHECK(v <= plan.hi);
      }
  }

  TEST_CASE("Koszul oracle degenerate cases") {
    auto c = space();
    Sampler s(302);
    for (int round = 0; round < 10; ++round) {
      auto L = s.multivector(c, 2, 2, 3);
      auto a = s.form(c, 1, 2, 2), b = s.form(c, 1, 2, 2);
      CHECK(koszul_concomitant_oracle(L, id_11(c), a, b).is_zero());
      auto N = s.tensor(c, 1, 1, Symmetry::none, Symmetry::none, 2, 3);
      CHECK(koszul_concomitant_oracle(TensorField(c, 2, 0, Symmetry::antisymmetric), N, a, b).is_zero());
    }
  }

  TEST_CASE("Koszul oracle matches the coordinate concomitant") {
    Sampler s(303);
    auto c = space();
    for (int round = 0; round < 100; ++round) {
      auto L = s.multivector(c, 2, 2, 3);
      auto N = compatible_n(s, L, c);
      auto nl = n_lambda(N, L);
      REQUIRE(nl == -transpose(nl));
      auto a = s.form(c, 1, 2, 2), b = s.form(c, 1, 2, 2);
      CHECK(pair_concomitant(concomitant(L, N), a, b) == koszul_concomitant_oracle(L, N, a, b));
    }
  }

  TEST_CASE("torsion oracle examples") {
    auto m = plane();
    CHECK(torsion_oracle(id_11(m)).is_zero());
    auto x = m.var("x");
    // N = x dx (x) d/dx has vanishing torsion in one direction
    auto n = x * tensor_product(d_(m, "x"), dx_(m, "x"));
    CHECK(torsion_oracle(n).is_zero());
  }
}
