#include <doctest.h>

#include <random>

#include "gradcalc/chart.hpp"
#include "gradcalc/error.hpp"
#include "gradcalc/poly.hpp"

using namespace gradcalc;

namespace {

struct Fixture {
  Chart m = make_chart({"x", "y", "z"}, {{0}, {1}, {2}});
  Poly x = m.var("x"), y = m.var("y"), z = m.var("z");
  std::vector<std::string> names{"x", "y", "z"};
  std::string str(const Poly& p) const { return render(p, names); }
};

// small random polynomial with integer coefficients in [-3,3]
Poly random_poly(std::mt19937_64& rng, const Chart& c, int terms, int deg) {
  std::vector<Poly::Term> t;
  for (int i = 0; i < terms; ++i) {
    Monomial m;
    int d = static_cast<int>(rng() % (deg + 1));
    for (int k = 0; k < d; ++k) m = m * Monomial::variable(VarRef{static_cast<std::uint32_t>(rng() % c.size())});
    t.push_back({m, Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 2))});
  }
  return Poly::from_terms(c.token(), t);
}

}  // namespace

TEST_SUITE("poly") {

TEST_CASE_FIXTURE(Fixture, "rationals are canonical") {
  CHECK(make_rational(2, -4) == Rational(-1, 2));
  CHECK(make_rational(2, -4).get_den() == 2);
  CHECK(to_string(parse_rational("6/8")) == "3/4");
  CHECK(to_string(parse_rational("-0/5")) == "0");
  CHECK_THROWS_AS(make_rational(1, 0), DomainError);
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
  CHECK_THROWS_AS(parse_rational("abc"), DomainError);
}

TEST_CASE_FIXTURE(Fixture, "addition") {
  CHECK((x + (-x)).is_zero());
  CHECK(str(x * y + x * y) == "2*x*y");
  Poly s = (x.pow(2) + Rational(1, 2)) + (y - Rational(1, 2));
  CHECK(s == x.pow(2) + y);
  // spot evaluation as a second path
  std::vector<Rational> pt{Rational(3, 2), Rational(-2), Rational(5)};
  CHECK(evaluate(s, pt) == Rational(9, 4) - 2);
}

TEST_CASE_FIXTURE(Fixture, "multiplication") {
  CHECK(Poly(1) * x == x);
  CHECK((x + y) * (x - y) == x.pow(2) - y.pow(2));
  CHECK((Poly(0) * (x + y)).is_zero());
  CHECK(str((x + y) * (x - y)) == "x^2 - y^2");
}

TEST_CASE_FIXTURE(Fixture, "partial derivatives") {
  CHECK(partial_derivative(x.pow(2) * y, VarRef{0}) == 2 * x * y);
  CHECK(partial_derivative(y, VarRef{0}).is_zero());
  CHECK(partial_derivative(x.pow(3) + x * y.pow(2), VarRef{1}) == 2 * x * y);
  CHECK_THROWS_AS(partial_derivative(x, VarRef{7}), DomainError);
}

TEST_CASE_FIXTURE(Fixture, "substitution") {
  Chart jet = make_chart({"x0", "x1", "t"}, {{0}, {0}, {0}});
  Poly x0 = jet.var("x0"), x1 = jet.var("x1"), t = jet.var("t");
  CHECK(substitute(x, {{VarRef{0}, x0 + t * x1}}) == x0 + t * x1);
  CHECK(substitute(x.pow(2), {{VarRef{0}, x0 + t * x1}}) == x0.pow(2) + 2 * t * x0 * x1 + t.pow(2) * x1.pow(2));
  CHECK_THROWS_AS(substitute(x * y, {{VarRef{0}, x0}}), DomainError);
}

TEST_CASE_FIXTURE(Fixture, "weights and homogeneous parts") {
  CHECK(weight_of_monomial(Monomial::variable(VarRef{1}) * Monomial::variable(VarRef{2}), m, 0) == 3);
  CHECK(weight_of_monomial(Monomial{}, m, 0) == 0);
  CHECK(weight_of_monomial(Monomial::variable(VarRef{1}, 2), m, 0) == 2);

  auto parts = homogeneous_components(x + y, m, 0);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == x);
  CHECK(parts[1] == y);
  CHECK(homogeneous_components(Poly(0, m.token()), m, 0).empty());
  auto one = homogeneous_components(y.pow(2) + z + x * z, m, 0);
  REQUIRE(one.size() == 1);
  CHECK(one.begin()->first == 2);
}

TEST_CASE_FIXTURE(Fixture, "chart mismatch") {
  Chart other = make_chart({"x"}, {{0}});
  CHECK_THROWS_AS(x + other.var("x"), ChartMismatch);
  CHECK_THROWS_AS(x * other.var("x"), ChartMismatch);
  // constants are chart-free
  CHECK(x + Poly(2) == x + m.constant(2));
}

TEST_CASE_FIXTURE(Fixture, "canonical form does not depend on evaluation order") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 120; ++trial) {
    std::vector<Poly> leaves;
    for (int i = 0; i < 5; ++i) leaves.push_back(random_poly(rng, m, 3, 2));
    // ((a+b)*c + d)*e versus e*(d + c*(b+a)) with shuffled internal order
    Poly l = ((leaves[0] + leaves[1]) * leaves[2] + leaves[3]) * leaves[4];
    Poly r = leaves[4] * (leaves[3] + leaves[2] * (leaves[1] + leaves[0]));
    Poly s = leaves[0] * leaves[2] * leaves[4] + leaves[3] * leaves[4] + leaves[4] * leaves[1] * leaves[2];
    CHECK(l == r);
    CHECK(l == s);
    CHECK(l.hash() == s.hash());
  }
}

TEST_CASE_FIXTURE(Fixture, "ring axioms on random inputs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Poly a = random_poly(rng, m, 4, 3), b = random_poly(rng, m, 4, 3), c = random_poly(rng, m, 3, 2);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK(a * Poly(1) == a);
    CHECK((a - a).is_zero());
    // Leibniz rule for the formal derivative
    for (std::uint32_t v = 0; v < 3; ++v)
      CHECK(partial_derivative(a * b, VarRef{v}) ==
            partial_derivative(a, VarRef{v}) * b + a * partial_derivative(b, VarRef{v}));
    // weight additivity in every monomial product
    for (const auto& ta : a.terms())
      for (const auto& tb : b.terms())
        CHECK(weight_of_monomial(ta.mono * tb.mono, m, 0) ==
              weight_of_monomial(ta.mono, m, 0) + weight_of_monomial(tb.mono, m, 0));
    // homogeneous parts sum back
    Poly sum(0, m.token());
    for (const auto& [w, part] : homogeneous_components(a, m, 0)) sum += part;
    CHECK(sum == a);
  }
}

TEST_CASE_FIXTURE(Fixture, "substitution composes") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    Poly f = random_poly(rng, m, 4, 3);
    std::map<VarRef, Poly> sigma, tau;
    for (std::uint32_t v = 0; v < 3; ++v) {
      sigma[VarRef{v}] = random_poly(rng, m, 2, 2);
      tau[VarRef{v}] = random_poly(rng, m, 2, 1);
    }
    std::map<VarRef, Poly> composed;
    for (const auto& [v, img] : sigma) composed[v] = substitute(img, tau);
    CHECK(substitute(substitute(f, sigma), tau) == substitute(f, composed));
  }
}

TEST_CASE_FIXTURE(Fixture, "self aliasing") {
  Poly a = x + y;
  a += a;
  CHECK(a == 2 * x + 2 * y);
  a *= a;
  CHECK(a == 4 * (x + y).pow(2));
}

}
