#pragma once

// Exact multivariate polynomials over the rationals.
//
// A Poly is a sparse, canonically ordered sum of terms.  Every Poly is bound
// to a chart through a ChartToken; the unbound token (id 0) may only carry
// constants and combines with any chart.

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gradcalc {

using Rational = mpq_class;

/// Canonical rational num/den; throws DomainError when den == 0.
Rational make_rational(long num, long den = 1);
/// Parses "3", "-7", "3/4".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Chart-local variable index.
struct VarRef {
  std::uint32_t index = 0;
  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

/// Identity of the chart a Poly lives on, together with the number of
/// variables it declares.
struct ChartToken {
  std::uint64_t id = 0;
  std::uint32_t nvars = 0;
  friend bool operator==(const ChartToken&, const ChartToken&) = default;
  bool bound() const { return id != 0; }
};

/// Returns the common token of a and b, or throws ChartMismatch.
ChartToken common_token(const ChartToken& a, const ChartToken& b);

class Monomial {
 public:
  struct Factor {
    std::uint32_t var;
    std::uint32_t exp;
    friend bool operator==(const Factor&, const Factor&) = default;
  };
  using Storage = boost::container::small_vector<Factor, 4>;

  Monomial() = default;
  static Monomial variable(VarRef v, std::uint32_t exp = 1);
  /// Factors must be sorted by var with positive exponents.
  static Monomial from_sorted(Storage factors);

  std::span<const Factor> factors() const { return {f_.data(), f_.size()}; }
  std::uint32_t exponent(VarRef v) const;
  std::uint64_t total_degree() const;
  bool is_one() const { return f_.empty(); }
  /// Largest variable index + 1, 0 for the unit monomial.
  std::uint32_t span_end() const { return f_.empty() ? 0 : f_.back().var + 1; }

  Monomial operator*(const Monomial& o) const;
  /// Removes one power of v; caller guarantees exponent(v) > 0.
  Monomial divided_by(VarRef v) const;
  /// Drops v entirely.
  Monomial without(VarRef v) const;

  /// Graded-lexicographic comparison over VarRef.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.f_ == b.f_; }

  std::size_t hash() const;

 private:
  Storage f_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

class Poly {
 public:
  struct Term {
    Monomial mono;
    Rational coef;
  };

  Poly() = default;
  Poly(const Rational& c, ChartToken token = {});  // NOLINT(implicit)
  Poly(long c, ChartToken token = {}) : Poly(Rational(c), token) {}  // NOLINT(implicit)

  static Poly variable(ChartToken token, VarRef v);
  static Poly monomial(ChartToken token, Monomial m, Rational coef);
  /// Sorts, merges like terms and drops zeros.
  static Poly from_terms(ChartToken token, std::vector<Term> terms);

  ChartToken token() const { return token_; }
  /// Same polynomial on another chart token.  Non-constant polys may only be
  /// rebound to a token with at least as many variables.
  Poly rebind(ChartToken token) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Rational constant_term() const;
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  std::uint64_t total_degree() const;
  std::uint32_t span_end() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  friend Poly operator*(Poly a, long c) { return a *= Rational(c); }
  friend Poly operator*(long c, Poly a) { return a *= Rational(c); }
  Poly operator-() const;

  Poly pow(unsigned e) const;

  /// Equal iff the term maps coincide and the tokens are compatible.
  friend bool operator==(const Poly& a, const Poly& b);

  std::size_t hash() const;

 private:
  ChartToken token_;
  std::vector<Term> terms_;  // ascending grlex, unique, nonzero
};

struct PolyHash {
  std::size_t operator()(const Poly& p) const { return p.hash(); }
};

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);

/// Formal partial derivative; throws DomainError when v is outside the
/// chart of f.
Poly partial_derivative(const Poly& f, VarRef v);

/// Simultaneous substitution of variables by polynomials.  Every variable
/// occurring in f must be assigned; all images must share one chart.
Poly substitute(const Poly& f, const std::map<VarRef, Poly>& assignment);

/// Sum of exponent * weight; var_weights[i] is the weight of variable i.
long weight_of_monomial(const Monomial& m, std::span<const int> var_weights);

/// Splits f by weight.  The returned parts sum to f.
std::map<long, Poly> homogeneous_components(const Poly& f, std::span<const int> var_weights);

/// Exact evaluation; point[i] is the value of variable i.
Rational evaluate(const Poly& f, std::span<const Rational> point);

/// Canonical text, terms in descending grlex order, e.g. "x^2 + 2*x*y - 1/2".
/// names[i] is the printed name of variable i.
std::string render(const Poly& f, std::span<const std::string> names);

}  // namespace gradcalc
