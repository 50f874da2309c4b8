#pragma once

// Seeded random polynomials and tensors for property tests and the
// check-suite.  Everything is a pure function of the seed.

#include "gradcalc/report.hpp"
#include "gradcalc/tensor.hpp"

namespace gradcalc {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  Rng& rng() { return rng_; }

  /// Nonzero small integer or a fraction with denominator 2 or 3.
  Rational coefficient(bool allow_fractions = true);

  /// Up to max_terms random monomials of total degree <= max_degree; may be 0
  /// unless nonzero is set.
  Poly poly(const Chart& chart, int max_degree, int max_terms, bool nonzero = false);

  /// Random polynomial all of whose monomials have weight w in the component
  /// (total degree <= max_degree).  Returns 0 if no such monomial exists.
  Poly homogeneous_poly(const Chart& chart, int component, long w, int max_degree, int max_terms);

  /// Random tensor with about `density` stored entries.
  TensorField tensor(const Chart& chart, int q, int p, Symmetry contra, Symmetry cov, int max_degree, int density);

  /// Random tensor homogeneous of degree w in the component; coefficients are
  /// chosen per index so that each entry has the right weight.
  TensorField homogeneous_tensor(const Chart& chart, int component, int q, int p, Symmetry contra, Symmetry cov,
                                 long w, int max_degree, int density);

  TensorField vector_field(const Chart& chart, int max_degree, int density = 3) {
    return tensor(chart, 1, 0, Symmetry::none, Symmetry::none, max_degree, density);
  }
  TensorField form(const Chart& chart, int p, int max_degree, int density = 3) {
    return tensor(chart, 0, p, Symmetry::none, Symmetry::antisymmetric, max_degree, density);
  }
  TensorField multivector(const Chart& chart, int k, int max_degree, int density = 3) {
    return tensor(chart, k, 0, Symmetry::antisymmetric, Symmetry::none, max_degree, density);
  }
  TensorField vector_valued_form(const Chart& chart, int k, int max_degree, int density = 3) {
    return tensor(chart, 1, k, Symmetry::none, Symmetry::antisymmetric, max_degree, density);
  }

 private:
  Index random_index(const Chart& chart, int slots);
  Rng rng_;
};

}  // namespace gradcalc
