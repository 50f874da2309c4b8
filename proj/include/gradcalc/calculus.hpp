#pragma once

// Differential operators and brackets on polynomial tensor fields.

#include "gradcalc/tensor.hpp"

namespace gradcalc {

/// X(f) = X^j d_j f.
Poly apply_vector_field(const TensorField& x, const Poly& f);

/// d on antisymmetric covariant tensors (functions included).
TensorField exterior_derivative(const TensorField& w);

TensorField lie_bracket(const TensorField& x, const TensorField& y);

/// Coordinate Lie derivative of an arbitrary (q,p) tensor; keeps tags.
TensorField lie_derivative(const TensorField& x, const TensorField& k);

/// i_X w for a vector field X and a form w (first slot).
TensorField interior(const TensorField& x, const TensorField& w);

/// Schouten-Nijenhuis bracket of a k-vector and an l-vector (k, l >= 1).
TensorField schouten_bracket(const TensorField& a, const TensorField& b);

/// Frolicher-Nijenhuis bracket of vector valued forms, i.e. (1,k) tensors
/// antisymmetric in the covariant slots.
TensorField fn_bracket(const TensorField& a, const TensorField& b);

/// Nijenhuis-Richardson bracket of vector valued forms.
TensorField nr_bracket(const TensorField& a, const TensorField& b);

/// [N,N]_FN for a (1,1) tensor.
TensorField nijenhuis_torsion(const TensorField& n);

/// C(L,N) as a (2,1) tensor with components C^{ij}_s.
TensorField concomitant(const TensorField& lambda, const TensorField& n);

/// (N L)^{ij} = L^{il} N^j_l.
TensorField n_lambda(const TensorField& n, const TensorField& lambda);

/// Checks that t is a vector valued form and returns it with an
/// antisymmetric covariant tag.
TensorField as_vector_valued_form(const TensorField& t);

}  // namespace gradcalc
