#pragma once

// Decision procedures for weighted structures.
//
// Exact checks compare tensors symbolically.  Distribution checks evaluate
// at sampled rational points and compare exact ranks, so a pass there only
// means "no counterexample at the sampled points".

#include <vector>

#include "gradcalc/lifts.hpp"
#include "gradcalc/report.hpp"

namespace gradcalc {

/// L_grad K = -(q-1) k K in one grading component.
CheckReport is_weighted_tensor(const TensorField& k, int component, int degree);

/// [L,L]_S = 0 for an antisymmetric (2,0) tensor.
CheckReport is_poisson(const TensorField& lambda);
/// Poisson and of degree -k.
CheckReport is_weighted_poisson(const TensorField& lambda, int k, int component);

CheckReport is_nijenhuis(const TensorField& n);
/// Nijenhuis and of degree 0.
CheckReport is_weighted_nijenhuis(const TensorField& n, int component);

CheckReport is_almost_complex(const TensorField& n);
CheckReport is_almost_product(const TensorField& n);
CheckReport is_almost_tangent(const TensorField& n);

/// Weighted Poisson of degree k, weighted Nijenhuis, N L skew and C(L,N) = 0.
CheckReport is_weighted_pn(const TensorField& lambda, const TensorField& n, int k, int component);

/// Component matrix of a bundle map, rows and columns indexed by chart
/// variables.
struct BundleMatrix {
  Chart chart;
  std::vector<std::vector<Poly>> entries;
};

/// entries[i][j] = L^{ij}
BundleMatrix sharp_map(const TensorField& lambda);
/// entries[i][j] = w_{ij}
BundleMatrix flat_map(const TensorField& omega);

/// For L of degree -k: on T*[k]F every sum_l p_l L^{lj} must be homogeneous
/// of the weight of x^j.
CheckReport sharp_degree_report(const TensorField& lambda, int k, int component);

/// The bivector whose sharp map inverts the flat map of a nondegenerate
/// 2-form with constant components.
TensorField inverse_bivector(const TensorField& omega);

/// Rank of the generators at a point, by exact row reduction.
std::size_t rank_at_point(const Distribution& d, std::span<const Rational> point);

/// Rank of the span of vector fields at a point.
std::size_t rank_of_fields(const std::vector<TensorField>& fields, std::span<const Rational> point);

CheckReport is_weighted_distribution(const Distribution& d, int component, const SamplePlan& plan = {});
CheckReport is_involutive(const Distribution& d, const SamplePlan& plan = {});

/// Degree k and a nonvanishing a ^ (da)^n on a chart of dimension 2n+1.
CheckReport is_weighted_contact(const TensorField& alpha, int k, int component);

/// Degree of a section of the vector bundle structure of a GrL chart, given
/// by one polynomial in base variables per fibre variable.  A fibre variable
/// of graded weight s whose component has degree d contributes d - s; the
/// section is homogeneous when all contributions agree.
Degree section_degree(const Chart& grl, const std::map<VarRef, Poly>& components, int graded_component = 0);

/// A section of a vector bundle whose dual carries a linear bivector; the
/// coefficients are indexed like the fibre variables of the dual chart and
/// depend on base variables only.
using Section = std::vector<Poly>;

/// Fibre variables of a chart with a vector bundle component, in chart order.
std::vector<VarRef> fibre_variables(const Chart& chart);

/// The linear function iota(X) = sum_a X^a xi_a on the dual chart.
Poly linear_function(const Chart& dual, const Section& x);

/// [X,Y] defined by iota([X,Y]) = {iota X, iota Y} with {f,g} = L(df, dg).
Section algebroid_bracket(const TensorField& lambda, const Section& x, const Section& y);

}  // namespace gradcalc
