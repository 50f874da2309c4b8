#pragma once

// Independent reference computations.  Nothing here calls the bracket or
// lift code of the engine; the oracles work directly on polynomials and
// component tables so they can be used to cross-check it.

#include <map>

#include "gradcalc/lifts.hpp"
#include "gradcalc/report.hpp"

namespace gradcalc {

/// (1/l!) d^l/dt^l f(x(t)) at t = 0 with x^i(t) = sum_mu t^mu x^i_mu.
/// Throws DomainError unless 0 <= lambda <= r.
Poly taylor_lift_oracle(const Poly& f, int lambda, const LiftContext& ctx);

/// Full nonzero component values of K at a point (one rational per chart
/// variable).
std::map<Index, Rational> evaluate_tensor_at(const TensorField& k, std::span<const Rational> point);
/// Same, with the point given by variable.
std::map<Index, Rational> evaluate_tensor_at(const TensorField& k, const std::map<VarRef, Rational>& point);

/// Evaluates both sides at the plan's points; any difference fails with the
/// point as witness.
CheckReport identity_spot_check(const TensorField& lhs, const TensorField& rhs, const SamplePlan& plan);

/// C(L,N)(a,b) = [a,b]_{NL} - ([N^t a,b]_L + [a,N^t b]_L - N^t [a,b]_L) with
/// [a,b]_P = L_{P#a} b - L_{P#b} a - d(P(a,b)).  The sharp map pairs the
/// second contravariant slot, (P#a)^i = P^{ij} a_j, and P(a,b) = P^{ji} a_i b_j.
/// With the first slot instead, the result is the negative of the
/// coordinate concomitant, so the slot was flipped once and frozen here.
TensorField koszul_concomitant_oracle(const TensorField& lambda, const TensorField& n, const TensorField& alpha,
                                      const TensorField& beta);

/// <C, a (x) b>: (C(a,b))_s = C^{ij}_s a_i b_j for a (2,1) tensor C.
TensorField pair_concomitant(const TensorField& c, const TensorField& alpha, const TensorField& beta);

/// Schouten bracket through the odd-variable picture: a k-vector is a
/// polynomial in anticommuting theta_i and
///   [P,Q] = sum_i dP/dtheta_i dQ/dx^i - (-1)^{(p-1)(q-1)} dQ/dtheta_i dP/dx^i
/// with right derivatives in theta.
TensorField schouten_oracle(const TensorField& a, const TensorField& b);

/// [N,N]_FN(d_i, d_j) = 2([Nd_i, Nd_j] - N[Nd_i, d_j] - N[d_i, Nd_j] + N^2[d_i, d_j]),
/// returned as a (1,2) tensor antisymmetric in the covariant slots.
TensorField torsion_oracle(const TensorField& n);

}  // namespace gradcalc
