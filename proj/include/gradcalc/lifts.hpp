#pragma once

// Morimoto lifts to the higher tangent bundle T^r.
//
// f^(l) is the coefficient of t^l in f(sum_mu t^mu x_mu); (dx)^(l) = dx_l
// and (d/dx)^(l) = d/dx_{r-l}.  Lifts outside 0..r vanish.

#include <array>
#include <map>
#include <vector>

#include "gradcalc/tensor.hpp"

namespace gradcalc {

class LiftContext {
 public:
  LiftContext(Chart base, int r);
  /// Reuses an existing prolongation of `base`.
  LiftContext(Chart base, Chart prolonged);

  const Chart& base() const { return base_; }
  int r() const { return r_; }
  /// T^r chart; the base chart itself when r == 0.
  const Chart& prolonged() const { return prolonged_; }
  /// x^i_mu on the prolonged chart.
  VarRef lifted(VarRef v, int mu) const;
  /// Index of the canonical T^r grading component on the prolonged chart.
  int canonical_component() const;

  /// All lifts f^(0..r) at once.
  std::vector<Poly> lift_all(const Poly& f) const;

 private:
  Chart base_;
  int r_ = 0;
  Chart prolonged_;
  Chart scratch_;  // prolonged variables plus the deformation parameter t
};

Poly lift_function(const Poly& f, int lambda, const LiftContext& ctx);
TensorField lift_one_form(const TensorField& w, int lambda, const LiftContext& ctx);
TensorField lift_vector_field(const TensorField& x, int lambda, const LiftContext& ctx);
/// Leibniz rule over all tensor factors; keeps symmetry tags.
TensorField lift_tensor(const TensorField& k, int lambda, const LiftContext& ctx);
inline TensorField complete_lift(const TensorField& k, const LiftContext& ctx) { return lift_tensor(k, ctx.r(), ctx); }

/// sum_mu sum_i w_i x^i_mu d/dx^i_mu for one base grading component.
TensorField lift_weight_vector_field(const LiftContext& ctx, int component);

struct Distribution {
  Chart chart;
  std::vector<TensorField> generators;
};

Distribution make_distribution(std::vector<TensorField> generators);
Distribution lift_distribution(const Distribution& d, const LiftContext& ctx);

/// Gamma^A_{kB} with base coordinates x^k and fibre coordinates y^A.
struct LinearConnection {
  Chart chart;
  std::vector<VarRef> base;
  std::vector<VarRef> fiber;
  /// keyed by positions (A, k, B) in fiber/base
  std::map<std::array<std::uint32_t, 3>, Poly> gamma;

  Poly christoffel(std::uint32_t a, std::uint32_t k, std::uint32_t b) const;
  /// X_k = d/dx^k - Gamma^A_{kB} y^B d/dy^A
  TensorField horizontal_field(std::uint32_t k) const;
};

LinearConnection make_linear_connection(Chart chart, std::vector<VarRef> base, std::vector<VarRef> fiber,
                                        std::map<std::array<std::uint32_t, 3>, Poly> gamma);

/// Lifted symbols Gamma^{(A,rho)}_{(k,l)(B,m)} = (Gamma^A_{kB})^(rho-l-m) on
/// T^r of the bundle chart; base/fibre lists are ordered mu-major.
LinearConnection lift_linear_connection(const LinearConnection& c, const LiftContext& ctx);

/// Gamma^i_{kj} keyed by (i, k, j): nabla_{d_k} d_j = Gamma^i_{kj} d_i.
struct AffineConnection {
  Chart chart;
  std::map<std::array<std::uint32_t, 3>, Poly> gamma;

  Poly christoffel(std::uint32_t i, std::uint32_t k, std::uint32_t j) const;
};

AffineConnection make_affine_connection(Chart chart, std::map<std::array<std::uint32_t, 3>, Poly> gamma);

/// Morimoto's complete lift to T^r M.
AffineConnection lift_affine_connection(const AffineConnection& c, const LiftContext& ctx);

/// (nabla_X Y)^k = X^j d_j Y^k + Gamma^k_{jl} X^j Y^l
TensorField covariant_derivative(const AffineConnection& c, const TensorField& x, const TensorField& y);

/// The affine connection seen as a linear connection on the tangent chart.
LinearConnection as_linear_connection(const AffineConnection& c, const Chart& tangent);

}  // namespace gradcalc
