#pragma once

// (q,p)-tensor fields with polynomial components.
//
// Components are keyed by an index tuple holding the q contravariant
// indices followed by the p covariant ones.  A block tagged symmetric keeps
// only non-decreasing tuples, an antisymmetric block only strictly
// increasing ones; the stored value is always the full component at that
// tuple.  With the shuffle convention dx^dy = dx ox dy - dy ox dx this makes
// the coefficient of dx^I equal to the stored value.

#include <functional>
#include <map>

#include <boost/container/small_vector.hpp>

#include "gradcalc/chart.hpp"

namespace gradcalc {

enum class Symmetry { none, symmetric, antisymmetric };

using Index = boost::container::small_vector<std::uint32_t, 6>;

class TensorField {
 public:
  using Components = std::map<Index, Poly>;

  TensorField() = default;
  TensorField(Chart chart, int q, int p, Symmetry contra = Symmetry::none, Symmetry cov = Symmetry::none);

  static TensorField scalar(const Chart& chart, const Poly& f);
  /// d/dx^v
  static TensorField vector_basis(const Chart& chart, VarRef v);
  /// dx^v
  static TensorField covector_basis(const Chart& chart, VarRef v);

  const Chart& chart() const { return chart_; }
  int q() const { return q_; }
  int p() const { return p_; }
  Symmetry contra_symmetry() const { return contra_; }
  Symmetry cov_symmetry() const { return cov_; }
  const Components& components() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// The (0,0) value; throws ValenceError otherwise.
  Poly as_scalar() const;

  /// Full component at any index tuple.
  Poly component(const Index& idx) const;
  void for_each_expanded(const std::function<void(const Index&, const Poly&)>& fn) const;
  Components expanded() const;
  /// Every full index represented by one stored index, with its sign.
  void for_each_expansion_of(const Index& stored, const std::function<void(const Index&, int)>& fn) const;

  /// Adds f at idx, moving idx into canonical order (with sign for
  /// antisymmetric blocks, dropping repeated antisymmetric indices).
  void add(Index idx, const Poly& f);
  /// Adds f only if idx is already canonical; used when feeding a full
  /// component table into a tagged tensor.
  void add_full(const Index& idx, const Poly& f);

  /// Same tensor with other tags.  Throws ValenceError when the content does
  /// not have the requested symmetry.
  TensorField with_symmetry(Symmetry contra, Symmetry cov) const;
  TensorField untagged() const { return with_symmetry(Symmetry::none, Symmetry::none); }
  bool has_symmetry(Symmetry contra, Symmetry cov) const;

  TensorField& operator+=(const TensorField& o);
  TensorField& operator-=(const TensorField& o);
  TensorField& operator*=(const Rational& c);
  TensorField& operator*=(const Poly& f);
  friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
  friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
  friend TensorField operator*(TensorField a, const Rational& c) { return a *= c; }
  friend TensorField operator*(const Rational& c, TensorField a) { return a *= c; }
  friend TensorField operator*(const Poly& f, TensorField a) { return a *= f; }
  TensorField operator-() const;

  /// Applies fn to every stored coefficient (zero results are dropped).
  TensorField map_coefficients(const std::function<Poly(const Poly&)>& fn) const;

  /// Same chart and valence, and the same expanded content.
  friend bool operator==(const TensorField& a, const TensorField& b);

 private:
  void check_index(const Index& idx) const;

  Chart chart_;
  int q_ = 0;
  int p_ = 0;
  Symmetry contra_ = Symmetry::none;
  Symmetry cov_ = Symmetry::none;
  Components c_;
};

/// Throws ChartMismatch unless a and b live on the same chart.
void require_same_chart(const TensorField& a, const TensorField& b);

/// Sum_i w_i x^i d/dx^i in one grading component.
TensorField weight_vector_field(const Chart& chart, int component);

TensorField tensor_product(const TensorField& a, const TensorField& b);
/// Antisymmetric product of two forms or two multivectors (scalars allowed).
TensorField wedge(const TensorField& a, const TensorField& b);
/// Trace over one contravariant and one covariant slot (0-based).
TensorField contract(const TensorField& k, int contra_slot, int cov_slot);
/// i_X K for an (l,0) tensor X: pairs X's slots with K's first l covariant slots.
TensorField insert_multivector(const TensorField& x, const TensorField& k);
/// i_w K for a (0,u) tensor w: pairs w's slots with K's first u contravariant slots.
TensorField insert_form(const TensorField& w, const TensorField& k);

/// deg(coefficient) + sum of covariant weights - sum of contravariant weights.
Degree degree_of_tensor(const TensorField& k, int component);

/// (N1 o N2)^i_j = N1^i_k N2^k_j for (1,1) tensors stored as N^i_j d/dx^i ox dx^j.
TensorField compose_11(const TensorField& n1, const TensorField& n2);
TensorField id_11(const Chart& chart);

/// Swaps the two slots of a (2,0) or (0,2) tensor.
TensorField transpose(const TensorField& k);

/// Normalized (1/k!) projection of every block onto the requested symmetry.
TensorField symmetrize(const TensorField& k, Symmetry contra, Symmetry cov);

}  // namespace gradcalc
