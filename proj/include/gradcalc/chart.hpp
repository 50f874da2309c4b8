#pragma once

// Graded coordinate charts.
//
// Each variable carries one integer weight per grading component, so double
// and n-fold graded bundles, GrL-bundles and higher tangent prolongations
// all share one representation.  Charts are immutable and compared by
// identity: two charts built from the same data are still different charts.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradcalc/poly.hpp"

namespace gradcalc {

/// Whether a grading component is N-graded (all weights >= 0) or Z-graded.
enum class GradingKind { natural, integer };

/// Homogeneity degree of a function or tensor in one grading component.
/// The zero object is homogeneous of every degree ("any").
class Degree {
 public:
  enum class Kind { any, homogeneous, inhomogeneous };

  static Degree any() { return Degree(Kind::any, 0); }
  static Degree of(long w) { return Degree(Kind::homogeneous, w); }
  static Degree inhomogeneous() { return Degree(Kind::inhomogeneous, 0); }

  Kind kind() const { return kind_; }
  bool is_any() const { return kind_ == Kind::any; }
  bool is_homogeneous() const { return kind_ != Kind::inhomogeneous; }
  /// Value for a homogeneous degree; 0 for "any".
  long value() const { return value_; }
  /// True if the object is homogeneous of weight w (always for zero).
  bool matches(long w) const { return kind_ == Kind::any || (kind_ == Kind::homogeneous && value_ == w); }
  /// Combines the degrees of two summands.
  Degree merge(const Degree& o) const;
  std::string to_string() const;

  friend bool operator==(const Degree&, const Degree&) = default;

 private:
  Degree(Kind k, long v) : kind_(k), value_(v) {}
  Kind kind_;
  long value_;
};

class Chart {
 public:
  /// Provenance of a variable of a prolonged chart: x^i_mu.
  struct Origin {
    VarRef base;
    int order;
  };

  /// An invalid chart; only useful as a placeholder.
  Chart() = default;

  bool valid() const { return static_cast<bool>(d_); }
  std::uint64_t id() const;
  ChartToken token() const;
  const std::string& label() const;

  std::size_t size() const;
  int grading_count() const;
  GradingKind kind(int component) const;
  /// Maximal |weight| over the variables in a component.
  int degree(int component) const;
  /// Throws DomainError unless 0 <= component < grading_count().
  void check_component(int component) const;

  const std::string& name(VarRef v) const;
  std::span<const std::string> names() const;
  int weight(VarRef v, int component) const;
  std::vector<int> weight_vector(VarRef v) const;
  /// Weights of all variables in one component, indexed by variable.
  std::span<const int> weights_in(int component) const;

  std::optional<VarRef> find(std::string_view name) const;
  VarRef at(std::string_view name) const;  // throws DomainError
  Poly var(VarRef v) const;
  Poly var(std::string_view name) const { return var(at(name)); }
  Poly constant(const Rational& c) const { return Poly(c, token()); }
  void check_var(VarRef v) const;

  /// Grading component that carries the vector bundle structure, if any.
  std::optional<int> vb_component() const;

  /// For a prolonged chart T^r(base): the base chart, r and the origin of
  /// each variable.  nullptr / 0 otherwise.
  const Chart* prolonged_from() const;
  int prolongation_order() const;
  Origin origin(VarRef v) const;
  /// The variable x^i_mu of a prolonged chart.
  VarRef prolonged_var(VarRef base, int mu) const;

  /// For tangent/cotangent-type charts: the base chart and, for each fibre
  /// variable, the base coordinate it is attached to.
  const Chart* bundle_base() const;
  std::optional<VarRef> partner(VarRef v) const;

  friend bool operator==(const Chart& a, const Chart& b) { return a.d_ == b.d_; }

  struct Data;

 private:
  explicit Chart(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  friend Chart build_chart(Data&& d);
  std::shared_ptr<const Data> d_;
};

/// Builds a chart.  weights[i] is the weight vector of names[i]; all vectors
/// have the same positive length.  When kinds is empty a component is
/// N-graded iff all its weights are non-negative.
Chart make_chart(std::vector<std::string> names, std::vector<std::vector<int>> weights,
                 std::vector<GradingKind> kinds = {}, std::string label = "M",
                 std::optional<int> vb_component = std::nullopt);

/// T^r chart with variables x^i_mu (mu = 0..r, "_0" suppressed), ordered
/// mu-major.  x^i_mu keeps the weights of x^i and gets mu in one appended
/// component (the canonical T^r grading).
Chart prolong_chart(const Chart& chart, int r);

/// T*F: appends p_x with weights -w(x) and 1 in a new vector bundle component.
Chart cotangent_chart(const Chart& chart);

/// T*[k]F: p_x gets k - w(x) in `component`, -w(x) elsewhere, plus 1 in a new
/// vector bundle component.  Throws if k - w(x) < 0 for some x.
Chart phase_shifted_cotangent_chart(const Chart& chart, int k, int component = 0);

/// TF: appends xdot with the weights of x and 1 in a new vector bundle component.
Chart tangent_chart(const Chart& chart);

/// F*[k] of a GrL chart: base variables (vector bundle weight 0) stay, every
/// fibre variable of graded weight s is replaced by its dual p_ of graded
/// weight k - s.  Requires a designated vector bundle component.
Chart shifted_dual_grl_chart(const Chart& chart, int k, int graded_component = 0);

long weight_of_monomial(const Monomial& m, const Chart& chart, int component);
std::map<long, Poly> homogeneous_components(const Poly& f, const Chart& chart, int component);
Degree degree_of_function(const Poly& f, const Chart& chart, int component);

}  // namespace gradcalc
