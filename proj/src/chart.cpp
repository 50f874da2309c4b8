#include "gradcalc/chart.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <set>

#include "gradcalc/error.hpp"

namespace gradcalc {

struct Chart::Data {
  std::uint64_t id = 0;
  std::string label;
  std::vector<std::string> names;
  std::vector<std::vector<int>> weights;  // [component][variable]
  std::vector<GradingKind> kinds;
  std::vector<int> degrees;
  std::optional<int> vb;

  std::optional<Chart> prolonged_base;
  int order = 0;
  std::vector<Origin> origins;

  std::optional<Chart> bundle_base;
  std::vector<std::optional<VarRef>> partners;
};

namespace {

std::atomic<std::uint64_t> next_id{1};

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

}  // namespace

Chart build_chart(Chart::Data&& d) {
  if (d.names.empty()) throw DomainError("chart needs at least one variable");
  if (d.weights.empty()) throw DomainError("chart needs at least one grading component");
  std::set<std::string> seen;
  for (const auto& n : d.names) {
    if (!valid_identifier(n)) throw DomainError("invalid variable name '" + n + "'");
    if (!seen.insert(n).second) throw DomainError("duplicate variable name '" + n + "'");
  }
  const auto ncomp = d.weights.size();
  if (!d.kinds.empty() && d.kinds.size() != ncomp) throw DomainError("grading flags do not match weight vectors");
  if (d.kinds.empty()) d.kinds.assign(ncomp, GradingKind::natural);
  d.degrees.assign(ncomp, 0);
  for (std::size_t c = 0; c < ncomp; ++c) {
    if (d.weights[c].size() != d.names.size()) throw DomainError("weight vectors have unequal lengths");
    for (int w : d.weights[c]) {
      if (w < 0 && d.kinds[c] == GradingKind::natural)
        throw DomainError("negative weight in N-graded component " + std::to_string(c));
      d.degrees[c] = std::max(d.degrees[c], std::abs(w));
    }
  }
  if (d.vb && (*d.vb < 0 || static_cast<std::size_t>(*d.vb) >= ncomp))
    throw DomainError("vector bundle component out of range");
  d.id = next_id.fetch_add(1);
  return Chart(std::make_shared<const Chart::Data>(std::move(d)));
}

// ---------------------------------------------------------------- Degree

Degree Degree::merge(const Degree& o) const {
  if (kind_ == Kind::any) return o;
  if (o.kind_ == Kind::any) return *this;
  if (kind_ == Kind::inhomogeneous || o.kind_ == Kind::inhomogeneous) return inhomogeneous();
  return value_ == o.value_ ? *this : inhomogeneous();
}

std::string Degree::to_string() const {
  switch (kind_) {
    case Kind::any:
      return "any";
    case Kind::inhomogeneous:
      return "inhomogeneous";
    default:
      return std::to_string(value_);
  }
}

// ---------------------------------------------------------------- Chart

namespace {
const Chart::Data& data(const std::shared_ptr<const Chart::Data>& d) {
  if (!d) throw DomainError("use of an invalid chart");
  return *d;
}
}  // namespace

std::uint64_t Chart::id() const { return d_ ? d_->id : 0; }
ChartToken Chart::token() const {
  const auto& d = data(d_);
  return ChartToken{d.id, static_cast<std::uint32_t>(d.names.size())};
}
const std::string& Chart::label() const { return data(d_).label; }
std::size_t Chart::size() const { return data(d_).names.size(); }
int Chart::grading_count() const { return static_cast<int>(data(d_).weights.size()); }

void Chart::check_component(int c) const {
  if (c < 0 || c >= grading_count())
    throw DomainError("grading component " + std::to_string(c) + " out of range");
}

GradingKind Chart::kind(int c) const {
  check_component(c);
  return d_->kinds[c];
}

int Chart::degree(int c) const {
  check_component(c);
  return d_->degrees[c];
}

void Chart::check_var(VarRef v) const {
  if (v.index >= size()) throw DomainError("variable index " + std::to_string(v.index) + " out of range");
}

const std::string& Chart::name(VarRef v) const {
  check_var(v);
  return d_->names[v.index];
}

std::span<const std::string> Chart::names() const { return data(d_).names; }

int Chart::weight(VarRef v, int c) const {
  check_var(v);
  check_component(c);
  return d_->weights[c][v.index];
}

std::vector<int> Chart::weight_vector(VarRef v) const {
  check_var(v);
  std::vector<int> w;
  for (const auto& comp : d_->weights) w.push_back(comp[v.index]);
  return w;
}

std::span<const int> Chart::weights_in(int c) const {
  check_component(c);
  return d_->weights[c];
}

std::optional<VarRef> Chart::find(std::string_view name) const {
  const auto& n = data(d_).names;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] == name) return VarRef{static_cast<std::uint32_t>(i)};
  return std::nullopt;
}

VarRef Chart::at(std::string_view name) const {
  auto v = find(name);
  if (!v) throw DomainError(std::string(name) + " not in " + label());
  return *v;
}

Poly Chart::var(VarRef v) const {
  check_var(v);
  return Poly::variable(token(), v);
}

std::optional<int> Chart::vb_component() const { return data(d_).vb; }

const Chart* Chart::prolonged_from() const {
  const auto& d = data(d_);
  return d.prolonged_base ? &*d.prolonged_base : nullptr;
}

int Chart::prolongation_order() const { return data(d_).order; }

Chart::Origin Chart::origin(VarRef v) const {
  check_var(v);
  if (d_->origins.empty()) return Origin{v, 0};
  return d_->origins[v.index];
}

VarRef Chart::prolonged_var(VarRef base, int mu) const {
  const auto& d = data(d_);
  if (!d.prolonged_base) throw DomainError("chart " + d.label + " is not a prolongation");
  d.prolonged_base->check_var(base);
  if (mu < 0 || mu > d.order) throw DomainError("prolongation index out of range");
  return VarRef{static_cast<std::uint32_t>(mu * d.prolonged_base->size() + base.index)};
}

const Chart* Chart::bundle_base() const {
  const auto& d = data(d_);
  return d.bundle_base ? &*d.bundle_base : nullptr;
}

std::optional<VarRef> Chart::partner(VarRef v) const {
  check_var(v);
  if (d_->partners.empty()) return std::nullopt;
  return d_->partners[v.index];
}

// ---------------------------------------------------------------- constructors

Chart make_chart(std::vector<std::string> names, std::vector<std::vector<int>> weights,
                 std::vector<GradingKind> kinds, std::string label, std::optional<int> vb_component) {
  if (names.size() != weights.size()) throw DomainError("names and weights have unequal lengths");
  Chart::Data d;
  d.label = std::move(label);
  d.names = std::move(names);
  std::size_t ncomp = weights.empty() ? 0 : weights[0].size();
  if (ncomp == 0) throw DomainError("chart needs at least one grading component");
  d.weights.assign(ncomp, std::vector<int>(d.names.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i].size() != ncomp) throw DomainError("weight vectors have unequal lengths");
    for (std::size_t c = 0; c < ncomp; ++c) d.weights[c][i] = weights[i][c];
  }
  if (kinds.empty()) {
    for (const auto& comp : d.weights) {
      bool neg = std::any_of(comp.begin(), comp.end(), [](int w) { return w < 0; });
      d.kinds.push_back(neg ? GradingKind::integer : GradingKind::natural);
    }
  } else {
    d.kinds = std::move(kinds);
  }
  d.vb = vb_component;
  return build_chart(std::move(d));
}

namespace {

std::vector<GradingKind> infer_kinds(const std::vector<std::vector<int>>& w, const Chart& base) {
  std::vector<GradingKind> k;
  for (std::size_t c = 0; c < w.size(); ++c) {
    bool neg = std::any_of(w[c].begin(), w[c].end(), [](int x) { return x < 0; });
    GradingKind inherited = c < static_cast<std::size_t>(base.grading_count()) ? base.kind(static_cast<int>(c))
                                                                               : GradingKind::natural;
    k.push_back(neg ? GradingKind::integer : inherited);
  }
  return k;
}

}  // namespace

Chart prolong_chart(const Chart& chart, int r) {
  if (r < 1) throw DomainError("prolongation order must be at least 1");
  const auto n = chart.size();
  auto build_names = [&](bool explicit_zero) {
    std::vector<std::string> out;
    for (int mu = 0; mu <= r; ++mu)
      for (std::size_t i = 0; i < n; ++i) {
        const auto& b = chart.names()[i];
        out.push_back(mu == 0 && !explicit_zero ? b : b + "_" + std::to_string(mu));
      }
    return out;
  };
  auto names = build_names(false);
  std::set<std::string> uniq(names.begin(), names.end());
  if (uniq.size() != names.size()) {
    // x_1 already present in the base (e.g. an iterated prolongation):
    // name every level explicitly.
    names = build_names(true);
    uniq = std::set<std::string>(names.begin(), names.end());
    if (uniq.size() != names.size()) throw DomainError("prolonged variable names collide");
  }

  Chart::Data d;
  d.label = "T" + std::to_string(r) + chart.label();
  d.names = std::move(names);
  const int nc = chart.grading_count();
  d.weights.assign(nc + 1, std::vector<int>(d.names.size()));
  d.origins.resize(d.names.size());
  for (int mu = 0; mu <= r; ++mu)
    for (std::size_t i = 0; i < n; ++i) {
      auto idx = mu * n + i;
      for (int c = 0; c < nc; ++c) d.weights[c][idx] = chart.weights_in(c)[i];
      d.weights[nc][idx] = mu;
      d.origins[idx] = Chart::Origin{VarRef{static_cast<std::uint32_t>(i)}, mu};
    }
  d.kinds = infer_kinds(d.weights, chart);
  d.vb = chart.vb_component();
  d.prolonged_base = chart;
  d.order = r;
  return build_chart(std::move(d));
}

namespace {

// Shared shape of T*F, T*[k]F and TF: the base variables followed by one
// fibre variable per base variable, plus a new vector bundle component.
Chart fibred_chart(const Chart& chart, const std::string& label, const std::vector<std::string>& fibre_names,
                   const std::function<int(std::size_t, int)>& fibre_weight) {
  const auto n = chart.size();
  const int nc = chart.grading_count();
  Chart::Data d;
  d.label = label;
  d.names.assign(chart.names().begin(), chart.names().end());
  d.names.insert(d.names.end(), fibre_names.begin(), fibre_names.end());
  d.weights.assign(nc + 1, std::vector<int>(2 * n));
  for (int c = 0; c < nc; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      d.weights[c][i] = chart.weights_in(c)[i];
      d.weights[c][n + i] = fibre_weight(i, c);
    }
  for (std::size_t i = 0; i < n; ++i) d.weights[nc][n + i] = 1;
  d.kinds = infer_kinds(d.weights, chart);
  d.vb = nc;
  d.bundle_base = chart;
  d.partners.assign(2 * n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) d.partners[n + i] = VarRef{static_cast<std::uint32_t>(i)};
  return build_chart(std::move(d));
}

std::vector<std::string> decorated(const Chart& chart, const std::string& prefix, const std::string& suffix) {
  std::vector<std::string> out;
  for (const auto& n : chart.names()) out.push_back(prefix + n + suffix);
  return out;
}

}  // namespace

Chart cotangent_chart(const Chart& chart) {
  return fibred_chart(chart, "Tstar" + chart.label(), decorated(chart, "p_", ""),
                      [&](std::size_t i, int c) { return -chart.weights_in(c)[i]; });
}

Chart phase_shifted_cotangent_chart(const Chart& chart, int k, int component) {
  chart.check_component(component);
  for (std::size_t i = 0; i < chart.size(); ++i)
    if (k - chart.weights_in(component)[i] < 0)
      throw DomainError("shift k=" + std::to_string(k) + " is below the weight of " + chart.names()[i]);
  return fibred_chart(chart, "Tstar" + std::to_string(k) + chart.label(), decorated(chart, "p_", ""),
                      [&](std::size_t i, int c) {
                        int w = chart.weights_in(c)[i];
                        return c == component ? k - w : -w;
                      });
}

Chart tangent_chart(const Chart& chart) {
  return fibred_chart(chart, "T" + chart.label(), decorated(chart, "", "dot"),
                      [&](std::size_t i, int c) { return chart.weights_in(c)[i]; });
}

Chart shifted_dual_grl_chart(const Chart& chart, int k, int graded_component) {
  auto vb = chart.vb_component();
  if (!vb) throw DomainError("chart " + chart.label() + " has no vector bundle component");
  chart.check_component(graded_component);
  if (graded_component == *vb) throw DomainError("graded component coincides with the vector bundle component");
  Chart::Data d;
  d.label = chart.label() + "_dual" + std::to_string(k);
  const int nc = chart.grading_count();
  d.weights.assign(nc, std::vector<int>(chart.size()));
  for (std::size_t i = 0; i < chart.size(); ++i) {
    VarRef v{static_cast<std::uint32_t>(i)};
    int vw = chart.weight(v, *vb);
    if (vw != 0 && vw != 1)
      throw DomainError("variable " + chart.name(v) + " has vector bundle weight " + std::to_string(vw));
    bool fibre = vw == 1;
    const auto& n = chart.name(v);
    // Dualizing twice must give the original names back.
    if (!fibre)
      d.names.push_back(n);
    else if (n.rfind("p_", 0) == 0)
      d.names.push_back(n.substr(2));
    else
      d.names.push_back("p_" + n);
    for (int c = 0; c < nc; ++c) {
      int w = chart.weight(v, c);
      if (fibre && c == graded_component) w = k - w;
      d.weights[c][i] = w;
    }
  }
  d.kinds = infer_kinds(d.weights, chart);
  for (int c = 0; c < nc; ++c) {
    // A dual of a dual may become N-graded again.
    bool neg = std::any_of(d.weights[c].begin(), d.weights[c].end(), [](int w) { return w < 0; });
    if (!neg && c == graded_component) d.kinds[c] = GradingKind::natural;
  }
  d.vb = vb;
  return build_chart(std::move(d));
}

long weight_of_monomial(const Monomial& m, const Chart& chart, int component) {
  return weight_of_monomial(m, chart.weights_in(component));
}

std::map<long, Poly> homogeneous_components(const Poly& f, const Chart& chart, int component) {
  return homogeneous_components(f, chart.weights_in(component));
}

Degree degree_of_function(const Poly& f, const Chart& chart, int component) {
  auto w = chart.weights_in(component);
  Degree deg = Degree::any();
  for (const auto& t : f.terms()) {
    deg = deg.merge(Degree::of(weight_of_monomial(t.mono, w)));
    if (!deg.is_homogeneous()) break;
  }
  return deg;
}

}  // namespace gradcalc
