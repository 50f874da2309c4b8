#include "gradcalc/oracle.hpp"

#include <bit>

#include "gradcalc/error.hpp"

namespace gradcalc {

// ---------------------------------------------------------------- Taylor lift

Poly taylor_lift_oracle(const Poly& f, int lambda, const LiftContext& ctx) {
  const int r = ctx.r();
  if (lambda < 0 || lambda > r) throw DomainError("Taylor oracle needs 0 <= lambda <= r");
  const Chart& base = ctx.base();
  const Chart& pro = ctx.prolonged();

  // private chart: the prolonged variables followed by t
  std::vector<std::string> names(pro.names().begin(), pro.names().end());
  std::string tname = "t";
  while (pro.find(tname)) tname += "_";
  names.push_back(tname);
  Chart jet = make_chart(names, std::vector<std::vector<int>>(names.size(), {0}), {}, "taylor");
  const VarRef t{static_cast<std::uint32_t>(pro.size())};
  const Poly tp = jet.var(t);

  std::map<VarRef, Poly> curve;
  for (std::uint32_t i = 0; i < base.size(); ++i) {
    Poly xi = jet.constant(0);
    Poly tpow = jet.constant(1);
    for (int mu = 0; mu <= r; ++mu) {
      VarRef v = r == 0 ? VarRef{i} : pro.prolonged_var(VarRef{i}, mu);
      xi += tpow * jet.var(VarRef{v.index});
      tpow *= tp;
    }
    curve.emplace(VarRef{i}, std::move(xi));
  }
  Poly g = f.is_constant() ? jet.constant(f.constant_term()) : substitute(f, curve);
  Rational fact = 1;
  for (int k = 1; k <= lambda; ++k) {
    g = partial_derivative(g, t);
    fact *= k;
  }
  g *= Rational(Rational(1) / fact);

  // t -> 0, everything else back onto the prolonged chart
  std::map<VarRef, Poly> back;
  for (std::uint32_t i = 0; i < pro.size(); ++i) back.emplace(VarRef{i}, pro.var(VarRef{i}));
  back.emplace(t, pro.constant(0));
  if (g.is_constant()) return pro.constant(g.constant_term());
  return substitute(g, back);
}

// ---------------------------------------------------------------- evaluation

std::map<Index, Rational> evaluate_tensor_at(const TensorField& k, std::span<const Rational> point) {
  if (point.size() != k.chart().size()) throw DomainError("point does not cover the chart");
  std::map<Index, Rational> out;
  k.for_each_expanded([&](const Index& idx, const Poly& f) {
    Rational v = evaluate(f, point);
    if (v != 0) out.emplace(idx, v);
  });
  return out;
}

std::map<Index, Rational> evaluate_tensor_at(const TensorField& k, const std::map<VarRef, Rational>& point) {
  std::vector<Rational> p(k.chart().size());
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    auto it = point.find(VarRef{i});
    if (it == point.end()) throw DomainError("missing coordinate " + k.chart().name(VarRef{i}));
    p[i] = it->second;
  }
  return evaluate_tensor_at(k, p);
}

namespace {

std::string index_text(const Chart& c, const Index& idx) {
  std::string s = "[";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + c.name(VarRef{idx[i]});
  return s + "]";
}

}  // namespace

CheckReport identity_spot_check(const TensorField& lhs, const TensorField& rhs, const SamplePlan& plan) {
  require_same_chart(lhs, rhs);
  if (lhs.q() != rhs.q() || lhs.p() != rhs.p()) throw ValenceError("spot check of tensors of different valence");
  CheckReport rep;
  rep.check = "identity";
  rep.probabilistic = true;
  rep.seed = plan.seed;
  const auto& c = lhs.chart();
  for (const auto& pt : sample_points(plan, c.size())) {
    auto a = evaluate_tensor_at(lhs, pt);
    auto b = evaluate_tensor_at(rhs, pt);
    if (a == b) continue;
    // first differing entry
    std::map<Index, std::pair<Rational, Rational>> diff;
    for (const auto& [i, v] : a) diff[i].first = v;
    for (const auto& [i, v] : b) diff[i].second = v;
    for (const auto& [i, v] : diff)
      if (v.first != v.second) {
        std::string where = index_text(c, i);
        rep.fail("at " + render_point(pt, {c.names().begin(), c.names().end()}) + ": lhs" + where + " = " +
                 to_string(v.first) + ", rhs" + where + " = " + to_string(v.second));
        return rep;
      }
  }
  return rep;
}

// ---------------------------------------------------------------- Koszul bracket

namespace {

using Vec = std::vector<Poly>;
using Mat = std::vector<Vec>;

struct Dense {
  const Chart& c;
  std::size_t n;

  Vec zero_vec() const { return Vec(n, c.constant(0)); }
  Mat zero_mat() const { return Mat(n, zero_vec()); }

  Vec vec(const TensorField& t) const {
    Vec v = zero_vec();
    t.for_each_expanded([&](const Index& idx, const Poly& f) { v[idx[0]] = f; });
    return v;
  }
  Mat mat(const TensorField& t) const {
    Mat m = zero_mat();
    t.for_each_expanded([&](const Index& idx, const Poly& f) { m[idx[0]][idx[1]] = f; });
    return m;
  }
  Poly d(const Poly& f, std::size_t v) const { return partial_derivative(f, VarRef{static_cast<std::uint32_t>(v)}); }

  // (P#a)^i = P^{ij} a_j
  Vec sharp(const Mat& P, const Vec& a) const {
    Vec v = zero_vec();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[i] += P[i][j] * a[j];
    return v;
  }
  // P(a,b) = P^{ji} a_i b_j
  Poly pair(const Mat& P, const Vec& a, const Vec& b) const {
    Poly s = c.constant(0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += P[j][i] * a[i] * b[j];
    return s;
  }
  // (L_X b)_s = X^j d_j b_s + b_j d_s X^j
  Vec lie_form(const Vec& X, const Vec& b) const {
    Vec v = zero_vec();
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t j = 0; j < n; ++j) v[s] += X[j] * d(b[s], j) + b[j] * d(X[j], s);
    return v;
  }
  Vec bracket(const Mat& P, const Vec& a, const Vec& b) const {
    Vec la = lie_form(sharp(P, a), b);
    Vec lb = lie_form(sharp(P, b), a);
    Poly f = pair(P, a, b);
    Vec v = zero_vec();
    for (std::size_t s = 0; s < n; ++s) v[s] = la[s] - lb[s] - d(f, s);
    return v;
  }
  // (N^t a)_j = a_i N^i_j
  Vec transpose_apply(const Mat& N, const Vec& a) const {
    Vec v = zero_vec();
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) v[j] += a[i] * N[i][j];
    return v;
  }
  TensorField form(const Vec& v) const {
    TensorField t(c, 0, 1);
    for (std::size_t s = 0; s < n; ++s) t.add({static_cast<std::uint32_t>(s)}, v[s]);
    return t;
  }
};

void require_valence(const TensorField& t, int q, int p, const char* what) {
  if (t.q() != q || t.p() != p) throw ValenceError(std::string("oracle expects ") + what);
}

}  // namespace

TensorField koszul_concomitant_oracle(const TensorField& lambda, const TensorField& n, const TensorField& alpha,
                                      const TensorField& beta) {
  require_valence(lambda, 2, 0, "a bivector");
  require_valence(n, 1, 1, "a (1,1) tensor");
  require_valence(alpha, 0, 1, "one-forms");
  require_valence(beta, 0, 1, "one-forms");
  require_same_chart(lambda, n);
  require_same_chart(lambda, alpha);
  require_same_chart(lambda, beta);
  Dense D{lambda.chart(), lambda.chart().size()};
  Mat L = D.mat(lambda), N = D.mat(n);
  Vec a = D.vec(alpha), b = D.vec(beta);

  Mat NL = D.zero_mat();  // (NL)^{ij} = L^{il} N^j_l
  for (std::size_t i = 0; i < D.n; ++i)
    for (std::size_t j = 0; j < D.n; ++j)
      for (std::size_t l = 0; l < D.n; ++l) NL[i][j] += L[i][l] * N[j][l];

  Vec first = D.bracket(NL, a, b);
  Vec t1 = D.bracket(L, D.transpose_apply(N, a), b);
  Vec t2 = D.bracket(L, a, D.transpose_apply(N, b));
  Vec t3 = D.transpose_apply(N, D.bracket(L, a, b));
  Vec out = D.zero_vec();
  for (std::size_t s = 0; s < D.n; ++s) out[s] = first[s] - (t1[s] + t2[s] - t3[s]);
  return D.form(out);
}

TensorField pair_concomitant(const TensorField& c, const TensorField& alpha, const TensorField& beta) {
  require_valence(c, 2, 1, "a (2,1) tensor");
  require_same_chart(c, alpha);
  require_same_chart(c, beta);
  Dense D{c.chart(), c.chart().size()};
  Vec a = D.vec(alpha), b = D.vec(beta);
  Vec out = D.zero_vec();
  c.for_each_expanded([&](const Index& idx, const Poly& f) { out[idx[2]] += f * a[idx[0]] * b[idx[1]]; });
  return D.form(out);
}

// ---------------------------------------------------------------- Schouten

namespace {

using Mask = std::uint64_t;
using Super = std::map<Mask, Poly>;

// theta_A theta_B = sign * theta_{A|B}
int wedge_sign(Mask a, Mask b) {
  int swaps = 0;
  for (Mask m = b; m; m &= m - 1) {
    int j = std::countr_zero(m);
    swaps += std::popcount(a >> (j + 1));
  }
  return swaps % 2 ? -1 : 1;
}

void accumulate(Super& s, Mask m, const Poly& f) {
  if (f.is_zero()) return;
  auto [it, fresh] = s.emplace(m, f);
  if (!fresh) {
    it->second += f;
    if (it->second.is_zero()) s.erase(it);
  }
}

Super times(const Super& a, const Super& b) {
  Super out;
  for (const auto& [ma, fa] : a)
    for (const auto& [mb, fb] : b) {
      if (ma & mb) continue;
      accumulate(out, ma | mb, fa * fb * Rational(wedge_sign(ma, mb)));
    }
  return out;
}

// right derivative: move theta_i to the right end, then drop it
Super right_theta(const Super& a, unsigned i) {
  Super out;
  const Mask bit = Mask{1} << i;
  for (const auto& [m, f] : a) {
    if (!(m & bit)) continue;
    int sign = std::popcount(m >> (i + 1)) % 2 ? -1 : 1;
    accumulate(out, m & ~bit, sign > 0 ? f : -f);
  }
  return out;
}

Super d_x(const Super& a, unsigned i) {
  Super out;
  for (const auto& [m, f] : a) accumulate(out, m, partial_derivative(f, VarRef{i}));
  return out;
}

Super to_super(const TensorField& t) {
  if (t.p() != 0) throw ValenceError("Schouten oracle expects multivectors");
  if (t.chart().size() > 64) throw DomainError("Schouten oracle limited to 64 variables");
  Super s;
  const auto tagged = t.with_symmetry(Symmetry::antisymmetric, Symmetry::none);
  for (const auto& [idx, f] : tagged.components()) {
    Mask m = 0;
    for (auto i : idx) m |= Mask{1} << i;
    accumulate(s, m, f);
  }
  return s;
}

}  // namespace

TensorField schouten_oracle(const TensorField& a, const TensorField& b) {
  require_same_chart(a, b);
  const int p = a.q(), q = b.q();
  if (p < 1 || q < 1) throw ValenceError("Schouten oracle expects multivectors of degree >= 1");
  Super P = to_super(a), Q = to_super(b), res;
  const Rational sgn = ((p - 1) * (q - 1)) % 2 ? -1 : 1;
  for (unsigned i = 0; i < a.chart().size(); ++i) {
    for (const auto& [m, f] : times(right_theta(P, i), d_x(Q, i))) accumulate(res, m, f);
    for (const auto& [m, f] : times(right_theta(Q, i), d_x(P, i))) accumulate(res, m, -(f * sgn));
  }
  TensorField out(a.chart(), p + q - 1, 0, Symmetry::antisymmetric, Symmetry::none);
  for (const auto& [m, f] : res) {
    Index idx;
    for (Mask x = m; x; x &= x - 1) idx.push_back(static_cast<std::uint32_t>(std::countr_zero(x)));
    out.add(idx, f);
  }
  return out;
}

// ---------------------------------------------------------------- torsion

TensorField torsion_oracle(const TensorField& n) {
  require_valence(n, 1, 1, "a (1,1) tensor");
  Dense D{n.chart(), n.chart().size()};
  Mat N = D.mat(n);
  auto column = [&](std::size_t j) {
    Vec v = D.zero_vec();
    for (std::size_t i = 0; i < D.n; ++i) v[i] = N[i][j];
    return v;
  };
  auto apply = [&](const Vec& v) {
    Vec w = D.zero_vec();
    for (std::size_t i = 0; i < D.n; ++i)
      for (std::size_t j = 0; j < D.n; ++j) w[i] += N[i][j] * v[j];
    return w;
  };
  auto bracket = [&](const Vec& x, const Vec& y) {
    Vec w = D.zero_vec();
    for (std::size_t k = 0; k < D.n; ++k)
      for (std::size_t j = 0; j < D.n; ++j) w[k] += x[j] * D.d(y[k], j) - y[j] * D.d(x[k], j);
    return w;
  };
  auto along = [&](const Vec& v, std::size_t j) {  // [d_j, V]
    Vec w = D.zero_vec();
    for (std::size_t k = 0; k < D.n; ++k) w[k] = D.d(v[k], j);
    return w;
  };
  TensorField out(n.chart(), 1, 2, Symmetry::none, Symmetry::antisymmetric);
  for (std::size_t i = 0; i < D.n; ++i)
    for (std::size_t j = i + 1; j < D.n; ++j) {
      Vec ni = column(i), nj = column(j);
      Vec t1 = bracket(ni, nj);
      Vec t2 = apply(along(ni, j));  // -N[N d_i, d_j] = N[d_j, N d_i]
      Vec t3 = apply(along(nj, i));  // -N[d_i, N d_j]
      for (std::size_t k = 0; k < D.n; ++k) {
        Poly v = (t1[k] + t2[k] - t3[k]) * Rational(2);
        out.add({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)}, v);
      }
    }
  return out;
}

}  // namespace gradcalc
