#include "gradcalc/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "gradcalc/error.hpp"

namespace gradcalc {

namespace {

// Sorts idx[off, off+len) and returns the permutation sign, or 0 when an
// antisymmetric block has a repeated index.
int normalize_block(Index& idx, int off, int len, Symmetry s) {
  if (s == Symmetry::none || len < 2) return 1;
  auto b = idx.begin() + off;
  int sign = 1;
  // insertion sort keeps track of transpositions
  for (int i = 1; i < len; ++i)
    for (int j = i; j > 0 && b[j - 1] > b[j]; --j) {
      std::swap(b[j - 1], b[j]);
      sign = -sign;
    }
  if (s == Symmetry::antisymmetric) {
    for (int i = 1; i < len; ++i)
      if (b[i - 1] == b[i]) return 0;
    return sign;
  }
  return 1;
}

bool canonical_block(const Index& idx, int off, int len, Symmetry s) {
  if (s == Symmetry::none) return true;
  for (int i = off + 1; i < off + len; ++i) {
    if (s == Symmetry::antisymmetric ? idx[i - 1] >= idx[i] : idx[i - 1] > idx[i]) return false;
  }
  return true;
}

// All distinct orderings of one block of a canonical index, with signs.
void expand_block(const Index& idx, int off, int len, Symmetry s,
                  std::vector<std::pair<Index, int>>& out) {
  out.clear();
  if (s == Symmetry::none || len < 2) {
    out.emplace_back(idx, 1);
    return;
  }
  std::vector<int> perm(len);
  std::iota(perm.begin(), perm.end(), 0);
  Index cur = idx;
  do {
    for (int i = 0; i < len; ++i) cur[off + i] = idx[off + perm[i]];
    int sign = 1;
    if (s == Symmetry::antisymmetric) {
      for (int i = 0; i < len; ++i)
        for (int j = i + 1; j < len; ++j)
          if (perm[i] > perm[j]) sign = -sign;
    } else {
      // symmetric: skip duplicates produced by equal indices
      bool dup = false;
      for (int i = 0; i + 1 < len && !dup; ++i)
        for (int j = i + 1; j < len; ++j)
          if (idx[off + perm[i]] == idx[off + perm[j]] && perm[i] > perm[j]) {
            dup = true;
            break;
          }
      if (dup) continue;
    }
    out.emplace_back(cur, sign);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

void add_into(TensorField::Components& c, const Index& idx, const Poly& f) {
  if (f.is_zero()) return;
  auto it = c.find(idx);
  if (it == c.end()) {
    c.emplace(idx, f);
    return;
  }
  it->second += f;
  if (it->second.is_zero()) c.erase(it);
}

}  // namespace

TensorField::TensorField(Chart chart, int q, int p, Symmetry contra, Symmetry cov)
    : chart_(std::move(chart)), q_(q), p_(p), contra_(q < 2 ? Symmetry::none : contra),
      cov_(p < 2 ? Symmetry::none : cov) {
  if (!chart_.valid()) throw DomainError("tensor on an invalid chart");
  if (q < 0 || p < 0) throw ValenceError("negative valence");
}

TensorField TensorField::scalar(const Chart& chart, const Poly& f) {
  TensorField t(chart, 0, 0);
  t.add({}, f);
  return t;
}

TensorField TensorField::vector_basis(const Chart& chart, VarRef v) {
  chart.check_var(v);
  TensorField t(chart, 1, 0);
  t.add({v.index}, chart.constant(1));
  return t;
}

TensorField TensorField::covector_basis(const Chart& chart, VarRef v) {
  chart.check_var(v);
  TensorField t(chart, 0, 1);
  t.add({v.index}, chart.constant(1));
  return t;
}

Poly TensorField::as_scalar() const {
  if (q_ != 0 || p_ != 0) throw ValenceError("tensor is not a function");
  auto it = c_.find(Index{});
  return it == c_.end() ? chart_.constant(0) : it->second;
}

void TensorField::check_index(const Index& idx) const {
  if (idx.size() != static_cast<std::size_t>(q_ + p_)) throw ValenceError("index has wrong length");
  for (auto i : idx) chart_.check_var(VarRef{i});
}

Poly TensorField::component(const Index& idx) const {
  check_index(idx);
  Index k = idx;
  int s = normalize_block(k, 0, q_, contra_) * normalize_block(k, q_, p_, cov_);
  if (s == 0) return chart_.constant(0);
  auto it = c_.find(k);
  if (it == c_.end()) return chart_.constant(0);
  return s > 0 ? it->second : -it->second;
}

void TensorField::for_each_expanded(const std::function<void(const Index&, const Poly&)>& fn) const {
  if (contra_ == Symmetry::none && cov_ == Symmetry::none) {
    for (const auto& [idx, f] : c_) fn(idx, f);
    return;
  }
  std::vector<std::pair<Index, int>> a, b;
  for (const auto& [idx, f] : c_) {
    expand_block(idx, 0, q_, contra_, a);
    Poly neg = -f;
    for (const auto& [ia, sa] : a) {
      expand_block(ia, q_, p_, cov_, b);
      for (const auto& [ib, sb] : b) fn(ib, sa * sb > 0 ? f : neg);
    }
  }
}

void TensorField::for_each_expansion_of(const Index& stored,
                                        const std::function<void(const Index&, int)>& fn) const {
  if (contra_ == Symmetry::none && cov_ == Symmetry::none) {
    fn(stored, 1);
    return;
  }
  std::vector<std::pair<Index, int>> a, b;
  expand_block(stored, 0, q_, contra_, a);
  for (const auto& [ia, sa] : a) {
    expand_block(ia, q_, p_, cov_, b);
    for (const auto& [ib, sb] : b) fn(ib, sa * sb);
  }
}

TensorField::Components TensorField::expanded() const {
  if (contra_ == Symmetry::none && cov_ == Symmetry::none) return c_;
  Components out;
  for_each_expanded([&](const Index& i, const Poly& f) { out.emplace(i, f); });
  return out;
}

void TensorField::add(Index idx, const Poly& f) {
  check_index(idx);
  if (f.is_zero()) return;
  int s = normalize_block(idx, 0, q_, contra_) * normalize_block(idx, q_, p_, cov_);
  if (s == 0) return;
  Poly g = f.rebind(chart_.token());
  add_into(c_, idx, s > 0 ? g : -g);
}

void TensorField::add_full(const Index& idx, const Poly& f) {
  check_index(idx);
  if (!canonical_block(idx, 0, q_, contra_) || !canonical_block(idx, q_, p_, cov_)) return;
  add_into(c_, idx, f.rebind(chart_.token()));
}

bool TensorField::has_symmetry(Symmetry contra, Symmetry cov) const {
  if (q_ < 2) contra = Symmetry::none;
  if (p_ < 2) cov = Symmetry::none;
  if (contra == contra_ && cov == cov_) return true;
  // Keep only the canonical entries and check that they regenerate us.
  TensorField candidate(chart_, q_, p_, contra, cov);
  for_each_expanded([&](const Index& idx, const Poly& f) { candidate.add_full(idx, f); });
  return candidate == *this;
}

TensorField TensorField::with_symmetry(Symmetry contra, Symmetry cov) const {
  if (q_ < 2) contra = Symmetry::none;
  if (p_ < 2) cov = Symmetry::none;
  if (contra == contra_ && cov == cov_) return *this;
  if (!has_symmetry(contra, cov)) throw ValenceError("tensor does not have the requested symmetry");
  TensorField out(chart_, q_, p_, contra, cov);
  for_each_expanded([&](const Index& idx, const Poly& f) { out.add_full(idx, f); });
  return out;
}

void require_same_chart(const TensorField& a, const TensorField& b) {
  if (!(a.chart() == b.chart())) throw ChartMismatch("tensors live on different charts");
}

TensorField& TensorField::operator+=(const TensorField& o) {
  require_same_chart(*this, o);
  if (q_ != o.q_ || p_ != o.p_) throw ValenceError("adding tensors of different valence");
  if (contra_ == o.contra_ && cov_ == o.cov_) {
    if (&o == this) return *this *= Rational(2);
    for (const auto& [idx, f] : o.c_) add_into(c_, idx, f);
    return *this;
  }
  // Keep the common symmetry if both summands have it.
  Symmetry contra = contra_ == o.contra_ ? contra_ : Symmetry::none;
  Symmetry cov = cov_ == o.cov_ ? cov_ : Symmetry::none;
  TensorField out(chart_, q_, p_, contra, cov);
  for_each_expanded([&](const Index& i, const Poly& f) { out.add_full(i, f); });
  o.for_each_expanded([&](const Index& i, const Poly& f) { out.add_full(i, f); });
  return *this = std::move(out);
}

TensorField& TensorField::operator-=(const TensorField& o) { return *this += -o; }

TensorField& TensorField::operator*=(const Rational& c) {
  if (c == 0) {
    c_.clear();
    return *this;
  }
  for (auto& [idx, f] : c_) f *= c;
  return *this;
}

TensorField& TensorField::operator*=(const Poly& g) {
  Poly h = g.rebind(chart_.token());
  for (auto it = c_.begin(); it != c_.end();) {
    it->second = it->second * h;
    if (it->second.is_zero())
      it = c_.erase(it);
    else
      ++it;
  }
  return *this;
}

TensorField TensorField::operator-() const {
  TensorField r = *this;
  for (auto& [idx, f] : r.c_) f = -f;
  return r;
}

TensorField TensorField::map_coefficients(const std::function<Poly(const Poly&)>& fn) const {
  TensorField r(chart_, q_, p_, contra_, cov_);
  for (const auto& [idx, f] : c_) add_into(r.c_, idx, fn(f).rebind(chart_.token()));
  return r;
}

bool operator==(const TensorField& a, const TensorField& b) {
  if (!(a.chart_ == b.chart_) || a.q_ != b.q_ || a.p_ != b.p_) return false;
  if (a.contra_ == b.contra_ && a.cov_ == b.cov_) {
    if (a.c_.size() != b.c_.size()) return false;
    for (auto ia = a.c_.begin(), ib = b.c_.begin(); ia != a.c_.end(); ++ia, ++ib)
      if (ia->first != ib->first || !(ia->second == ib->second)) return false;
    return true;
  }
  auto ea = a.expanded();
  auto eb = b.expanded();
  if (ea.size() != eb.size()) return false;
  for (auto ia = ea.begin(), ib = eb.begin(); ia != ea.end(); ++ia, ++ib)
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  return true;
}

// ---------------------------------------------------------------- operations

TensorField weight_vector_field(const Chart& chart, int component) {
  auto w = chart.weights_in(component);
  TensorField t(chart, 1, 0);
  for (std::uint32_t i = 0; i < chart.size(); ++i)
    if (w[i] != 0) t.add({i}, chart.var(VarRef{i}) * Rational(w[i]));
  return t;
}

TensorField tensor_product(const TensorField& a, const TensorField& b) {
  require_same_chart(a, b);
  TensorField out(a.chart(), a.q() + b.q(), a.p() + b.p());
  if (a.is_zero() || b.is_zero()) return out;
  auto eb = b.expanded();
  a.for_each_expanded([&](const Index& ia, const Poly& fa) {
    for (const auto& [ib, fb] : eb) {
      Index idx;
      idx.insert(idx.end(), ia.begin(), ia.begin() + a.q());
      idx.insert(idx.end(), ib.begin(), ib.begin() + b.q());
      idx.insert(idx.end(), ia.begin() + a.q(), ia.end());
      idx.insert(idx.end(), ib.begin() + b.q(), ib.end());
      out.add(std::move(idx), fa * fb);
    }
  });
  return out;
}

TensorField wedge(const TensorField& a, const TensorField& b) {
  require_same_chart(a, b);
  bool forms = a.q() == 0 && b.q() == 0;
  bool vectors = a.p() == 0 && b.p() == 0;
  if (!forms && !vectors) throw ValenceError("wedge needs two forms or two multivectors");
  int ka = forms ? a.p() : a.q();
  int kb = forms ? b.p() : b.q();
  // with_symmetry rejects inputs that are not antisymmetric
  auto as = forms ? a.with_symmetry(Symmetry::none, Symmetry::antisymmetric)
                  : a.with_symmetry(Symmetry::antisymmetric, Symmetry::none);
  auto bs = forms ? b.with_symmetry(Symmetry::none, Symmetry::antisymmetric)
                  : b.with_symmetry(Symmetry::antisymmetric, Symmetry::none);
  int k = ka + kb;
  TensorField out = forms ? TensorField(a.chart(), 0, k, Symmetry::none, Symmetry::antisymmetric)
                          : TensorField(a.chart(), k, 0, Symmetry::antisymmetric, Symmetry::none);
  // Stored components are indexed by increasing tuples A and B; their
  // shuffle contributes at the merged tuple with the merge sign.
  for (const auto& [ia, fa] : as.components())
    for (const auto& [ib, fb] : bs.components()) {
      Index idx(ia.begin(), ia.end());
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add(std::move(idx), fa * fb);
    }
  return out;
}

TensorField contract(const TensorField& k, int contra_slot, int cov_slot) {
  if (contra_slot < 0 || contra_slot >= k.q() || cov_slot < 0 || cov_slot >= k.p())
    throw ValenceError("contraction slot out of range");
  TensorField out(k.chart(), k.q() - 1, k.p() - 1);
  const int a = contra_slot, b = k.q() + cov_slot;
  k.for_each_expanded([&](const Index& idx, const Poly& f) {
    if (idx[a] != idx[b]) return;
    Index r;
    for (int i = 0; i < static_cast<int>(idx.size()); ++i)
      if (i != a && i != b) r.push_back(idx[i]);
    out.add(std::move(r), f);
  });
  return out;
}

namespace {

// Pairs the n slots of `small` against the block of `k` starting at `off`.
TensorField insert_impl(const TensorField& small, const TensorField& k, int n, int off, int q_out, int p_out,
                        Symmetry contra, Symmetry cov) {
  require_same_chart(small, k);
  TensorField out(k.chart(), q_out, p_out, contra, cov);
  auto es = small.expanded();
  k.for_each_expanded([&](const Index& idx, const Poly& f) {
    Index key(idx.begin() + off, idx.begin() + off + n);
    auto it = es.find(key);
    if (it == es.end()) return;
    Index r(idx.begin(), idx.begin() + off);
    r.insert(r.end(), idx.begin() + off + n, idx.end());
    out.add_full(r, it->second * f);
  });
  return out;
}

}  // namespace

TensorField insert_multivector(const TensorField& x, const TensorField& k) {
  if (x.p() != 0) throw ValenceError("insertion needs a multivector");
  if (x.q() > k.p()) throw ValenceError("multivector has more slots than the tensor has covariant slots");
  int rest = k.p() - x.q();
  return insert_impl(x, k, x.q(), k.q(), k.q(), rest, k.contra_symmetry(),
                     rest >= 2 ? k.cov_symmetry() : Symmetry::none);
}

TensorField insert_form(const TensorField& w, const TensorField& k) {
  if (w.q() != 0) throw ValenceError("insertion needs a form");
  if (w.p() > k.q()) throw ValenceError("form has more slots than the tensor has contravariant slots");
  int rest = k.q() - w.p();
  return insert_impl(w, k, w.p(), 0, rest, k.p(), rest >= 2 ? k.contra_symmetry() : Symmetry::none,
                     k.cov_symmetry());
}

Degree degree_of_tensor(const TensorField& k, int component) {
  auto w = k.chart().weights_in(component);
  Degree deg = Degree::any();
  // Every permutation of a stored index has the same weight sum.
  for (const auto& [idx, f] : k.components()) {
    long shift = 0;
    for (int i = 0; i < k.q(); ++i) shift -= w[idx[i]];
    for (int i = k.q(); i < k.q() + k.p(); ++i) shift += w[idx[i]];
    for (const auto& t : f.terms()) {
      deg = deg.merge(Degree::of(weight_of_monomial(t.mono, w) + shift));
      if (!deg.is_homogeneous()) return deg;
    }
  }
  return deg;
}

TensorField compose_11(const TensorField& n1, const TensorField& n2) {
  require_same_chart(n1, n2);
  if (n1.q() != 1 || n1.p() != 1 || n2.q() != 1 || n2.p() != 1) throw ValenceError("composition needs (1,1) tensors");
  TensorField out(n1.chart(), 1, 1);
  for (const auto& [i1, f1] : n1.components())
    for (const auto& [i2, f2] : n2.components())
      if (i1[1] == i2[0]) out.add({i1[0], i2[1]}, f1 * f2);
  return out;
}

TensorField id_11(const Chart& chart) {
  TensorField out(chart, 1, 1);
  for (std::uint32_t i = 0; i < chart.size(); ++i) out.add({i, i}, chart.constant(1));
  return out;
}

TensorField transpose(const TensorField& k) {
  if (!((k.q() == 2 && k.p() == 0) || (k.q() == 0 && k.p() == 2))) throw ValenceError("transpose needs a 2-tensor");
  TensorField out(k.chart(), k.q(), k.p(), k.contra_symmetry(), k.cov_symmetry());
  k.for_each_expanded([&](const Index& idx, const Poly& f) { out.add_full({idx[1], idx[0]}, f); });
  return out;
}

TensorField symmetrize(const TensorField& k, Symmetry contra, Symmetry cov) {
  if (k.q() < 2) contra = Symmetry::none;
  if (k.p() < 2) cov = Symmetry::none;
  const int q = k.q(), p = k.p();
  Rational norm = 1;
  auto perms = [](int n, bool active) {
    std::vector<std::pair<std::vector<int>, int>> out;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    if (!active) {
      out.emplace_back(perm, 1);
      return out;
    }
    do {
      int sign = 1;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (perm[i] > perm[j]) sign = -sign;
      out.emplace_back(perm, sign);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  };
  auto pa = perms(q, contra != Symmetry::none);
  auto pb = perms(p, cov != Symmetry::none);
  norm /= static_cast<long>(pa.size() * pb.size());

  std::set<Index> reps;
  k.for_each_expanded([&](const Index& idx, const Poly&) {
    Index r = idx;
    if (normalize_block(r, 0, q, contra) * normalize_block(r, q, p, cov) != 0) reps.insert(r);
  });
  TensorField out(k.chart(), q, p, contra, cov);
  for (const auto& rep : reps) {
    Poly sum = k.chart().constant(0);
    Index j = rep;
    for (const auto& [sa, ga] : pa)
      for (const auto& [sb, gb] : pb) {
        for (int i = 0; i < q; ++i) j[i] = rep[sa[i]];
        for (int i = 0; i < p; ++i) j[q + i] = rep[q + sb[i]];
        int g = (contra == Symmetry::antisymmetric ? ga : 1) * (cov == Symmetry::antisymmetric ? gb : 1);
        Poly c = k.component(j);
        if (g > 0)
          sum += c;
        else
          sum -= c;
      }
    out.add_full(rep, sum * norm);
  }
  return out;
}

}  // namespace gradcalc
