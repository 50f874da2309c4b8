#include "gradcalc/calculus.hpp"

#include "gradcalc/error.hpp"

namespace gradcalc {

namespace {

void require_vector_field(const TensorField& x) {
  if (x.q() != 1 || x.p() != 0) throw ValenceError("expected a vector field");
}

void require_multivector(const TensorField& a) {
  if (a.p() != 0 || a.q() < 1) throw ValenceError("expected a multivector field");
}

TensorField antisym_form(const Chart& c, int p) {
  return TensorField(c, 0, p, Symmetry::none, Symmetry::antisymmetric);
}

TensorField vv_form(const Chart& c, int p) { return TensorField(c, 1, p, Symmetry::none, Symmetry::antisymmetric); }

}  // namespace

Poly apply_vector_field(const TensorField& x, const Poly& f) {
  require_vector_field(x);
  Poly out = x.chart().constant(0);
  const auto tok = x.chart().token();
  Poly g = f.rebind(tok);
  for (const auto& [idx, c] : x.components()) {
    Poly d = partial_derivative(g, VarRef{idx[0]});
    if (!d.is_zero()) out += c * d;
  }
  return out;
}

TensorField exterior_derivative(const TensorField& w) {
  if (w.q() != 0) throw ValenceError("exterior derivative needs a form");
  auto form = w.with_symmetry(Symmetry::none, Symmetry::antisymmetric);
  const auto& c = w.chart();
  auto out = antisym_form(c, w.p() + 1);
  for (const auto& [idx, f] : form.components()) {
    for (std::uint32_t j = 0; j < c.size(); ++j) {
      Poly d = partial_derivative(f, VarRef{j});
      if (d.is_zero()) continue;
      Index k{j};
      k.insert(k.end(), idx.begin(), idx.end());
      out.add(std::move(k), d);
    }
  }
  return out;
}

TensorField lie_bracket(const TensorField& x, const TensorField& y) {
  require_same_chart(x, y);
  require_vector_field(x);
  require_vector_field(y);
  TensorField out(x.chart(), 1, 0);
  for (std::uint32_t k = 0; k < x.chart().size(); ++k) {
    Poly v = apply_vector_field(x, y.component({k})) - apply_vector_field(y, x.component({k}));
    out.add({k}, v);
  }
  return out;
}

TensorField lie_derivative(const TensorField& x, const TensorField& k) {
  require_same_chart(x, k);
  require_vector_field(x);
  const auto& c = x.chart();
  const int q = k.q(), p = k.p();
  TensorField out(c, q, p, k.contra_symmetry(), k.cov_symmetry());
  for (const auto& [idx, f] : k.components()) out.add_full(idx, apply_vector_field(x, f));
  if (q + p == 0) return out;

  // d_b X^a, cached
  const auto n = c.size();
  std::vector<Poly> dx(n * n, c.constant(0));
  for (const auto& [idx, xa] : x.components())
    for (std::uint32_t b = 0; b < n; ++b) dx[b * n + idx[0]] = partial_derivative(xa, VarRef{b});

  k.for_each_expanded([&](const Index& idx, const Poly& f) {
    for (int s = 0; s < q + p; ++s) {
      Index j = idx;
      for (std::uint32_t m = 0; m < n; ++m) {
        j[s] = m;
        // contravariant slot: -K^{..l..} d_l X^m; covariant: +K_{..l..} d_m X^l
        const Poly& d = s < q ? dx[idx[s] * n + m] : dx[m * n + idx[s]];
        if (d.is_zero()) continue;
        if (s < q)
          out.add_full(j, -(f * d));
        else
          out.add_full(j, f * d);
      }
    }
  });
  return out;
}

TensorField interior(const TensorField& x, const TensorField& w) {
  require_vector_field(x);
  if (w.q() != 0) throw ValenceError("interior product needs a form");
  return insert_multivector(x, w.with_symmetry(Symmetry::none, Symmetry::antisymmetric));
}

TensorField schouten_bracket(const TensorField& a, const TensorField& b) {
  require_same_chart(a, b);
  require_multivector(a);
  require_multivector(b);
  auto as = a.with_symmetry(Symmetry::antisymmetric, Symmetry::none);
  auto bs = b.with_symmetry(Symmetry::antisymmetric, Symmetry::none);
  const int k = a.q(), l = b.q();
  const auto& c = a.chart();
  TensorField out(c, k + l - 1, 0, Symmetry::antisymmetric, Symmetry::none);

  // A = f d_{i1}^...^d_{ik} with f carried by the first factor, likewise B.
  // Coordinate fields commute, so only brackets involving a first factor
  // survive:
  //   [f d_i, d_j] = -(d_j f) d_i,   [d_i, g d_j] = (d_i g) d_j,
  //   [f d_i, g d_j] = f (d_i g) d_j - g (d_j f) d_i.
  auto emit = [&](std::uint32_t head, int skip_a, int skip_b, const Index& I, const Index& J, const Poly& coef) {
    if (coef.is_zero()) return;
    Index idx{head};
    for (int t = 0; t < k; ++t)
      if (t != skip_a) idx.push_back(I[t]);
    for (int t = 0; t < l; ++t)
      if (t != skip_b) idx.push_back(J[t]);
    out.add(std::move(idx), coef);
  };
  for (const auto& [I, f] : as.components())
    for (const auto& [J, g] : bs.components()) {
      // positions are 1-based in the sign (-1)^{i+j}
      for (int ia = 0; ia < k; ++ia)
        for (int jb = 0; jb < l; ++jb) {
          int sign = ((ia + jb) % 2 == 0) ? 1 : -1;
          if (ia > 0 && jb > 0) continue;
          if (ia == 0 && jb > 0) {
            // [f d_{I0}, d_{Jb}] ^ ... ^ (g d_{J0}) ...
            Poly d = partial_derivative(f, VarRef{J[jb]});
            emit(I[0], 0, jb, I, J, -(d * g) * Rational(sign));
          } else if (ia > 0 && jb == 0) {
            Poly d = partial_derivative(g, VarRef{I[ia]});
            emit(J[0], ia, 0, I, J, (f * d) * Rational(sign));
          } else {
            Poly dg = partial_derivative(g, VarRef{I[0]});
            Poly df = partial_derivative(f, VarRef{J[0]});
            emit(J[0], 0, 0, I, J, (f * dg) * Rational(sign));
            emit(I[0], 0, 0, I, J, -(g * df) * Rational(sign));
          }
        }
    }
  return out;
}

TensorField as_vector_valued_form(const TensorField& t) {
  if (t.q() != 1) throw ValenceError("expected a vector valued form");
  return t.with_symmetry(Symmetry::none, Symmetry::antisymmetric);
}

namespace {

// i_{d_m} dx^J: (-1)^s dx^{J without slot s} when J_s = m.
bool insert_basis(std::uint32_t m, const Index& J, int off, int len, Index& rest, int& sign) {
  for (int s = 0; s < len; ++s)
    if (J[off + s] == m) {
      rest.assign(J.begin() + off, J.begin() + off + len);
      rest.erase(rest.begin() + s);
      sign = s % 2 == 0 ? 1 : -1;
      return true;
    }
  return false;
}

}  // namespace

TensorField fn_bracket(const TensorField& a0, const TensorField& b0) {
  require_same_chart(a0, b0);
  auto a = as_vector_valued_form(a0);
  auto b = as_vector_valued_form(b0);
  const int k = a.p(), l = b.p();
  const auto& c = a.chart();
  auto out = vv_form(c, k + l);
  Rational sk = k % 2 == 0 ? 1 : -1;

  // mu = f dx^I, X = d_x ;  nu = g dx^J, Y = d_y.  [X,Y] = 0.
  auto emit = [&](std::uint32_t head, const Index& forms, const Poly& coef) {
    if (coef.is_zero()) return;
    Index idx{head};
    idx.insert(idx.end(), forms.begin(), forms.end());
    out.add(std::move(idx), coef);
  };
  for (const auto& [IA, f] : a.components())
    for (const auto& [JB, g] : b.components()) {
      const std::uint32_t x = IA[0], y = JB[0];
      Index I(IA.begin() + 1, IA.end()), J(JB.begin() + 1, JB.end());
      Index IJ = I;
      IJ.insert(IJ.end(), J.begin(), J.end());
      // mu ^ L_X nu (x) Y  -  L_Y mu ^ nu (x) X
      emit(y, IJ, f * partial_derivative(g, VarRef{x}));
      emit(x, IJ, -(partial_derivative(f, VarRef{y}) * g));
      // (-1)^k dmu ^ i_X nu (x) Y
      Index rest;
      int sign = 0;
      if (insert_basis(x, JB, 1, l, rest, sign)) {
        for (std::uint32_t j = 0; j < c.size(); ++j) {
          Poly df = partial_derivative(f, VarRef{j});
          if (df.is_zero()) continue;
          Index fi{j};
          fi.insert(fi.end(), I.begin(), I.end());
          fi.insert(fi.end(), rest.begin(), rest.end());
          emit(y, fi, df * g * (sk * sign));
        }
      }
      // (-1)^k i_Y mu ^ dnu (x) X
      if (insert_basis(y, IA, 1, k, rest, sign)) {
        for (std::uint32_t j = 0; j < c.size(); ++j) {
          Poly dg = partial_derivative(g, VarRef{j});
          if (dg.is_zero()) continue;
          Index fi = rest;
          fi.push_back(j);
          fi.insert(fi.end(), J.begin(), J.end());
          emit(x, fi, f * dg * (sk * sign));
        }
      }
    }
  return out;
}

TensorField nr_bracket(const TensorField& a0, const TensorField& b0) {
  require_same_chart(a0, b0);
  auto a = as_vector_valued_form(a0);
  auto b = as_vector_valued_form(b0);
  const int k = a.p(), l = b.p();
  if (k + l == 0) throw ValenceError("Nijenhuis-Richardson bracket of two vector fields");
  auto out = vv_form(a.chart(), k + l - 1);
  Rational sk = k % 2 == 0 ? 1 : -1;
  for (const auto& [IA, f] : a.components())
    for (const auto& [JB, g] : b.components()) {
      const std::uint32_t x = IA[0], y = JB[0];
      Index rest;
      int sign = 0;
      // mu ^ i_X nu (x) Y
      if (insert_basis(x, JB, 1, l, rest, sign)) {
        Index idx{y};
        idx.insert(idx.end(), IA.begin() + 1, IA.end());
        idx.insert(idx.end(), rest.begin(), rest.end());
        out.add(std::move(idx), f * g * Rational(sign));
      }
      // (-1)^k i_Y mu ^ nu (x) X
      if (insert_basis(y, IA, 1, k, rest, sign)) {
        Index idx{x};
        idx.insert(idx.end(), rest.begin(), rest.end());
        idx.insert(idx.end(), JB.begin() + 1, JB.end());
        out.add(std::move(idx), f * g * (sk * sign));
      }
    }
  return out;
}

TensorField nijenhuis_torsion(const TensorField& n) {
  if (n.q() != 1 || n.p() != 1) throw ValenceError("Nijenhuis torsion needs a (1,1) tensor");
  return fn_bracket(n, n);
}

TensorField n_lambda(const TensorField& n, const TensorField& lambda) {
  require_same_chart(n, lambda);
  if (n.q() != 1 || n.p() != 1) throw ValenceError("expected a (1,1) tensor");
  if (lambda.q() != 2 || lambda.p() != 0) throw ValenceError("expected a (2,0) tensor");
  TensorField out(n.chart(), 2, 0);
  auto el = lambda.expanded();
  for (const auto& [il, fl] : el)
    for (const auto& [in, fn] : n.components())
      if (in[1] == il[1]) out.add({il[0], in[0]}, fl * fn);
  return out;
}

TensorField concomitant(const TensorField& lambda, const TensorField& n) {
  require_same_chart(lambda, n);
  if (lambda.q() != 2 || lambda.p() != 0) throw ValenceError("concomitant needs a bivector");
  if (n.q() != 1 || n.p() != 1) throw ValenceError("concomitant needs a (1,1) tensor");
  auto L = lambda.with_symmetry(Symmetry::antisymmetric, Symmetry::none);
  const auto& c = lambda.chart();
  const std::uint32_t dim = static_cast<std::uint32_t>(c.size());
  auto lam = [&](std::uint32_t i, std::uint32_t j) { return L.component({i, j}); };
  auto nn = [&](std::uint32_t i, std::uint32_t j) { return n.component({i, j}); };
  auto d = [](const Poly& f, std::uint32_t v) { return partial_derivative(f, VarRef{v}); };

  TensorField out(c, 2, 1);
  for (std::uint32_t i = 0; i < dim; ++i)
    for (std::uint32_t j = 0; j < dim; ++j)
      for (std::uint32_t s = 0; s < dim; ++s) {
        Poly v = c.constant(0);
        for (std::uint32_t l = 0; l < dim; ++l) {
          v += lam(l, j) * d(nn(i, s), l);
          v += lam(i, l) * d(nn(j, s), l);
          v -= nn(l, s) * d(lam(i, j), l);
          v += nn(j, l) * d(lam(i, l), s);
          v -= lam(l, j) * d(nn(i, l), s);
        }
        out.add({i, j, s}, v);
      }
  return out;
}

}  // namespace gradcalc
