#include "gradcalc/render.hpp"

namespace gradcalc {

std::string render_poly(const Poly& f, const Chart& chart) { return render(f, chart.names()); }

std::string render_degree(const Degree& d) { return d.to_string(); }

std::string symmetry_name(Symmetry s) {
  switch (s) {
    case Symmetry::symmetric:
      return "sym";
    case Symmetry::antisymmetric:
      return "antisym";
    default:
      return "none";
  }
}

namespace {

std::string basis_text(const TensorField& k, const Index& idx) {
  const auto& c = k.chart();
  std::string out;
  auto block = [&](int off, int len, Symmetry s, bool contra) {
    for (int i = 0; i < len; ++i) {
      if (!out.empty()) out += (i > 0 && s == Symmetry::antisymmetric) ? " ^^ " : " ox ";
      out += (contra ? "d/d" : "d") + c.name(VarRef{idx[off + i]});
    }
  };
  block(0, k.q(), k.contra_symmetry(), true);
  block(k.q(), k.p(), k.cov_symmetry(), false);
  return out;
}

}  // namespace

std::string render_tensor(const TensorField& k0) {
  if (k0.q() == 0 && k0.p() == 0) return render_poly(k0.as_scalar(), k0.chart());
  if (k0.is_zero()) return "0";
  auto unsym = [](Symmetry s) { return s == Symmetry::symmetric ? Symmetry::none : s; };
  TensorField k = k0.with_symmetry(unsym(k0.contra_symmetry()), unsym(k0.cov_symmetry()));
  std::string out;
  for (const auto& [idx, f] : k.components()) {
    std::string basis = basis_text(k, idx);
    std::string term;
    if (f.size() == 1) {
      Rational c = f.terms()[0].coef;
      bool unit_mono = f.terms()[0].mono.is_one();
      if (unit_mono && c == 1)
        term = basis;
      else if (unit_mono && c == -1)
        term = "-" + basis;
      else
        term = render_poly(f, k.chart()) + "*" + basis;
    } else {
      term = "(" + render_poly(f, k.chart()) + ")*" + basis;
    }
    if (out.empty())
      out = term;
    else if (term[0] == '-')
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out;
}

}  // namespace gradcalc
