#include <functional>
#include <map>

#include "gradcalc/calculus.hpp"
#include "gradcalc/checkers.hpp"
#include "gradcalc/dsl.hpp"
#include "gradcalc/lifts.hpp"
#include "gradcalc/oracle.hpp"
#include "gradcalc/render.hpp"

#ifndef GRADCALC_VERSION
#define GRADCALC_VERSION "0.0.0"
#endif

namespace gradcalc {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void name_error(std::string msg, SourcePos pos) {
  throw ScriptError(Diagnostic{"E_NAME", std::move(msg), pos});
}
[[noreturn]] void semantic(std::string msg, SourcePos pos) {
  throw ScriptError(Diagnostic{"E_SEMANTIC", std::move(msg), pos});
}

using Lookup = std::function<const TensorField*(const std::string&)>;

TensorField evaluate_expr(const Expr& e, const Chart& c, const Lookup& lookup) {
  auto scalar_of = [&](const TensorField& t, const char* what) {
    if (t.q() != 0 || t.p() != 0) semantic(std::string(what) + " needs a scalar", e.pos);
    return t.as_scalar();
  };
  switch (e.kind) {
    case Expr::Kind::number:
      return TensorField::scalar(c, c.constant(e.value));
    case Expr::Kind::ident: {
      if (auto v = c.find(e.name)) return TensorField::scalar(c, c.var(*v));
      if (const TensorField* t = lookup ? lookup(e.name) : nullptr) {
        if (!(t->chart() == c)) semantic(e.name + " lives on " + t->chart().label() + ", not " + c.label(), e.pos);
        return *t;
      }
      if (e.name.size() > 1 && e.name[0] == 'd')
        if (auto v = c.find(e.name.substr(1))) return TensorField::covector_basis(c, *v);
      name_error(e.name + " not in " + c.label(), e.pos);
    }
    case Expr::Kind::vector_basis: {
      auto v = c.find(e.name);
      if (!v) name_error(e.name + " not in " + c.label(), e.pos);
      return TensorField::vector_basis(c, *v);
    }
    case Expr::Kind::neg:
      return -evaluate_expr(e.args[0], c, lookup);
    default:
      break;
  }
  auto a = evaluate_expr(e.args[0], c, lookup);
  auto b = evaluate_expr(e.args[1], c, lookup);
  try {
    switch (e.kind) {
      case Expr::Kind::add:
        return a + b;
      case Expr::Kind::sub:
        return a - b;
      case Expr::Kind::mul:
        if (a.q() == 0 && a.p() == 0) return a.as_scalar() * b;
        if (b.q() == 0 && b.p() == 0) return b.as_scalar() * a;
        semantic("'*' multiplies by functions only; use ox or ^^", e.pos);
      case Expr::Kind::div: {
        Poly d = scalar_of(b, "division");
        if (!d.is_constant() || d.is_zero()) semantic("division by a non-constant or zero", e.pos);
        return a * Rational(1 / d.constant_term());
      }
      case Expr::Kind::pow: {
        Poly base = scalar_of(a, "'^'");
        Rational n = b.as_scalar().constant_term();
        if (n > 64) semantic("exponent too large", e.pos);
        return TensorField::scalar(c, base.pow(static_cast<unsigned>(n.get_num().get_ui())));
      }
      case Expr::Kind::tensor:
        return tensor_product(a, b);
      case Expr::Kind::wedge:
        return wedge(a, b);
      default:
        break;
    }
  } catch (const ScriptError&) {
    throw;
  } catch (const Error& err) {
    semantic(err.what(), e.pos);
  }
  semantic("bad expression", e.pos);
}

json tensor_json(const TensorField& t, const std::string& text) {
  return json{{"kind", "tensor"},
              {"chart", t.chart().label()},
              {"valence", {t.q(), t.p()}},
              {"symmetry", {symmetry_name(t.contra_symmetry()), symmetry_name(t.cov_symmetry())}},
              {"text", text}};
}

std::string chart_text(const Chart& c) {
  std::string out = "chart " + c.label() + " {";
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    out += i ? ", " : " ";
    out += c.name(VarRef{i}) + ":";
    auto w = c.weight_vector(VarRef{i});
    for (std::size_t k = 0; k < w.size(); ++k) out += (k ? "," : "") + std::to_string(w[k]);
  }
  out += " }";
  if (auto vb = c.vb_component()) out += " vb=" + std::to_string(*vb);
  return out;
}

json chart_json(const Chart& c) {
  json vars = json::array();
  for (std::uint32_t i = 0; i < c.size(); ++i)
    vars.push_back(json{{"name", c.name(VarRef{i})}, {"weights", c.weight_vector(VarRef{i})}});
  json j{{"kind", "chart"}, {"name", c.label()}, {"variables", vars}};
  if (auto vb = c.vb_component()) j["vb"] = *vb;
  return j;
}

std::string report_line(const std::string& head, const CheckReport& r) {
  std::string out = head + ": " + (r.pass ? "pass" : "fail");
  if (!r.degrees.empty()) {
    out += " (";
    bool first = true;
    for (const auto& [k, v] : r.degrees) {
      out += (first ? "deg " : ", deg ") + k + " = " + v;
      first = false;
    }
    out += ")";
  }
  if (r.probabilistic) out += " [probabilistic, seed " + std::to_string(r.seed.value_or(0)) + "]";
  return out;
}

class Session {
 public:
  explicit Session(const RunOptions& o) : opt_(o) {}

  RunResult run(const Script& s) {
    for (const auto& st : s.statements) {
      try {
        statement(st);
      } catch (const ScriptError& e) {
        res_.error = e.diagnostic();
        res_.exit_code = e.exit_code();
        return std::move(res_);
      } catch (const Error& e) {
        res_.error = Diagnostic{"E_SEMANTIC", e.what(), st.pos};
        res_.exit_code = 3;
        return std::move(res_);
      }
    }
    res_.exit_code = 0;
    for (const auto& r : res_.records)
      if (r.report && !r.report->pass) res_.exit_code = 1;
    return std::move(res_);
  }

 private:
  void statement(const Statement& st) {
    pos_ = st.pos;
    switch (st.kind) {
      case Statement::Kind::chart:
        declare_chart(st.chart);
        break;
      case Statement::Kind::tensor:
        declare_tensor(st.tensor);
        break;
      case Statement::Kind::connection:
        declare_connection(st.connection);
        break;
      case Statement::Kind::command:
        OutputRecord rec;
        rec.command = st.text;
        rec.line = st.pos.line;
        command(st.command, rec);
        res_.records.push_back(std::move(rec));
        break;
    }
  }

  // ---- names

  const Chart& chart(const std::string& n) {
    auto it = charts_.find(n);
    if (it == charts_.end()) name_error("unknown chart " + n, pos_);
    return it->second;
  }
  const TensorField& tensor(const std::string& n) {
    auto it = tensors_.find(n);
    if (it == tensors_.end()) name_error("unknown name " + n, pos_);
    return it->second;
  }
  const AffineConnection& connection(const std::string& n) {
    auto it = conns_.find(n);
    if (it == conns_.end()) name_error("unknown connection " + n, pos_);
    return it->second;
  }
  void bind(const std::string& n, TensorField t) { tensors_.insert_or_assign(n, std::move(t)); }

  const LiftContext& context(const Chart& c, long r) {
    if (r < 0) semantic("r must be non-negative", pos_);
    auto key = std::make_pair(c.id(), r);
    auto it = ctx_.find(key);
    if (it == ctx_.end()) it = ctx_.emplace(key, LiftContext(c, static_cast<int>(r))).first;
    charts_.try_emplace(it->second.prolonged().label(), it->second.prolonged());
    return it->second;
  }

  static std::optional<long> option(const Command& c, const std::string& k) {
    for (const auto& [key, v] : c.options)
      if (key == k) return v;
    return std::nullopt;
  }
  long required(const Command& c, const std::string& k) {
    auto v = option(c, k);
    if (!v) semantic(c.verb + " " + (c.args.empty() ? "" : c.args[0]) + ": missing " + k + "=", pos_);
    return *v;
  }

  // ---- declarations

  void declare_chart(const ChartDecl& d) {
    std::vector<std::string> names;
    std::vector<std::vector<int>> weights;
    for (const auto& [n, w] : d.vars) {
      if (n == "ox" || n == "at" || n == "as") semantic("'" + n + "' is reserved", pos_);
      names.push_back(n);
      weights.push_back(w);
    }
    charts_.insert_or_assign(d.name, make_chart(names, weights, {}, d.name, d.vb));
  }

  void declare_tensor(const TensorDecl& d) {
    const Chart& c = chart(d.chart);
    auto t = evaluate_expr(d.value, c, [this](const std::string& n) -> const TensorField* {
      auto it = tensors_.find(n);
      return it == tensors_.end() ? nullptr : &it->second;
    });
    auto valence = [&](int q, int p) {
      if (t.q() != q || (p >= 0 && t.p() != p))
        semantic(d.kind + " " + d.name + " has valence (" + std::to_string(t.q()) + "," + std::to_string(t.p()) +
                     ")",
                 pos_);
    };
    if (d.kind == "fn") {
      valence(0, 0);
    } else if (d.kind == "vf") {
      valence(1, 0);
    } else if (d.kind == "form") {
      valence(0, -1);
      t = t.with_symmetry(Symmetry::none, Symmetry::antisymmetric);
    } else {
      valence(d.q, d.p);
      if (d.symmetry != Symmetry::none) {
        auto contra = t.q() >= 2 ? d.symmetry : t.contra_symmetry();
        auto cov = t.p() >= 2 ? d.symmetry : t.cov_symmetry();
        if (!t.has_symmetry(contra, cov)) semantic(d.name + " is not " + symmetry_name(d.symmetry), pos_);
        t = t.with_symmetry(contra, cov);
      }
    }
    bind(d.name, std::move(t));
  }

  void declare_connection(const ConnectionDecl& d) {
    const Chart& c = chart(d.chart);
    std::map<std::array<std::uint32_t, 3>, Poly> g;
    for (const auto& e : d.entries) {
      std::array<std::uint32_t, 3> key{};
      const std::string* names[3] = {&e.upper, &e.lower1, &e.lower2};
      for (int i = 0; i < 3; ++i) {
        auto v = c.find(*names[i]);
        if (!v) name_error(*names[i] + " not in " + c.label(), e.pos);
        key[i] = v->index;
      }
      auto val = evaluate_expr(e.value, c, nullptr);
      if (val.q() != 0 || val.p() != 0) semantic("Christoffel symbols are functions", e.pos);
      g[key] += val.as_scalar();
    }
    conns_.insert_or_assign(d.name, make_affine_connection(c, std::move(g)));
  }

  // ---- commands

  void emit(OutputRecord& rec, const TensorField& t, const std::optional<std::string>& alias) {
    auto text = render_tensor(t);
    rec.text.push_back(text);
    rec.result = tensor_json(t, text);
    if (alias) bind(*alias, t);
  }

  void emit_report(OutputRecord& rec, const std::string& head, const CheckReport& r) {
    rec.text.push_back(report_line(head, r));
    if (r.witness) rec.text.push_back("  witness: " + *r.witness);
    rec.report = r;
  }

  SamplePlan plan() const {
    SamplePlan p;
    p.seed = opt_.seed;
    p.count = opt_.samples;
    return p;
  }

  Distribution distribution(const Command& c) {
    std::vector<TensorField> gens;
    for (std::size_t i = 1; i < c.args.size(); ++i) gens.push_back(tensor(c.args[i]));
    return make_distribution(std::move(gens));
  }

  void command(const Command& c, OutputRecord& rec) {
    const auto& v = c.verb;
    if (v == "lift") {
      const auto& t = tensor(c.args[0]);
      const auto& ctx = context(t.chart(), required(c, "r"));
      emit(rec, lift_tensor(t, static_cast<int>(required(c, "lambda")), ctx), c.alias);
    } else if (v == "bracket") {
      const auto& a = tensor(c.args[1]);
      const auto& b = tensor(c.args[2]);
      const auto& k = c.args[0];
      emit(rec,
           k == "lie"        ? lie_bracket(a, b)
           : k == "schouten" ? schouten_bracket(a, b)
           : k == "fn"       ? fn_bracket(a, b)
                             : nr_bracket(a, b),
           c.alias);
    } else if (v == "d") {
      emit(rec, exterior_derivative(tensor(c.args[0])), c.alias);
    } else if (v == "liederiv") {
      emit(rec, lie_derivative(tensor(c.args[0]), tensor(c.args[1])), c.alias);
    } else if (v == "interior") {
      emit(rec, interior(tensor(c.args[0]), tensor(c.args[1])), c.alias);
    } else if (v == "degree") {
      const auto& t = tensor(c.args[0]);
      int comp = static_cast<int>(option(c, "component").value_or(0));
      auto d = degree_of_tensor(t, comp);
      rec.text.push_back("deg " + c.args[0] + " = " + render_degree(d));
      rec.result = json{{"kind", "degree"}, {"component", comp}, {"value", render_degree(d)}};
    } else if (v == "check") {
      check(c, rec);
    } else if (v == "prolong") {
      const auto& ctx = context(chart(c.args[0]), required(c, "r"));
      if (c.alias) charts_.insert_or_assign(*c.alias, ctx.prolonged());
      rec.text.push_back(chart_text(ctx.prolonged()));
      rec.result = chart_json(ctx.prolonged());
    } else if (v == "lift-connection") {
      const auto& g = connection(c.args[0]);
      const auto& ctx = context(g.chart, required(c, "r"));
      auto lifted = lift_affine_connection(g, ctx);
      const auto& pc = ctx.prolonged();
      std::string name = c.alias.value_or(c.args[0] + "_lift");
      rec.text.push_back("connection " + name + " on " + pc.label() + " {");
      json entries = json::array();
      for (const auto& [key, f] : lifted.gamma) {
        auto n = [&](std::uint32_t i) { return pc.name(VarRef{i}); };
        auto val = render_poly(f, pc);
        rec.text.push_back("  " + n(key[0]) + " " + n(key[1]) + " " + n(key[2]) + ": " + val + ",");
        entries.push_back(json{{"upper", n(key[0])}, {"lower", {n(key[1]), n(key[2])}}, {"value", val}});
      }
      if (!lifted.gamma.empty()) rec.text.back().pop_back();
      rec.text.push_back("}");
      rec.result = json{{"kind", "connection"}, {"name", name}, {"chart", pc.label()}, {"entries", entries}};
      if (c.alias) conns_.insert_or_assign(*c.alias, std::move(lifted));
    } else if (v == "covderiv") {
      emit(rec, covariant_derivative(connection(c.args[0]), tensor(c.args[1]), tensor(c.args[2])), c.alias);
    } else if (v == "eval") {
      const auto& t = tensor(c.args[0]);
      const auto& ch = t.chart();
      std::vector<Rational> pt(ch.size());
      std::vector<bool> set(ch.size());
      for (const auto& [n, val] : c.point) {
        auto var = ch.find(n);
        if (!var) name_error(n + " not in " + ch.label(), pos_);
        pt[var->index] = val;
        set[var->index] = true;
      }
      for (std::uint32_t i = 0; i < ch.size(); ++i)
        if (!set[i]) semantic("no value for " + ch.name(VarRef{i}), pos_);
      emit(rec, t.map_coefficients([&](const Poly& f) { return ch.constant(evaluate(f, pt)); }), c.alias);
    } else if (v == "oracle") {
      oracle(c, rec);
    } else if (v == "sharp" || v == "flat") {
      auto m = v == "sharp" ? sharp_map(tensor(c.args[0])) : flat_map(tensor(c.args[0]));
      std::string text = "[";
      json rows = json::array();
      for (std::size_t i = 0; i < m.entries.size(); ++i) {
        json row = json::array();
        text += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.entries[i].size(); ++j) {
          auto e = render_poly(m.entries[i][j], m.chart);
          text += (j ? ", " : "") + e;
          row.push_back(e);
        }
        text += "]";
        rows.push_back(row);
      }
      text += "]";
      rec.text.push_back(text);
      rec.result = json{{"kind", "matrix"}, {"chart", m.chart.label()}, {"entries", rows}};
    } else if (v == "torsion") {
      emit(rec, nijenhuis_torsion(tensor(c.args[0])), c.alias);
    } else if (v == "concomitant") {
      emit(rec, concomitant(tensor(c.args[0]), tensor(c.args[1])), c.alias);
    } else if (v == "compose") {
      emit(rec, compose_11(tensor(c.args[0]), tensor(c.args[1])), c.alias);
    } else if (v == "show") {
      emit(rec, tensor(c.args[0]), std::nullopt);
    }
  }

  void check(const Command& c, OutputRecord& rec) {
    const auto& kind = c.args[0];
    auto arity = [&](std::size_t n) {
      if (c.args.size() != n + 1) semantic("check " + kind + " takes " + std::to_string(n) + " argument(s)", pos_);
    };
    int comp = static_cast<int>(option(c, "component").value_or(0));
    CheckReport r;
    if (kind == "weighted-distribution" || kind == "involutive") {
      auto d = distribution(c);
      r = kind == "involutive" ? is_involutive(d, plan()) : is_weighted_distribution(d, comp, plan());
    } else if (kind == "identity" || kind == "equal") {
      arity(2);
      const auto& a = tensor(c.args[1]);
      const auto& b = tensor(c.args[2]);
      if (kind == "identity") {
        r = identity_spot_check(a, b, plan());
        r.check = "identity";
      } else {
        r.check = "equal";
        if (!(a == b)) {
          require_same_chart(a, b);
          if (a.q() != b.q() || a.p() != b.p()) throw ValenceError("comparing tensors of different valence");
          r.fail("difference = " + render_tensor(a - b));
        }
      }
    } else if (kind == "pn") {
      arity(2);
      r = is_weighted_pn(tensor(c.args[1]), tensor(c.args[2]), static_cast<int>(required(c, "k")), comp);
    } else {
      arity(1);
      const auto& t = tensor(c.args[1]);
      if (kind == "poisson")
        r = is_poisson(t);
      else if (kind == "weighted")
        r = is_weighted_tensor(t, comp, static_cast<int>(required(c, "k")));
      else if (kind == "weighted-poisson")
        r = is_weighted_poisson(t, static_cast<int>(required(c, "k")), comp);
      else if (kind == "nijenhuis")
        r = is_nijenhuis(t);
      else if (kind == "weighted-nijenhuis")
        r = is_weighted_nijenhuis(t, comp);
      else if (kind == "almost-complex")
        r = is_almost_complex(t);
      else if (kind == "almost-product")
        r = is_almost_product(t);
      else if (kind == "almost-tangent")
        r = is_almost_tangent(t);
      else
        r = is_weighted_contact(t, static_cast<int>(required(c, "k")), comp);
    }
    std::string head = "check " + kind;
    for (std::size_t i = 1; i < c.args.size(); ++i) head += " " + c.args[i];
    emit_report(rec, head, r);
    rec.result = json{{"kind", "check"}};
  }

  void oracle(const Command& c, OutputRecord& rec) {
    const auto& kind = c.args[0];
    auto arity = [&](std::size_t n) {
      if (c.args.size() != n + 1) semantic("oracle " + kind + " takes " + std::to_string(n) + " argument(s)", pos_);
    };
    TensorField value, engine;
    if (kind == "taylor") {
      arity(1);
      const auto& f = tensor(c.args[1]);
      if (f.q() != 0 || f.p() != 0) semantic("oracle taylor needs a function", pos_);
      const auto& ctx = context(f.chart(), required(c, "r"));
      int lambda = static_cast<int>(required(c, "lambda"));
      value = TensorField::scalar(ctx.prolonged(), taylor_lift_oracle(f.as_scalar(), lambda, ctx));
      engine = TensorField::scalar(ctx.prolonged(), lift_function(f.as_scalar(), lambda, ctx));
    } else if (kind == "schouten") {
      arity(2);
      value = schouten_oracle(tensor(c.args[1]), tensor(c.args[2]));
      engine = schouten_bracket(tensor(c.args[1]), tensor(c.args[2]));
    } else if (kind == "koszul") {
      arity(4);
      const auto& l = tensor(c.args[1]);
      const auto& n = tensor(c.args[2]);
      const auto& a = tensor(c.args[3]);
      const auto& b = tensor(c.args[4]);
      value = koszul_concomitant_oracle(l, n, a, b);
      engine = pair_concomitant(concomitant(l, n), a, b);
    } else {
      arity(1);
      value = torsion_oracle(tensor(c.args[1]));
      engine = nijenhuis_torsion(tensor(c.args[1]));
    }
    auto text = render_tensor(value);
    rec.text.push_back(text);
    CheckReport r;
    r.check = "oracle-" + kind;
    if (!(value == engine)) r.fail("engine gives " + render_tensor(engine));
    emit_report(rec, "agrees with engine", r);
    rec.result = tensor_json(value, text);
  }

  RunOptions opt_;
  RunResult res_;
  SourcePos pos_;
  std::map<std::string, Chart> charts_;
  std::map<std::string, TensorField> tensors_;
  std::map<std::string, AffineConnection> conns_;
  std::map<std::pair<std::uint64_t, long>, LiftContext> ctx_;
};

}  // namespace

namespace {

bool has_wedge(const Expr& e) {
  if (e.kind == Expr::Kind::wedge) return true;
  for (const auto& a : e.args)
    if (has_wedge(a)) return true;
  return false;
}

}  // namespace

// Rendered text writes an antisymmetric block with ^^, so a block that came
// out antisymmetric from a wedged expression gets its tag back.
TensorField parse_tensor(std::string_view text, const Chart& chart) {
  auto e = parse_expression(text);
  auto k = evaluate_expr(e, chart, nullptr);
  if (!has_wedge(e) || k.is_zero()) return k;
  auto anti = [&](bool contra) {
    int n = contra ? k.q() : k.p();
    if (n < 2) return Symmetry::none;
    auto s = contra ? symmetrize(k, Symmetry::antisymmetric, Symmetry::none)
                    : symmetrize(k, Symmetry::none, Symmetry::antisymmetric);
    return s == k ? Symmetry::antisymmetric : Symmetry::none;
  };
  return k.with_symmetry(anti(true), anti(false));
}

RunResult execute(const Script& script, const RunOptions& options) { return Session(options).run(script); }

RunResult run_script(std::string_view text, const RunOptions& options) {
  try {
    return execute(parse_script(text), options);
  } catch (const ScriptError& e) {
    RunResult r;
    r.error = e.diagnostic();
    r.exit_code = e.exit_code();
    return r;
  }
}

json report_json(const CheckReport& r) {
  json j{{"check", r.check}, {"verdict", r.pass ? "pass" : "fail"}};
  if (r.witness) j["witness"] = *r.witness;
  if (!r.degrees.empty()) j["degrees"] = r.degrees;
  j["probabilistic"] = r.probabilistic;
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

std::string format_text(const RunResult& r) {
  std::string out;
  for (const auto& rec : r.records)
    for (const auto& line : rec.text) out += line + "\n";
  return out;
}

std::string format_json(const RunResult& r, const RunOptions& options) {
  json records = json::array();
  for (const auto& rec : r.records) {
    json j{{"line", rec.line}, {"command", rec.command}};
    if (!rec.result.is_null()) j["result"] = rec.result;
    if (rec.report) j["report"] = report_json(*rec.report);
    records.push_back(std::move(j));
  }
  json doc{{"gradcalc_version", GRADCALC_VERSION},
           {"schema", 1},
           {"seed", options.seed},
           {"samples", options.samples},
           {"records", records},
           {"exit_code", r.exit_code}};
  if (r.error)
    doc["error"] = json{{"code", r.error->code},
                        {"message", r.error->message},
                        {"line", r.error->pos.line},
                        {"column", r.error->pos.column}};
  return doc.dump(2) + "\n";
}

}  // namespace gradcalc
