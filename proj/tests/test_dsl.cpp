#include "gradcalc/calculus.hpp"
#include "gradcalc/dsl.hpp"
#include "gradcalc/lifts.hpp"
#include "gradcalc/random.hpp"
#include "support.hpp"

using namespace testing;

namespace {

std::string out(const RunResult& r) { return format_text(r); }

const char* prelude = "chart M { x:0, y:0 }\n";

RunResult run(const std::string& body, RunOptions o = {}) { return run_script(prelude + body, o); }

}  // namespace

TEST_SUITE("dsl") {
  TEST_CASE("chart declarations") {
    auto s = parse_script("chart M { x:0, y:0 }");
    REQUIRE(s.statements.size() == 1);
    const auto& c = s.statements[0].chart;
    CHECK(s.statements[0].kind == Statement::Kind::chart);
    CHECK(c.name == "M");
    REQUIRE(c.vars.size() == 2);
    CHECK(c.vars[1].first == "y");
    CHECK(c.vars[1].second == std::vector<int>{0});

    auto g = parse_script("chart E {\n  x:0,0,\n  y:1,0, z:0,1\n} vb=1").statements[0].chart;
    REQUIRE(g.vars.size() == 3);
    CHECK(g.vars[1].second == std::vector<int>{1, 0});
    CHECK(g.vb == 1);
    CHECK_THROWS_AS(parse_script("chart M { }"), ScriptError);
    CHECK_THROWS_AS(parse_script("chart M { x:0, x:1 }"), ScriptError);
  }

  TEST_CASE("tensor declarations") {
    auto s = parse_script("vf X on M = x * d/dy");
    const auto& st = s.statements[0];
    CHECK(st.kind == Statement::Kind::tensor);
    CHECK(st.tensor.kind == "vf");
    CHECK(st.tensor.name == "X");
    CHECK(st.tensor.chart == "M");
    CHECK(st.tensor.value.kind == Expr::Kind::mul);
    CHECK(st.tensor.value.args[1].kind == Expr::Kind::vector_basis);
    CHECK(st.tensor.value.args[1].name == "y");

    auto t = parse_script("tensor(2,0) antisym L on M = d/dx ^^ d/dy").statements[0].tensor;
    CHECK(t.q == 2);
    CHECK(t.symmetry == Symmetry::antisymmetric);
  }

  TEST_CASE("diagnostics") {
    auto name = run("vf X on M = x * d/dz\n");
    CHECK(name.exit_code == 2);
    REQUIRE(name.error);
    CHECK(name.error->code == "E_NAME");
    CHECK(name.error->message == "z not in M");
    CHECK(name.error->pos.line == 2);
    CHECK(name.error->pos.column == 17);

    auto lexical = run("fn f on M = x $ y\n");
    CHECK(lexical.exit_code == 2);
    CHECK(lexical.error->code == "E_LEX");

    auto syntax = run("fn f on M = x +\n");
    CHECK(syntax.exit_code == 2);
    CHECK(syntax.error->code == "E_SYNTAX");

    CHECK(run("frobnicate X\n").error->code == "E_SYNTAX");
    CHECK(run("lift X r=1\n").error->code == "E_SYNTAX");
    CHECK(run("lift X lambda=1 r=1 extra=2\n").error->code == "E_SYNTAX");
    CHECK(run("check nonsense X\n").error->code == "E_SYNTAX");
    CHECK(run("show Q\n").error->code == "E_NAME");
    CHECK(run("vf X on N = d/dx\n").error->code == "E_NAME");

    auto sem = run("vf X on M = dx\n");
    CHECK(sem.exit_code == 3);
    CHECK(sem.error->code == "E_SEMANTIC");
    CHECK(run("fn f on M = d/dx * d/dy\n").exit_code == 3);
    CHECK(run("fn f on M = x / y\n").exit_code == 3);
    CHECK(run("vf X on M = d/dx\nd X\n").exit_code == 3);
    CHECK(run("tensor(2,0) antisym L on M = d/dx ox d/dy\n").exit_code == 3);
  }

  TEST_CASE("statements before an error still run") {
    auto r = run("vf X on M = x*d/dy\nshow X\nshow Y\n");
    CHECK(r.exit_code == 2);
    CHECK(out(r) == "x*d/dy\n");
  }

  TEST_CASE("lift command") {
    auto r = run("vf X on M = x * d/dy\nlift X lambda=1 r=1\n");
    CHECK(r.exit_code == 0);
    CHECK(out(r) == "x*d/dy + x_1*d/dy_1\n");
    auto two = run("form a on M = x*dy\nlift a lambda=2 r=2 as A\nshow A\ndegree A component=1\n");
    CHECK(out(two) == "x_2*dy + x_1*dy_1 + x*dy_2\nx_2*dy + x_1*dy_1 + x*dy_2\ndeg A = 2\n");
    // lifts land on one registered prolonged chart
    auto chain = run("vf X on M = x*d/dy\nlift X lambda=1 r=1 as X1\nvf Z on T1M = d/dx_1\nbracket lie Z X1\n");
    CHECK(chain.exit_code == 0);
    CHECK(out(chain).substr(out(chain).find('\n') + 1) == "d/dy_1\n");
  }

  TEST_CASE("check commands and exit codes") {
    auto ok = run("tensor(2,0) antisym L on M = d/dx ^^ d/dy\ncheck poisson L\n");
    CHECK(ok.exit_code == 0);
    CHECK(out(ok) == "check poisson L: pass\n");

    auto bad = run("form K on M = y*dx\ncheck weighted K k=1\n");
    CHECK(bad.exit_code == 1);
    REQUIRE(bad.records.size() == 1);
    REQUIRE(bad.records[0].report);
    CHECK_FALSE(bad.records[0].report->pass);
    auto js = nlohmann::json::parse(format_json(bad, {}));
    CHECK(js["exit_code"] == 1);
    CHECK(js["records"][0]["report"]["verdict"] == "fail");
    CHECK(js["records"][0]["report"].contains("witness"));

    auto g = run_script(
        "chart G { x:0, y:1 }\n"
        "vf D on G = d/dx + d/dy\n"
        "check weighted-distribution D\n"
        "check involutive D\n",
        {7, 4});
    CHECK(g.exit_code == 1);
    CHECK(g.records[0].report->probabilistic);
    CHECK(g.records[0].report->seed == 7u);
    CHECK(g.records[1].report->pass);

    auto n = run(
        "tensor(1,1) J on M = d/dy ox dx - d/dx ox dy\n"
        "check almost-complex J\ncheck nijenhuis J\ncheck almost-tangent J\n");
    CHECK(out(n) ==
          "check almost-complex J: pass\ncheck nijenhuis J: pass\ncheck almost-tangent J: fail\n"
          "  witness: N o N = -d/dx ox dx - d/dy ox dy\n");
    CHECK(run("fn f on M = (x+y)^2\nfn g on M = x^2 + 2*x*y + y^2\ncheck identity f g\ncheck equal f g\n")
              .exit_code == 0);
    CHECK(run("fn f on M = x\ncheck weighted f\n").exit_code == 3);
  }

  TEST_CASE("calculus commands") {
    auto r = run(
        "vf X on M = x*d/dy\nvf Y on M = y*d/dx\n"
        "bracket lie X Y\n"
        "form w on M = x*y*dx\nd w\n"
        "liederiv X w\n"
        "interior X w\n"
        "tensor(2,0) antisym P on M = x*d/dx ^^ d/dy\nbracket schouten P P\n"
        "tensor(1,1) N on M = y*d/dx ox dy\ntorsion N\ncompose N N\n"
        "tensor(1,1) S on M = d/dx ox dy\nbracket nr N S\nbracket fn N S\n");
    CHECK(r.exit_code == 0);
    std::vector<std::string> lines;
    std::string t = out(r);
    for (std::size_t a = 0, b; (b = t.find('\n', a)) != std::string::npos; a = b + 1) lines.push_back(t.substr(a, b - a));
    REQUIRE(lines.size() == 9);
    CHECK(lines[0] == "x*d/dx - y*d/dy");
    CHECK(lines[1] == "-x*dx ^^ dy");
  }

  TEST_CASE("prolong, connections and evaluation") {
    auto r = run("prolong M r=1\n");
    CHECK(out(r) == "chart T1M { x:0,0, y:0,0, x_1:0,1, y_1:0,1 }\n");
    // the printed chart parses back
    CHECK(run_script(out(r)).exit_code == 0);

    auto c = run(
        "connection G on M { y x x: 1 }\n"
        "vf X on M = d/dx\ncovderiv G X X\n"
        "lift-connection G r=1 as G1\n"
        "lift X lambda=1 r=1 as X1\ncovderiv G1 X1 X1\n");
    CHECK(c.exit_code == 0);
    CHECK(out(c) ==
          "d/dy\n"
          "connection G1 on T1M {\n  y x x: 1,\n  y_1 x x_1: 1,\n  y_1 x_1 x: 1\n}\n"
          "d/dx\nd/dy\n");

    auto e = run("fn f on M = x*y\neval f at (x=2, y=3/2)\nform w on M = y*dx\neval w at (x=1, y=-1/2)\n");
    CHECK(out(e) == "3\n-1/2*dx\n");
    CHECK(run("fn f on M = x*y\neval f at (x=2)\n").exit_code == 3);
    CHECK(run("fn f on M = x*y\neval f at (x=2, q=1)\n").exit_code == 2);
  }

  TEST_CASE("oracle commands") {
    auto r = run(
        "fn f on M = x*y\noracle taylor f lambda=1 r=2\n"
        "tensor(2,0) antisym P on M = x*d/dx ^^ d/dy\noracle schouten P P\n"
        "tensor(1,1) N on M = y*d/dx ox dy\noracle torsion N\n");
    CHECK(r.exit_code == 0);
    CHECK(out(r).find("x*y_1 + y*x_1\nagrees with engine: pass\n") == 0);
    auto k = run_script(
        "chart R { x:0, y:0, z:0 }\n"
        "tensor(2,0) antisym L on R = d/dx ^^ d/dy\n"
        "tensor(1,1) N on R = z*d/dx ox dx + z*d/dy ox dy + z*d/dz ox dz\n"
        "form a on R = dx\nform b on R = dy\n"
        "oracle koszul L N a b\n");
    CHECK(out(k) == "-dz\nagrees with engine: pass\n");
  }

  TEST_CASE("sharp and flat") {
    auto r = run("tensor(2,0) antisym L on M = d/dx ^^ d/dy\nsharp L\ntensor(0,2) g on M = dx ox dx + dy ox dy\nflat g\n");
    CHECK(out(r) == "[[0, 1], [-1, 0]]\n[[1, 0], [0, 1]]\n");
  }

  TEST_CASE("unicode aliases") {
    CHECK(normalize_unicode("x₁₂ ⊗ ∂/∂y ∧ dz · 2 − 1") == "x_12  ox  d/dy  ^^  dz * 2 - 1");
    auto r = run("vf X on M = x·∂/∂y\nlift X λ=1 r=1\n");
    CHECK(out(r) == "x*d/dy + x_1*d/dy_1\n");
    auto w = run("form w on M = dx ∧ dy\nshow w\n");
    CHECK(out(w) == "dx ^^ dy\n");
  }

  TEST_CASE("comments and separators") {
    auto r = run("# a comment\nvf X on M = d/dx; show X   # trailing\n\n;show X\n");
    CHECK(r.exit_code == 0);
    CHECK(out(r) == "d/dx\nd/dx\n");
  }

  TEST_CASE("json output") {
    auto r = run("vf X on M = x*d/dy\nlift X lambda=1 r=1\n");
    auto js = nlohmann::json::parse(format_json(r, {}));
    CHECK(js["schema"] == 1);
    CHECK(js.contains("gradcalc_version"));
    CHECK(js["seed"] == 42);
    CHECK(js["records"][0]["command"] == "lift X lambda=1 r=1");
    CHECK(js["records"][0]["line"] == 3);
    CHECK(js["records"][0]["result"]["text"] == "x*d/dy + x_1*d/dy_1");
    CHECK(js["records"][0]["result"]["chart"] == "T1M");
    CHECK(js["records"][0]["result"]["valence"] == nlohmann::json::array({1, 0}));

    auto e = run("vf X on M = x * d/dz\n");
    auto je = nlohmann::json::parse(format_json(e, {}));
    CHECK(je["error"]["code"] == "E_NAME");
    CHECK(je["exit_code"] == 2);
  }

  TEST_CASE("execution is deterministic") {
    const char* script =
        "chart G { x:0, y:1, z:2 }\n"
        "vf D on G = d/dx + y*d/dz\nvf E on G = d/dy\n"
        "check weighted-distribution D E\ncheck involutive D E\n"
        "fn f on G = x*y\nfn g on G = x + y\ncheck identity f g\n";
    RunOptions o{123, 5};
    auto a = format_json(run_script(script, o), o);
    auto b = format_json(run_script(script, o), o);
    CHECK(a == b);
    RunOptions o2{124, 5};
    CHECK(format_json(run_script(script, o2), o2) != a);
  }

  TEST_CASE("parse after render is the identity") {
    Sampler s(501);
    std::vector<Chart> charts{plane(), graded3(), prolong_chart(plane(), 2),
                              make_chart({"a", "b_1", "c"}, {{1}, {2}, {0}})};
    for (int round = 0; round < 300; ++round) {
      const auto& c = charts[round % charts.size()];
      int q = static_cast<int>(s.rng().below(3)), p = static_cast<int>(s.rng().below(3));
      auto sym = [&](int k) {
        if (k < 2) return Symmetry::none;
        auto r = s.rng().below(3);
        return r == 0 ? Symmetry::none : r == 1 ? Symmetry::symmetric : Symmetry::antisymmetric;
      };
      auto k = s.tensor(c, q, p, sym(q), sym(p), 3, 4);
      if (k.is_zero()) continue;  // "0" carries no valence
      auto text = render_tensor(k);
      auto back = parse_tensor(text, c);
      CHECK_MESSAGE(back == k, text);
      CHECK(render_tensor(back) == text);
    }
  }
}
