#include <catch2/catch_amalgamated.hpp>

#include "qdeqomp/dsl.hpp"
#include "qdeqomp/random_gen.hpp"

using namespace qdeqomp;

namespace {
IndexExpr n_() { return IndexExpr::size_var(); }
IndexExpr iv(int k) { return IndexExpr::loop_var(k); }
IndexExpr c_(long long v) { return IndexExpr::int_const(v); }

GenProgram rx_c_program() {
  return GenProgram{
      {Statement::loop(0, n_(), {Statement::gate_call(Gate::RX, {iv(0)}, {AngleExpr{1, iv(0), c_(0), 0}})})}};
}
}  // namespace

TEST_CASE("canonical DSL rendering", "[dsl]") {
  CHECK(render_dsl(GenProgram{{Statement::gate_call(Gate::H, {c_(0)})}}) == "g h [0]\n");
  CHECK(render_dsl(rx_c_program()) == "for i0 in range(n):\n  g rx [i0] (pi/(2^i0 + 0 + 0))\n");

  Statement cx = Statement::gate_call(Gate::CX, {IndexExpr::sub(iv(0), n_()), IndexExpr::add(iv(0), c_(1))});
  CHECK(render_dsl(GenProgram{{Statement::loop(0, n_(), {cx})}}) ==
        "for i0 in range(n):\n  g cx [i0 - n, i0 + 1]\n");

  Statement swap = Statement::gate_call(Gate::SWAP, {c_(0), c_(1)});
  Statement nested = Statement::loop(0, IndexExpr::abs(IndexExpr::sub(n_(), c_(2))),
                                     {Statement::loop(1, iv(0), {swap})});
  CHECK(render_dsl(GenProgram{{nested}}) ==
        "for i0 in range(abs(n - 2)):\n  for i1 in range(i0):\n    g swap [0, 1]\n");

  CHECK(render_dsl(GenProgram{{Statement::gate_call(Gate::RZ, {c_(0)}, {AngleExpr{-1, c_(1), c_(0), 0}})}}) ==
        "g rz [0] (-pi/(2^1 + 0 + 0))\n");
  CHECK(render_dsl(GenProgram{{Statement::gate_call(Gate::RZ, {c_(0)}, {AngleExpr{1, c_(0), c_(0), -2}})}}) ==
        "g rz [0] (pi/(2^0 + 0 - 2))\n");
  CHECK(render_dsl(GenProgram{{Statement::gate_call(Gate::RZ, {c_(0)}, {AngleExpr{1, c_(-1), n_(), 3}})}}) ==
        "g rz [0] (pi/(2^(-1) + n + 3))\n");
}

TEST_CASE("expression rendering distinguishes negation forms", "[dsl]") {
  CHECK(render_dsl(GenProgram{{Statement::gate_call(Gate::H, {IndexExpr::sub(c_(0), n_())})}}) == "g h [-n]\n");
  CHECK(render_dsl(GenProgram{{Statement::gate_call(Gate::H, {IndexExpr::sub(c_(0), c_(2))}) }}) == "g h [0 - 2]\n");
  CHECK(render_dsl(GenProgram{{Statement::gate_call(Gate::H, {c_(-3)})}}) == "g h [-3]\n");
  CHECK(render_dsl(GenProgram{{Statement::gate_call(Gate::H, {IndexExpr::add(n_(), IndexExpr::sub(iv(0), c_(1)))})}}) ==
        "g h [n + (i0 - 1)]\n"); // right operand keeps its parens so parsing is unambiguous

  for (const std::string text : {"g h [-n]\n", "g h [0 - 2]\n", "g h [-3]\n", "g h [n + (i0 - 1)]\n"}) {
    GenProgram p = parse_dsl(text);
    CHECK(render_dsl(p) == text);
  }
}

TEST_CASE("parse of rendered program is the identity", "[dsl]") {
  std::vector<GrammarParams> grammars(4);
  grammars[1].operations = {Gate::RX, Gate::CP, Gate::CCX, Gate::SWAP};
  grammars[1].max_loop_depth = 3;
  grammars[2].operations = {Gate::RZ, Gate::CRZ, Gate::P};
  grammars[2].max_length = 3;
  grammars[3].operations = {Gate::H};
  grammars[3].max_loop_depth = 0;

  RandomSource rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const GrammarParams& g = grammars[static_cast<std::size_t>(trial % 4)];
    GenProgram p = random_program(g, rng);
    std::string text = render_dsl(p);
    GenProgram back = parse_dsl(text);
    REQUIRE(back == p);
    CHECK(render_dsl(back) == text);
  }
}

TEST_CASE("parser reports errors with line numbers", "[dsl]") {
  CHECK_THROWS_AS(parse_dsl("g foo [0]\n"), DslError);
  CHECK_THROWS_AS(parse_dsl("g cx [0]\n"), DslError);                          // arity mismatch
  CHECK_THROWS_AS(parse_dsl("g rx [0]\n"), DslError);                          // missing angle
  CHECK_THROWS_AS(parse_dsl("g h [0] (pi/(2^0 + 0 + 0))\n"), DslError);        // unexpected angle
  CHECK_THROWS_AS(parse_dsl("for i1 in range(n):\n  g h [i1]\n"), DslError);   // binder depth wrong
  CHECK_THROWS_AS(parse_dsl("for j in range(n):\n  g h [0]\n"), DslError);     // binder name wrong
  CHECK_THROWS_AS(parse_dsl("  g h [0]\n"), DslError);                         // unexpected indent
  CHECK_THROWS_AS(parse_dsl("for i0 in range(n):\n   g h [0]\n"), DslError);   // odd indent
  CHECK_THROWS_AS(parse_dsl("g rx [0] (pi/(3^1 + 0 + 0))\n"), DslError);       // malformed angle base
  CHECK_THROWS_AS(parse_dsl("g h [0\n"), DslError);                            // unterminated bracket
  CHECK_THROWS_AS(parse_dsl("h q[0];\n"), DslError);                           // qasm is not dsl

  // an empty loop body is legal (it instantiates to nothing)
  GenProgram empty_loop = parse_dsl("for i0 in range(n):\n");
  REQUIRE(empty_loop.body.size() == 1);
  CHECK(empty_loop.body[0].is_loop());
  CHECK(empty_loop.body[0].body.empty());

  // duplicate constant operands parse fine; the clash is an instantiation-time error
  GenProgram dup = parse_dsl("g cx [0, 0]\n");
  CHECK_THROWS_AS(instantiate(dup, 3), EvalError);

  try {
    parse_dsl("g h [0]\ng foo [0]\n");
    FAIL("expected DslError");
  } catch (const DslError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("comments and blank lines are skipped", "[dsl]") {
  GenProgram p = parse_dsl("# header comment\n\ng h [0]\n\n# trailing\n");
  REQUIRE(p.body.size() == 1);
  CHECK(p.body[0].gate == Gate::H);
}

TEST_CASE("pythonic rendering", "[dsl]") {
  std::string py = render_pythonic(rx_c_program(), "rx_c");
  CHECK(py.find("def rx_c(n):") == 0);
  CHECK(py.find("qc = QuantumCircuit(n)") != std::string::npos);
  CHECK(py.find("for i0 in range(n):") != std::string::npos);
  CHECK(py.find("qc.rx(pi * (1 / (2 ** (i0) + (0 + 0))), (i0) % n)") != std::string::npos);
  CHECK(py.rfind("    return qc\n") == py.size() - 14);

  CHECK(render_pythonic(GenProgram{}) == "def decompiled(n):\n    qc = QuantumCircuit(n)\n    return qc\n");

  GenProgram neg{{Statement::gate_call(Gate::RZ, {c_(0)}, {AngleExpr{-1, c_(1), c_(0), 0}})}};
  CHECK(render_pythonic(neg).find("qc.rz(-(pi * (1 / (2 ** (1) + (0 + 0)))), (0) % n)") != std::string::npos);
}
