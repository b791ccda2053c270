#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdeqomp/circuit.hpp"
#include "qdeqomp/expr.hpp"
#include "qdeqomp/gates.hpp"

namespace qdeqomp {

// One node of a size-parameterized circuit generator: either a gate call with
// index/phase expressions, or a counted loop binding the next loop variable.
struct Statement {
  enum class Kind { Gate, Loop };

  Kind kind = Kind::Gate;

  Gate gate = Gate::H;
  std::vector<IndexExpr> qubits;
  std::vector<AngleExpr> angles;

  int depth = 0;   // loop statements: index of the variable this loop binds
  IndexExpr range; // iteration count, clamped at zero
  std::vector<Statement> body;

  static Statement gate_call(Gate g, std::vector<IndexExpr> qs, std::vector<AngleExpr> as = {}) {
    Statement s;
    s.kind = Kind::Gate;
    s.gate = g;
    s.qubits = std::move(qs);
    s.angles = std::move(as);
    return s;
  }

  static Statement loop(int depth, IndexExpr range, std::vector<Statement> body) {
    Statement s;
    s.kind = Kind::Loop;
    s.depth = depth;
    s.range = std::move(range);
    s.body = std::move(body);
    return s;
  }

  bool is_gate() const { return kind == Kind::Gate; }
  bool is_loop() const { return kind == Kind::Loop; }

  int node_count() const {
    if (is_gate()) {
      int total = 1;
      for (const auto& q : qubits) total += q.node_count();
      for (const auto& a : angles) total += a.node_count();
      return total;
    }
    int total = 1 + range.node_count();
    for (const auto& s : body) total += s.node_count();
    return total;
  }

  int gate_stmt_count() const {
    if (is_gate()) return 1;
    int total = 0;
    for (const auto& s : body) total += s.gate_stmt_count();
    return total;
  }

  friend bool operator==(const Statement& x, const Statement& y) {
    if (x.kind != y.kind) return false;
    if (x.is_gate()) return x.gate == y.gate && x.qubits == y.qubits && x.angles == y.angles;
    return x.depth == y.depth && x.range == y.range && x.body == y.body;
  }
};

struct GenProgram {
  std::vector<Statement> body;

  int node_count() const {
    int total = 0;
    for (const auto& s : body) total += s.node_count();
    return total;
  }

  int gate_stmt_count() const {
    int total = 0;
    for (const auto& s : body) total += s.gate_stmt_count();
    return total;
  }

  friend bool operator==(const GenProgram&, const GenProgram&) = default;
};

namespace detail {

inline std::optional<std::string> validate_statements(const std::vector<Statement>& stmts, int depth,
                                                      int max_loop_depth) {
  auto check_expr = [&](const IndexExpr& e) -> std::optional<std::string> {
    if (e.max_loop_var() >= depth)
      return "unbound loop variable i" + std::to_string(e.max_loop_var()) + " at depth " + std::to_string(depth);
    return std::nullopt;
  };
  for (const auto& s : stmts) {
    if (s.is_gate()) {
      const auto& info = gate_info(s.gate);
      if (static_cast<int>(s.qubits.size()) != info.arity) return "qubit expression count mismatch";
      if (static_cast<int>(s.angles.size()) != info.param_count) return "angle expression count mismatch";
      for (const auto& q : s.qubits)
        if (auto err = check_expr(q)) return err;
      for (const auto& a : s.angles) {
        if (auto err = check_expr(a.exponent)) return err;
        if (auto err = check_expr(a.offset)) return err;
        if (a.sign != 1 && a.sign != -1) return "phase sign must be +1 or -1";
      }
    } else {
      if (depth >= max_loop_depth) return "loop nesting exceeds " + std::to_string(max_loop_depth);
      if (s.depth != depth) return "loop binds i" + std::to_string(s.depth) + " at depth " + std::to_string(depth);
      if (auto err = check_expr(s.range)) return err;
      if (auto err = validate_statements(s.body, depth + 1, max_loop_depth)) return err;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// First invariant violation, or nullopt when the program is well-formed.
inline std::optional<std::string> validate(const GenProgram& p, int max_length, int max_loop_depth) {
  if (p.gate_stmt_count() > max_length)
    return "gate statement count " + std::to_string(p.gate_stmt_count()) + " exceeds " + std::to_string(max_length);
  return detail::validate_statements(p.body, 0, max_loop_depth);
}

inline std::size_t instantiation_cap(int n, int max_length) {
  return static_cast<std::size_t>(10) * static_cast<std::size_t>(n) * static_cast<std::size_t>(std::max(1, max_length));
}

namespace detail {

struct Instantiator {
  long long n;
  std::size_t cap;
  std::vector<long long> env;
  std::vector<Instruction> out;

  void emit(const std::vector<Statement>& stmts) {
    for (const auto& s : stmts) {
      if (s.is_gate()) {
        emit_gate(s);
      } else {
        if (s.gate_stmt_count() == 0) continue; // nothing to emit however often it runs
        long long count = s.range.eval(n, env);
        if (count <= 0) continue;
        env.push_back(0);
        for (long long v = 0; v < count; ++v) {
          env.back() = v;
          emit(s.body);
        }
        env.pop_back();
      }
    }
  }

  void emit_gate(const Statement& s) {
    if (out.size() >= cap)
      throw EvalError(EvalError::Kind::ResourceExceeded,
                      "instruction count exceeds cap " + std::to_string(cap));
    Instruction instr;
    instr.kind = s.gate;
    instr.qubits.reserve(s.qubits.size());
    for (const auto& q : s.qubits) {
      long long v = q.eval(n, env);
      long long m = ((v % n) + n) % n;
      instr.qubits.push_back(static_cast<int>(m));
    }
    for (std::size_t i = 0; i < instr.qubits.size(); ++i)
      for (std::size_t j = i + 1; j < instr.qubits.size(); ++j)
        if (instr.qubits[i] == instr.qubits[j])
          throw EvalError(EvalError::Kind::DuplicateQubitOperands,
                          std::string(gate_name(s.gate)) + " operands collide on qubit " +
                              std::to_string(instr.qubits[i]));
    instr.params.reserve(s.angles.size());
    for (const auto& a : s.angles) instr.params.push_back(eval_angle(a, n, env));
    out.push_back(std::move(instr));
  }
};

}  // namespace detail

inline Circuit instantiate(const GenProgram& p, int n, std::size_t max_instructions) {
  detail::Instantiator inst{n, max_instructions, {}, {}};
  inst.out.reserve(64);
  inst.emit(p.body);
  Circuit c;
  c.n_qubits = n;
  c.instructions = std::move(inst.out);
  return c;
}

inline Circuit instantiate(const GenProgram& p, int n) {
  return instantiate(p, n, instantiation_cap(n, std::max(1, p.gate_stmt_count())));
}

}  // namespace qdeqomp
