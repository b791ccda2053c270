#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qdeqomp/program.hpp"
#include "qdeqomp/simplify.hpp"

namespace qdeqomp {

// Deterministic draw helpers over a fixed-width engine. The distributions are
// hand-rolled so that a seed produces the same sequence on every platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0) : seed_(seed), eng_(seed) {}

  std::uint64_t seed() const { return seed_; }
  RandomSource derive(std::uint64_t worker) const { return RandomSource(seed_ ^ worker); }

  std::uint64_t next_u64() { return eng_(); }

  long long uniform_int(long long lo, long long hi) { // inclusive bounds
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(next_u64() % span);
  }

  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform_real() < p; }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    double u2 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  template <class T>
  const T& choice(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform_int(0, static_cast<long long>(items.size()) - 1))];
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct GrammarParams {
  std::vector<Gate> operations{Gate::H, Gate::X, Gate::CX};
  int max_length = 10;
  int max_loop_depth = 2;
  int max_expr_operators = 2;
  int var_depth = 2;
  double gate_stmt_prob = 0.7;
};

namespace detail {

inline IndexExpr random_leaf(int depth, RandomSource& rng) {
  double r = rng.uniform_real();
  if (depth > 0) {
    if (r < 0.4) return IndexExpr::loop_var(static_cast<int>(rng.uniform_int(0, depth - 1)));
    if (r < 0.7) return IndexExpr::size_var();
    return IndexExpr::int_const(rng.uniform_int(0, 3));
  }
  if (r < 0.5) return IndexExpr::size_var();
  return IndexExpr::int_const(rng.uniform_int(0, 3));
}

}  // namespace detail

// +/- chain over {n, i0..i(depth-1), small constants}. The operator cap is
// soft: the draw ranges over [0, max(max_expr_operators, var_depth)] and leaf
// terms stay within 1 + var_depth.
inline IndexExpr random_expr(int depth, int max_expr_operators, int var_depth, RandomSource& rng) {
  long long cap = std::max(max_expr_operators, var_depth);
  long long ops = rng.uniform_int(0, cap);
  if (ops > var_depth) ops = var_depth;
  IndexExpr acc = detail::random_leaf(depth, rng);
  for (long long k = 0; k < ops; ++k) {
    IndexExpr leaf = detail::random_leaf(depth, rng);
    acc = rng.bernoulli(0.5) ? IndexExpr::add(acc, leaf) : IndexExpr::sub(acc, leaf);
  }
  return acc;
}

// sign * pi / (2^a + b + c) with c drawn as a rounded standard Gaussian.
inline AngleExpr random_phase_expr(int depth, RandomSource& rng) {
  AngleExpr a;
  a.sign = rng.bernoulli(0.5) ? 1 : -1;
  a.exponent = random_expr(depth, 3, 3, rng);
  a.offset = depth == 0 ? IndexExpr::int_const(0) : random_expr(depth, 4, 4, rng);
  a.shift = std::llround(rng.gaussian());
  return a;
}

// True when the denominator folds to an unconditional zero.
inline bool provably_zero_denominator(const AngleExpr& a) {
  IndexExpr sa = simplify(a.exponent);
  IndexExpr sb = simplify(a.offset);
  if (sa.kind() != IndexExpr::Kind::IntConst || sb.kind() != IndexExpr::Kind::IntConst) return false;
  long long e = sa.value();
  if (e >= 63 || e <= -2000) return false;
  double den = std::ldexp(1.0, static_cast<int>(e)) + static_cast<double>(sb.value()) +
               static_cast<double>(a.shift);
  return den == 0.0;
}

namespace detail {

inline AngleExpr resampled_phase_expr(int depth, RandomSource& rng, bool& ok) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    AngleExpr a = random_phase_expr(depth, rng);
    if (!provably_zero_denominator(a)) return a;
  }
  ok = false;
  return AngleExpr{1, IndexExpr::int_const(0), IndexExpr::int_const(0), 0};
}

}  // namespace detail

inline Statement generate_gate_call(int depth, Gate gate, const GrammarParams& params, RandomSource& rng,
                                    bool& ok) {
  Statement s;
  s.kind = Statement::Kind::Gate;
  s.gate = gate;
  const auto& info = gate_info(gate);
  s.qubits.reserve(static_cast<std::size_t>(info.arity));
  for (int i = 0; i < info.arity; ++i)
    s.qubits.push_back(random_expr(depth, params.max_expr_operators, params.var_depth, rng));
  for (int i = 0; i < info.param_count; ++i) s.angles.push_back(detail::resampled_phase_expr(depth, rng, ok));
  return s;
}

inline Statement generate_gate_call(int depth, Gate gate, RandomSource& rng) {
  bool ok = true;
  return generate_gate_call(depth, gate, GrammarParams{}, rng, ok);
}

// Emits statements consuming the gate budget exactly; loops receive a random
// share of the remaining budget for their bodies.
inline std::vector<Statement> random_block(int depth, int budget, const GrammarParams& params, RandomSource& rng,
                                           bool& ok) {
  std::vector<Statement> out;
  while (budget > 0) {
    if (depth < params.max_loop_depth && !rng.bernoulli(params.gate_stmt_prob)) {
      int sub = static_cast<int>(rng.uniform_int(1, budget));
      IndexExpr range = IndexExpr::abs(random_expr(depth, params.max_expr_operators, params.var_depth, rng));
      out.push_back(Statement::loop(depth, range, random_block(depth + 1, sub, params, rng, ok)));
      budget -= sub;
    } else {
      out.push_back(generate_gate_call(depth, rng.choice(params.operations), params, rng, ok));
      budget -= 1;
    }
  }
  return out;
}

// One fresh statement consuming between 1 and budget gate slots.
inline Statement random_statement(int depth, int budget, const GrammarParams& params, RandomSource& rng,
                                  bool& ok) {
  if (budget > 1 && depth < params.max_loop_depth && !rng.bernoulli(params.gate_stmt_prob)) {
    int sub = static_cast<int>(rng.uniform_int(1, budget));
    IndexExpr range = IndexExpr::abs(random_expr(depth, params.max_expr_operators, params.var_depth, rng));
    return Statement::loop(depth, range, random_block(depth + 1, sub, params, rng, ok));
  }
  if (budget >= 1 && depth < params.max_loop_depth && !rng.bernoulli(params.gate_stmt_prob)) {
    IndexExpr range = IndexExpr::abs(random_expr(depth, params.max_expr_operators, params.var_depth, rng));
    return Statement::loop(depth, range, random_block(depth + 1, 1, params, rng, ok));
  }
  return generate_gate_call(depth, rng.choice(params.operations), params, rng, ok);
}

// Fresh statement with at least min_gates gate calls (used when replacing a
// statement so the genome never shrinks). min_gates > 1 forces a loop.
inline Statement random_statement_at_least(int depth, int min_gates, int budget, const GrammarParams& params,
                                           RandomSource& rng, bool& ok) {
  if (min_gates <= 1) return random_statement(depth, std::max(1, budget), params, rng, ok);
  int sub = static_cast<int>(rng.uniform_int(min_gates, std::max(min_gates, budget)));
  IndexExpr range = IndexExpr::abs(random_expr(depth, params.max_expr_operators, params.var_depth, rng));
  return Statement::loop(depth, range, random_block(depth + 1, sub, params, rng, ok));
}

inline GenProgram random_program(const GrammarParams& params, RandomSource& rng) {
  bool ok = true;
  int target = static_cast<int>(rng.uniform_int(1, std::max(1, params.max_length)));
  GenProgram p{random_block(0, target, params, rng, ok)};
  if (!ok) {
    // Phase resampling exhausted its retry budget: fall back to a minimal
    // program instead of emitting a divide-by-zero genome.
    return GenProgram{{Statement::gate_call(Gate::H, {IndexExpr::int_const(0)})}};
  }
  return p;
}

}  // namespace qdeqomp
