#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdeqomp/program.hpp"
#include "qdeqomp/qasm.hpp"

namespace qdeqomp {

struct UnknownBenchmark : std::runtime_error {
  explicit UnknownBenchmark(const std::string& name) : std::runtime_error("unknown benchmark: " + name) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BenchmarkSpec {
  std::string name;
  int n_min = 2;
  int n_max = 10;
};

inline const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"h_0",  "h_c", "rx_c", "hx_loop",    "nested_rx_h", "ry_c",
                                              "ry_rx_rz", "ry_h_rx_h", "ghz", "qft", "qft_noswap", "qpe"};
  return names;
}

namespace detail {

inline IndexExpr bv(long long v) { return IndexExpr::int_const(v); }
inline IndexExpr bi(int k) { return IndexExpr::loop_var(k); }
inline IndexExpr bn() { return IndexExpr::size_var(); }

// pi / 2^a, optionally negated
inline AngleExpr pow2_angle(int sign, IndexExpr a) { return AngleExpr{sign, std::move(a), bv(0), 0}; }

// Terminal swap block of a QFT over qubits 0..m-1 where `m_expr` names the
// register size: the innermost range is 1 exactly when i0 = 2*i1 + 1, which
// enumerates i1 = 0..floor(m/2)-1 in ascending order.
inline Statement qft_swap_block(const IndexExpr& m_expr, const IndexExpr& high_minus_i1) {
  IndexExpr indicator =
      IndexExpr::sub(bv(1), IndexExpr::abs(IndexExpr::sub(IndexExpr::sub(IndexExpr::sub(bi(0), bi(1)), bi(1)), bv(1))));
  Statement swap = Statement::gate_call(Gate::SWAP, {bi(1), high_minus_i1});
  Statement inner = Statement::loop(2, indicator, {std::move(swap)});
  Statement mid = Statement::loop(1, bi(0), {std::move(inner)});
  return Statement::loop(0, m_expr, {std::move(mid)});
}

inline GenProgram qft_program(bool with_swaps) {
  // for each target i0: H, then controlled phases pi/2^(i1+1) from the
  // qubits above it
  Statement cp = Statement::gate_call(Gate::CP, {IndexExpr::add(IndexExpr::add(bi(0), bi(1)), bv(1)), bi(0)},
                                      {pow2_angle(1, IndexExpr::add(bi(1), bv(1)))});
  Statement inner = Statement::loop(1, IndexExpr::sub(IndexExpr::sub(bn(), bi(0)), bv(1)), {std::move(cp)});
  Statement h = Statement::gate_call(Gate::H, {bi(0)});
  GenProgram p{{Statement::loop(0, bn(), {std::move(h), std::move(inner)})}};
  if (with_swaps) p.body.push_back(qft_swap_block(bn(), IndexExpr::sub(IndexExpr::sub(bn(), bv(1)), bi(1))));
  return p;
}

inline GenProgram qpe_program() {
  GenProgram p;
  IndexExpr m = IndexExpr::sub(bn(), bv(1)); // counting register size
  // counting register into superposition, eigenstate |1> on the last qubit
  p.body.push_back(Statement::loop(0, m, {Statement::gate_call(Gate::H, {bi(0)})}));
  p.body.push_back(Statement::gate_call(Gate::X, {m}));
  // controlled powers U^(2^k) of U = P(pi/4): CP(pi/2^(2-k)) from control k
  p.body.push_back(Statement::loop(
      0, m, {Statement::gate_call(Gate::CP, {bi(0), m}, {pow2_angle(1, IndexExpr::sub(bv(2), bi(0)))})}));
  // inverse QFT on the counting register: the QFT instruction list reversed
  // with negated angles; the swap block is order-free, so it stays ascending
  IndexExpr high = IndexExpr::sub(IndexExpr::sub(bn(), bv(2)), bi(1));
  p.body.push_back(qft_swap_block(m, high));
  Statement cp = Statement::gate_call(
      Gate::CP, {IndexExpr::sub(IndexExpr::sub(bn(), bv(2)), bi(1)), IndexExpr::sub(IndexExpr::sub(bn(), bv(2)), bi(0))},
      {pow2_angle(-1, IndexExpr::sub(bi(0), bi(1)))});
  Statement rewind = Statement::loop(
      0, m,
      {Statement::loop(1, bi(0), {std::move(cp)}),
       Statement::gate_call(Gate::H, {IndexExpr::sub(IndexExpr::sub(bn(), bv(2)), bi(0))})});
  p.body.push_back(std::move(rewind));
  return p;
}

}  // namespace detail

inline GenProgram reference_program(const std::string& name) {
  using detail::bi;
  using detail::bn;
  using detail::bv;
  using detail::pow2_angle;

  if (name == "h_0")
    return GenProgram{{Statement::loop(0, bn(), {Statement::gate_call(Gate::H, {bv(0)})})}};
  if (name == "h_c")
    return GenProgram{{Statement::loop(0, bn(), {Statement::gate_call(Gate::H, {bi(0)})})}};
  if (name == "rx_c")
    return GenProgram{{Statement::loop(0, bn(), {Statement::gate_call(Gate::RX, {bi(0)}, {pow2_angle(1, bi(0))})})}};
  if (name == "hx_loop")
    return GenProgram{{Statement::loop(
        0, bn(), {Statement::gate_call(Gate::H, {bi(0)}), Statement::gate_call(Gate::X, {bi(0)})})}};
  if (name == "nested_rx_h")
    return GenProgram{{Statement::loop(
        0, bn(),
        {Statement::gate_call(Gate::RX, {bi(0)}, {pow2_angle(1, bi(0))}),
         Statement::loop(1, bi(0), {Statement::gate_call(Gate::H, {bi(1)})})})}};
  if (name == "ry_c")
    return GenProgram{{Statement::loop(0, bn(), {Statement::gate_call(Gate::RY, {bi(0)}, {pow2_angle(1, bi(0))})})}};
  if (name == "ry_rx_rz")
    return GenProgram{{Statement::loop(0, bn(),
                                       {Statement::gate_call(Gate::RZ, {bi(0)}, {pow2_angle(-1, bv(1))}),
                                        Statement::gate_call(Gate::RX, {bi(0)}, {pow2_angle(1, bi(0))}),
                                        Statement::gate_call(Gate::RZ, {bi(0)}, {pow2_angle(1, bv(1))})})}};
  if (name == "ry_h_rx_h")
    return GenProgram{{Statement::loop(0, bn(),
                                       {Statement::gate_call(Gate::H, {bi(0)}),
                                        Statement::gate_call(Gate::RX, {bi(0)}, {pow2_angle(1, bi(0))}),
                                        Statement::gate_call(Gate::H, {bi(0)})})}};
  if (name == "ghz") {
    Statement chain = Statement::loop(
        0, IndexExpr::sub(bn(), bv(1)),
        {Statement::gate_call(Gate::CX, {bi(0), IndexExpr::add(bi(0), bv(1))})});
    return GenProgram{{Statement::gate_call(Gate::H, {bv(0)}), std::move(chain)}};
  }
  if (name == "qft") return detail::qft_program(true);
  if (name == "qft_noswap") return detail::qft_program(false);
  if (name == "qpe") return detail::qpe_program();
  throw UnknownBenchmark(name);
}

inline Corpus make_corpus(const std::string& name, int n_min, int n_max) {
  GenProgram p = reference_program(name);
  Corpus corpus;
  corpus.algorithm_name = name;
  for (int n = n_min; n <= n_max; ++n) corpus.entries[n] = instantiate(p, n);
  return corpus;
}

inline Corpus generate_corpus(const BenchmarkSpec& spec, const std::filesystem::path& base_dir) {
  if (spec.n_min < 2 || spec.n_max > 30 || spec.n_min > spec.n_max)
    throw std::invalid_argument("benchmark n range must lie within [2, 30]");
  Corpus corpus = make_corpus(spec.name, spec.n_min, spec.n_max);
  std::filesystem::path dir = base_dir / spec.name;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  for (const auto& [n, circuit] : corpus.entries) {
    std::filesystem::path file = dir / (spec.name + "_" + std::to_string(n) + ".qasm");
    std::ofstream out(file);
    if (!out) throw IoError("cannot open " + file.string() + " for writing");
    out << print_qasm(circuit);
    out.flush();
    if (!out) throw IoError("write failed for " + file.string());
  }
  return corpus;
}

}  // namespace qdeqomp
