#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qdeqomp/bench.hpp"
#include "qdeqomp/fitness.hpp"
#include "qdeqomp/qasm.hpp"

using namespace qdeqomp;

namespace {

std::size_t lines_at(const std::string& name, int n) {
  Corpus c = make_corpus(name, n, n);
  return c.entries.at(n).instructions.size();
}

std::filesystem::path fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("qdeqomp_bench_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("every reference program is a fixed point of its own corpus", "[bench]") {
  REQUIRE(benchmark_names().size() == 12);
  for (const auto& name : benchmark_names()) {
    INFO("benchmark " << name);
    GenProgram p = reference_program(name);
    CHECK(validate(p, 10, 3) == std::nullopt);
    Corpus corpus = make_corpus(name, 2, 10);
    REQUIRE(corpus.entries.size() == 9);
    FitnessReport r = evaluate(p, corpus, ComparisonMethod::Combined, 0.0);
    for (const auto& [n, scores] : r.per_n) {
      INFO("n = " << n);
      REQUIRE(scores.valid);
      CHECK(scores.s_total == 1.0);
    }
    CHECK(r.aggregate == 1.0);
  }
}

TEST_CASE("corpus circuits have the expected shapes", "[bench]") {
  for (int n = 2; n <= 8; ++n) {
    auto nn = static_cast<std::size_t>(n);
    CHECK(lines_at("h_0", n) == nn);
    CHECK(lines_at("h_c", n) == nn);
    CHECK(lines_at("rx_c", n) == nn);
    CHECK(lines_at("ry_c", n) == nn);
    CHECK(lines_at("ghz", n) == nn);
    CHECK(lines_at("hx_loop", n) == 2 * nn);
    CHECK(lines_at("ry_rx_rz", n) == 3 * lines_at("ry_c", n));
    CHECK(lines_at("ry_h_rx_h", n) == 3 * lines_at("ry_c", n));
    CHECK(lines_at("qft_noswap", n) == nn + nn * (nn - 1) / 2);
    CHECK(lines_at("qft", n) == nn + nn * (nn - 1) / 2 + nn / 2);
    auto m = nn - 1;
    CHECK(lines_at("qpe", n) == m + 1 + m + m / 2 + m + m * (m - 1) / 2);
    CHECK(lines_at("nested_rx_h", n) == nn + nn * (nn - 1) / 2);
  }

  Corpus ghz = make_corpus("ghz", 2, 10);
  for (const auto& [n, circuit] : ghz.entries) {
    CHECK(circuit.n_qubits == n);
    CHECK(circuit.instructions.front().kind == Gate::H);
    for (std::size_t i = 1; i < circuit.instructions.size(); ++i) {
      CHECK(circuit.instructions[i].kind == Gate::CX);
      CHECK(circuit.instructions[i].qubits[1] == circuit.instructions[i].qubits[0] + 1);
    }
  }
}

TEST_CASE("the two-qubit fourier transform matches its canonical text", "[bench]") {
  Corpus c = make_corpus("qft", 2, 2);
  CHECK(print_qasm(c.entries.at(2)) ==
        "OPENQASM 2.0;\n"
        "include \"qelib1.inc\";\n"
        "qreg q[2];\n"
        "h q[0];\n"
        "cp(1.57079632679) q[1],q[0];\n"
        "h q[1];\n"
        "swap q[0],q[1];\n");

  Corpus plain = make_corpus("qft_noswap", 2, 2);
  CHECK(plain.entries.at(2).instructions.size() == 3);
  CHECK(plain.entries.at(2).instructions.back().kind == Gate::H);
}

TEST_CASE("phase estimation opens with a hadamard block and a single x", "[bench]") {
  Corpus qpe = make_corpus("qpe", 3, 8);
  for (const auto& [n, circuit] : qpe.entries) {
    INFO("n = " << n);
    int m = n - 1;
    for (int i = 0; i < m; ++i) {
      CHECK(circuit.instructions[static_cast<std::size_t>(i)].kind == Gate::H);
      CHECK(circuit.instructions[static_cast<std::size_t>(i)].qubits[0] == i);
    }
    CHECK(circuit.instructions[static_cast<std::size_t>(m)].kind == Gate::X);
    CHECK(circuit.instructions[static_cast<std::size_t>(m)].qubits[0] == m);
    int x_count = 0;
    for (const auto& instr : circuit.instructions)
      if (instr.kind == Gate::X) ++x_count;
    CHECK(x_count == 1);
  }
}

TEST_CASE("generated corpora land on disk and parse back unchanged", "[bench]") {
  auto base = fresh_dir("gen");
  BenchmarkSpec spec;
  spec.name = "ghz";
  spec.n_min = 2;
  spec.n_max = 5;

  Corpus written = generate_corpus(spec, base);
  Corpus expected = make_corpus("ghz", 2, 5);
  CHECK(written.entries == expected.entries);

  for (int n = 2; n <= 5; ++n) {
    auto file = base / "ghz" / ("ghz_" + std::to_string(n) + ".qasm");
    REQUIRE(std::filesystem::exists(file));
    std::ifstream in(file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(parse_qasm(text) == expected.entries.at(n));
    CHECK(text == print_qasm(expected.entries.at(n)));
  }
  std::filesystem::remove_all(base);
}

TEST_CASE("benchmark lookup and ranges are validated", "[bench]") {
  CHECK_THROWS_AS(reference_program("nope"), UnknownBenchmark);
  CHECK_THROWS_AS(make_corpus("nope", 2, 4), UnknownBenchmark);

  BenchmarkSpec bad;
  bad.name = "ghz";
  bad.n_min = 10;
  bad.n_max = 2;
  CHECK_THROWS_AS(generate_corpus(bad, fresh_dir("bad1")), std::invalid_argument);
  bad.n_min = 1;
  bad.n_max = 4;
  CHECK_THROWS_AS(generate_corpus(bad, fresh_dir("bad2")), std::invalid_argument);
  bad.n_min = 2;
  bad.n_max = 31;
  CHECK_THROWS_AS(generate_corpus(bad, fresh_dir("bad3")), std::invalid_argument);

  for (const auto& name : benchmark_names()) CHECK_NOTHROW(reference_program(name));
}
