// Scores each benchmark's reference program against a neighboring family to
// show how the three syntactic metrics disagree. The sequence metric punishes
// any reordered or altered line hard, frequency only sees gate counts, and LCS
// rewards shared scaffolding.
#include <cstdio>
#include <vector>

#include "qdeqomp/bench.hpp"
#include "qdeqomp/fitness.hpp"

int main() {
  using namespace qdeqomp;

  struct Pair {
    const char* program;
    const char* family;
  };
  std::vector<Pair> pairs = {
      {"ghz", "ghz"},
      {"qft", "qft_noswap"},
      {"qft_noswap", "qft"},
      {"ry_c", "ry_h_rx_h"},
      {"h_c", "hx_loop"},
  };

  std::printf("%-12s %-12s %8s %8s %8s %10s\n", "program", "corpus", "s_seq", "s_freq", "s_lcs", "combined");
  for (const auto& pair : pairs) {
    GenProgram p = reference_program(pair.program);
    Corpus corpus = make_corpus(pair.family, 2, 10);
    FitnessReport report = evaluate(p, corpus, ComparisonMethod::Combined, 0.0);

    double seq = 0, freq = 0, lcs = 0;
    for (const auto& [n, row] : report.per_n) {
      seq += row.s_seq;
      freq += row.s_freq;
      lcs += row.s_lcs;
    }
    double count = static_cast<double>(report.per_n.size());
    std::printf("%-12s %-12s %8.4f %8.4f %8.4f %10.4f\n", pair.program, pair.family, seq / count, freq / count,
                lcs / count, report.aggregate);
  }
  return 0;
}
