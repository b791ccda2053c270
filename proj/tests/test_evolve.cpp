#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "qdeqomp/bench.hpp"
#include "qdeqomp/dsl.hpp"
#include "qdeqomp/evolve.hpp"

using namespace qdeqomp;

namespace {

Individual dummy(double aggregate, int nodes = 1) {
  Individual ind;
  ind.report = FitnessReport{};
  ind.report->aggregate = aggregate;
  ind.node_count = nodes;
  return ind;
}

std::map<std::size_t, double> selection_frequencies(const std::vector<Individual>& pop, SelectionMethod method,
                                                    int tournament_size, int draws, std::uint64_t seed) {
  RandomSource rng(seed);
  std::map<std::size_t, double> freq;
  for (int i = 0; i < draws; ++i) freq[select_index(pop, method, rng, tournament_size)] += 1.0;
  for (auto& [idx, f] : freq) f /= static_cast<double>(draws);
  return freq;
}

}  // namespace

TEST_CASE("the site mutation rate anneals geometrically to its floor", "[evolve]") {
  EvolutionConfig cfg;
  cfg.mutation_rate_2_initial = 0.99;
  cfg.decay = 0.95;
  cfg.mutation_rate_2_min = 0.1;
  CHECK(anneal(0, cfg) == 0.99);
  CHECK_THAT(anneal(10, cfg), Catch::Matchers::WithinAbs(0.59274957, 1e-8));
  CHECK(anneal(1000, cfg) == 0.1);

  EvolutionConfig defaults;
  CHECK(defaults.mutation_rate_2_initial == 0.5);
  CHECK(defaults.decay == 0.95);
  CHECK(defaults.mutation_rate_2_min == 0.1);
  CHECK(anneal(0, defaults) == 0.5);

  cfg.decay = 1.0; // constant schedule
  CHECK(anneal(500, cfg) == 0.99);
}

TEST_CASE("tournament selection with a huge tournament finds the best", "[evolve]") {
  std::vector<Individual> pop{dummy(0.2), dummy(0.9), dummy(0.4), dummy(0.1)};
  RandomSource rng(11);
  for (int i = 0; i < 1000; ++i) REQUIRE(select_index(pop, SelectionMethod::Tournament, rng, 128) == 1);

  // size-1 tournaments degenerate to uniform draws
  auto freq = selection_frequencies(pop, SelectionMethod::Tournament, 1, 40000, 12);
  for (const auto& [idx, f] : freq) CHECK_THAT(f, Catch::Matchers::WithinAbs(0.25, 0.02));
}

TEST_CASE("rank selection weights individuals by rank, worst gets one share", "[evolve]") {
  std::vector<Individual> pop{dummy(0.1), dummy(0.2), dummy(0.7)};
  auto freq = selection_frequencies(pop, SelectionMethod::Rank, 3, 60000, 13);
  CHECK_THAT(freq[0], Catch::Matchers::WithinAbs(1.0 / 6.0, 0.01));
  CHECK_THAT(freq[1], Catch::Matchers::WithinAbs(2.0 / 6.0, 0.01));
  CHECK_THAT(freq[2], Catch::Matchers::WithinAbs(3.0 / 6.0, 0.01));
}

TEST_CASE("roulette selection falls back to uniform on a flat population", "[evolve]") {
  std::vector<Individual> flat{dummy(0.5), dummy(0.5), dummy(0.5)};
  for (auto method : {SelectionMethod::Roulette, SelectionMethod::WeightedRoulette}) {
    auto freq = selection_frequencies(flat, method, 3, 30000, 14);
    for (const auto& [idx, f] : freq) CHECK_THAT(f, Catch::Matchers::WithinAbs(1.0 / 3.0, 0.02));
  }
}

TEST_CASE("weighted roulette squares the shifted fitness weights", "[evolve]") {
  std::vector<Individual> pop{dummy(0.0), dummy(1.0), dummy(2.0)};

  auto plain = selection_frequencies(pop, SelectionMethod::Roulette, 3, 60000, 15);
  CHECK(plain.count(0) == 0); // zero weight after the min shift
  CHECK_THAT(plain[1], Catch::Matchers::WithinAbs(1.0 / 3.0, 0.01));
  CHECK_THAT(plain[2], Catch::Matchers::WithinAbs(2.0 / 3.0, 0.01));

  auto squared = selection_frequencies(pop, SelectionMethod::WeightedRoulette, 3, 60000, 16);
  CHECK(squared.count(0) == 0);
  CHECK_THAT(squared[1], Catch::Matchers::WithinAbs(0.2, 0.01));
  CHECK_THAT(squared[2], Catch::Matchers::WithinAbs(0.8, 0.01));

  auto random_freq = selection_frequencies(pop, SelectionMethod::Random, 3, 30000, 17);
  for (const auto& [idx, f] : random_freq) CHECK_THAT(f, Catch::Matchers::WithinAbs(1.0 / 3.0, 0.02));
}

TEST_CASE("crossover splices top-level prefixes and suffixes within budget", "[evolve]") {
  GrammarParams g;
  g.max_loop_depth = 2;
  RandomSource rng(2025);

  auto is_splice = [](const GenProgram& c1, const GenProgram& c2, const GenProgram& p1, const GenProgram& p2) {
    for (std::size_t s1 = 0; s1 <= p1.body.size(); ++s1) {
      for (std::size_t s2 = 0; s2 <= p2.body.size(); ++s2) {
        GenProgram e1, e2;
        e1.body.assign(p1.body.begin(), p1.body.begin() + static_cast<std::ptrdiff_t>(s1));
        e1.body.insert(e1.body.end(), p2.body.begin() + static_cast<std::ptrdiff_t>(s2), p2.body.end());
        e2.body.assign(p2.body.begin(), p2.body.begin() + static_cast<std::ptrdiff_t>(s2));
        e2.body.insert(e2.body.end(), p1.body.begin() + static_cast<std::ptrdiff_t>(s1), p1.body.end());
        if (e1 == c1 && e2 == c2) return true;
      }
    }
    return false;
  };

  for (int trial = 0; trial < 2000; ++trial) {
    GenProgram p1 = random_program(g, rng);
    GenProgram p2 = random_program(g, rng);
    auto [c1, c2] = crossover(p1, p2, rng, g.max_length);
    CHECK(c1.gate_stmt_count() <= g.max_length);
    CHECK(c2.gate_stmt_count() <= g.max_length);
    CHECK(c1.body.size() + c2.body.size() == p1.body.size() + p2.body.size());
    REQUIRE(is_splice(c1, c2, p1, p2));
  }

  RandomSource ra(77), rb(77);
  GenProgram p1 = random_program(g, ra);
  GenProgram p1b = random_program(g, rb);
  GenProgram p2 = random_program(g, ra);
  GenProgram p2b = random_program(g, rb);
  auto [x1, x2] = crossover(p1, p2, ra, g.max_length);
  auto [y1, y2] = crossover(p1b, p2b, rb, g.max_length);
  CHECK(x1 == y1);
  CHECK(x2 == y2);
}

TEST_CASE("mutation never shrinks a genome and stays within budget", "[evolve]") {
  GrammarParams g;
  g.operations = {Gate::H, Gate::X, Gate::CX, Gate::RX};
  g.max_loop_depth = 2;
  RandomSource rng(31337);

  for (int trial = 0; trial < 10000; ++trial) {
    GenProgram p = random_program(g, rng);
    GenProgram m = mutate(p, 0.6, g, rng);
    CHECK(m.gate_stmt_count() >= p.gate_stmt_count());
    CHECK(m.gate_stmt_count() <= g.max_length);
    auto problem = validate(m, g.max_length, g.max_loop_depth);
    if (problem) FAIL("mutation left the grammar: " << *problem);
  }

  GenProgram p = random_program(g, rng);
  CHECK(mutate(p, 0.0, g, rng) == p);
}

TEST_CASE("evolution runs deterministically and never loses its best", "[evolve]") {
  Corpus corpus = make_corpus("ghz", 2, 6);
  EvolutionConfig cfg;
  cfg.operations = {Gate::H, Gate::CX};
  cfg.compare_method = ComparisonMethod::Combined;
  cfg.generations = 40;
  cfg.pop_size = 24;
  cfg.max_length = 4;
  cfg.seed = 9;

  RunResult a = run(cfg, corpus);
  RunResult b = run(cfg, corpus);

  REQUIRE(a.logs.size() == 40);
  REQUIRE(b.logs.size() == 40);
  for (std::size_t i = 0; i < a.logs.size(); ++i) {
    CHECK(a.logs[i].generation == static_cast<int>(i));
    CHECK(a.logs[i].best_fitness == b.logs[i].best_fitness);
    CHECK(a.logs[i].mean_fitness == b.logs[i].mean_fitness);
    CHECK(a.logs[i].median_fitness == b.logs[i].median_fitness);
    CHECK(a.logs[i].best_node_count == b.logs[i].best_node_count);
    CHECK(a.logs[i].m_r2 == anneal(static_cast<int>(i), cfg));
    CHECK(a.logs[i].mean_fitness <= a.logs[i].best_fitness);
    CHECK(a.logs[i].median_fitness <= a.logs[i].best_fitness);
    if (i > 0) CHECK(a.logs[i].best_fitness >= a.logs[i - 1].best_fitness);
  }
  CHECK(a.best.program == b.best.program);
  CHECK(a.best.report->aggregate == b.best.report->aggregate);
  CHECK(a.best.report->aggregate == a.logs.back().best_fitness);
}

TEST_CASE("parallel evaluation changes nothing but the wall clock", "[evolve]") {
  Corpus corpus = make_corpus("hx_loop", 2, 6);
  EvolutionConfig cfg;
  cfg.operations = {Gate::H, Gate::X};
  cfg.compare_method = ComparisonMethod::Combined;
  cfg.generations = 25;
  cfg.pop_size = 20;
  cfg.seed = 4;

  RunOptions serial;
  RunOptions parallel;
  parallel.workers = 4;
  RunResult a = run(cfg, corpus, serial);
  RunResult b = run(cfg, corpus, parallel);

  REQUIRE(a.logs.size() == b.logs.size());
  for (std::size_t i = 0; i < a.logs.size(); ++i) {
    CHECK(a.logs[i].best_fitness == b.logs[i].best_fitness);
    CHECK(a.logs[i].mean_fitness == b.logs[i].mean_fitness);
    CHECK(a.logs[i].median_fitness == b.logs[i].median_fitness);
  }
  CHECK(a.best.program == b.best.program);
}

TEST_CASE("early stopping and the generation callback", "[evolve]") {
  Corpus corpus = make_corpus("h_c", 2, 5);
  EvolutionConfig cfg;
  cfg.operations = {Gate::H};
  cfg.generations = 50;
  cfg.pop_size = 10;
  cfg.seed = 2;

  RunOptions opts;
  opts.stop_at_fitness = -1e9; // satisfied immediately
  std::vector<GenerationLog> seen;
  opts.on_generation = [&](const GenerationLog& log) { seen.push_back(log); };

  RunResult r = run(cfg, corpus, opts);
  REQUIRE(r.logs.size() == 1);
  REQUIRE(seen.size() == 1);
  CHECK(seen[0].best_fitness == r.logs[0].best_fitness);

  // a degenerate population size still runs (clamped to an elite plus one)
  cfg.pop_size = 1;
  cfg.generations = 3;
  RunResult tiny = run(cfg, corpus, RunOptions{});
  CHECK(tiny.logs.size() == 3);
}

TEST_CASE("a trivial family is solved outright", "[evolve]") {
  Corpus corpus = make_corpus("h_0", 2, 6);
  EvolutionConfig cfg;
  cfg.operations = {Gate::H};
  cfg.compare_method = ComparisonMethod::Combined;
  cfg.generations = 80;
  cfg.pop_size = 30;
  cfg.max_length = 4;
  cfg.seed = 1;

  RunOptions opts;
  opts.stop_at_fitness = 1.0 - cfg.parsimony_lambda * 10.0;
  RunResult r = run(cfg, corpus, opts);
  CHECK(r.best.report->aggregate >= 0.99);

  // the winner reproduces the family at sizes beyond the training corpus
  Corpus held_out = make_corpus("h_0", 7, 9);
  FitnessReport transfer = evaluate(r.best.program, held_out, ComparisonMethod::Combined, 0.0);
  CHECK(transfer.aggregate == 1.0);
}
