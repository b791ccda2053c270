#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qdeqomp/fitness.hpp"
#include "qdeqomp/random_gen.hpp"
#include "qdeqomp/simplify.hpp"

namespace qdeqomp {

enum class SelectionMethod { Tournament, Roulette, Rank, Random, WeightedRoulette };

struct EvolutionConfig {
  std::string algorithm_name = "circuit";
  int qubit_limit = 20;
  int generations = 100;
  int pop_size = 50;
  int max_length = 10;
  double crossover_rate = 0.3;
  double new_gen_rate = 0.2;
  double mutation_rate = 0.1;
  ComparisonMethod compare_method = ComparisonMethod::LineByLine;
  int max_loop_depth = 2;
  SelectionMethod selection_method = SelectionMethod::Tournament;
  std::vector<Gate> operations{Gate::H, Gate::X, Gate::CX};

  std::uint64_t seed = 0;
  double mutation_rate_2_initial = 0.5;
  double decay = 0.95;
  double mutation_rate_2_min = 0.1;
  double parsimony_lambda = 1e-4;
  int tournament_size = 3;
  AggregateMode aggregate_mode = AggregateMode::Mean;

  GrammarParams grammar() const {
    GrammarParams g;
    g.operations = operations;
    g.max_length = max_length;
    g.max_loop_depth = max_loop_depth;
    return g;
  }
};

struct Individual {
  GenProgram program;
  std::optional<FitnessReport> report;
  int birth_generation = 0;
  int node_count = 0;
};

inline Individual make_individual(GenProgram program, int birth) {
  Individual ind;
  ind.node_count = program.node_count();
  ind.program = std::move(program);
  ind.birth_generation = birth;
  return ind;
}

// Fitness descending; ties go to fewer nodes, then to the older individual.
inline bool fitter(const Individual& x, const Individual& y) {
  double fx = x.report ? x.report->aggregate : 0.0;
  double fy = y.report ? y.report->aggregate : 0.0;
  if (fx != fy) return fx > fy;
  if (x.node_count != y.node_count) return x.node_count < y.node_count;
  return x.birth_generation < y.birth_generation;
}

struct GenerationLog {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double median_fitness = 0.0;
  int best_node_count = 0;
  double m_r2 = 0.0;
  std::int64_t elapsed_ms = 0;
};

struct RunResult {
  Individual best;
  std::vector<GenerationLog> logs;
};

struct RunOptions {
  int workers = 1;
  std::optional<double> stop_at_fitness; // stop once the best reaches this
  std::function<void(const GenerationLog&)> on_generation;
};

inline double anneal(int generation, const EvolutionConfig& cfg) {
  return std::max(cfg.mutation_rate_2_initial * std::pow(cfg.decay, static_cast<double>(generation)),
                  cfg.mutation_rate_2_min);
}

inline std::size_t select_index(const std::vector<Individual>& pop, SelectionMethod method, RandomSource& rng,
                                int tournament_size) {
  std::size_t count = pop.size();
  auto uniform = [&] { return static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(count) - 1)); };
  switch (method) {
    case SelectionMethod::Random:
      return uniform();
    case SelectionMethod::Tournament: {
      std::size_t best = uniform();
      for (int k = 1; k < std::max(1, tournament_size); ++k) {
        std::size_t challenger = uniform();
        if (fitter(pop[challenger], pop[best])) best = challenger;
      }
      return best;
    }
    case SelectionMethod::Roulette:
    case SelectionMethod::WeightedRoulette: {
      double min_f = pop[0].report->aggregate;
      for (const auto& ind : pop) min_f = std::min(min_f, ind.report->aggregate);
      double total = 0.0;
      for (const auto& ind : pop) {
        double w = ind.report->aggregate - min_f;
        total += method == SelectionMethod::WeightedRoulette ? w * w : w;
      }
      if (total <= 0.0) return uniform();
      double pick = rng.uniform_real() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        double w = pop[i].report->aggregate - min_f;
        acc += method == SelectionMethod::WeightedRoulette ? w * w : w;
        if (pick < acc) return i;
      }
      return count - 1;
    }
    case SelectionMethod::Rank: {
      // worst rank 1, best rank pop_size; probability proportional to rank
      std::vector<std::size_t> order(count);
      for (std::size_t i = 0; i < count; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return fitter(pop[b], pop[a]); });
      double total = static_cast<double>(count) * static_cast<double>(count + 1) / 2.0;
      double pick = rng.uniform_real() * total;
      double acc = 0.0;
      for (std::size_t r = 0; r < count; ++r) {
        acc += static_cast<double>(r + 1);
        if (pick < acc) return order[r];
      }
      return order[count - 1];
    }
  }
  return uniform();
}

// Single-point crossover over top-level statement boundaries with independent
// split points; oversize children are redrawn, then the parents are cloned.
inline std::pair<GenProgram, GenProgram> crossover(const GenProgram& p1, const GenProgram& p2, RandomSource& rng,
                                                   int max_length) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    auto s1 = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(p1.body.size())));
    auto s2 = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(p2.body.size())));
    GenProgram c1, c2;
    c1.body.assign(p1.body.begin(), p1.body.begin() + static_cast<std::ptrdiff_t>(s1));
    c1.body.insert(c1.body.end(), p2.body.begin() + static_cast<std::ptrdiff_t>(s2), p2.body.end());
    c2.body.assign(p2.body.begin(), p2.body.begin() + static_cast<std::ptrdiff_t>(s2));
    c2.body.insert(c2.body.end(), p1.body.begin() + static_cast<std::ptrdiff_t>(s1), p1.body.end());
    if (c1.gate_stmt_count() <= max_length && c2.gate_stmt_count() <= max_length) return {std::move(c1), std::move(c2)};
  }
  return {p1, p2};
}

namespace detail {

inline void mutate_site(std::vector<Statement>& site, int depth, GenProgram& program, double m_r2,
                        const GrammarParams& params, RandomSource& rng, bool& ok) {
  if (rng.bernoulli(m_r2)) {
    bool insert = site.empty() || rng.bernoulli(0.5);
    int total = program.gate_stmt_count();
    if (insert) {
      int budget = params.max_length - total;
      if (budget >= 1) site.push_back(random_statement(depth, budget, params, rng, ok));
      // no room: insertion skipped
    } else {
      auto idx = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(site.size()) - 1));
      int old_gates = site[idx].gate_stmt_count();
      int budget = params.max_length - total + old_gates;
      site[idx] = random_statement_at_least(depth, std::max(1, old_gates), std::max(1, budget), params, rng, ok);
    }
  }
  for (auto& stmt : site)
    if (stmt.is_loop()) mutate_site(stmt.body, depth + 1, program, m_r2, params, rng, ok);
}

}  // namespace detail

// Visits every statement list (top level and each loop body); with
// probability m_r2 a site either gains a fresh statement or has one replaced.
// Statement counts never decrease.
inline GenProgram mutate(const GenProgram& p, double m_r2, const GrammarParams& params, RandomSource& rng) {
  GenProgram out = p;
  bool ok = true;
  detail::mutate_site(out.body, 0, out, m_r2, params, rng, ok);
  if (!ok) return p; // phase resampling exhausted; keep the original
  return out;
}

namespace detail {

inline void evaluate_population(std::vector<Individual>& pop, const CorpusIndex& index,
                                const EvolutionConfig& cfg, int workers) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (!pop[i].report) pending.push_back(i);
  if (pending.empty()) return;

  auto eval_one = [&](std::size_t i) {
    pop[i].report = evaluate(pop[i].program, index, cfg.compare_method, cfg.parsimony_lambda, cfg.max_length,
                             cfg.aggregate_mode);
  };
  if (workers <= 1 || pending.size() < 2) {
    for (std::size_t i : pending) eval_one(i);
    return;
  }
  std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(workers), pending.size());
  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (std::size_t t = 0; t < thread_count; ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t j = t; j < pending.size(); j += thread_count) eval_one(pending[j]);
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace detail

inline RunResult run(const EvolutionConfig& cfg, const Corpus& corpus, const RunOptions& opts = {}) {
  using clock = std::chrono::steady_clock;
  const GrammarParams grammar = cfg.grammar();
  const CorpusIndex index(corpus);
  RandomSource rng(cfg.seed);

  const int pop_size = std::max(2, cfg.pop_size);
  std::vector<Individual> pop;
  pop.reserve(static_cast<std::size_t>(pop_size));
  for (int i = 0; i < pop_size; ++i) pop.push_back(make_individual(simplify(random_program(grammar, rng)), 0));

  RunResult result;
  result.logs.reserve(static_cast<std::size_t>(cfg.generations));
  bool have_best = false;

  for (int g = 0; g < cfg.generations; ++g) {
    auto gen_start = clock::now();
    detail::evaluate_population(pop, index, cfg, opts.workers);
    std::stable_sort(pop.begin(), pop.end(), fitter);

    if (!have_best || fitter(pop.front(), result.best)) {
      result.best = pop.front();
      have_best = true;
    }

    GenerationLog log;
    log.generation = g;
    log.best_fitness = pop.front().report->aggregate;
    double sum = 0.0;
    for (const auto& ind : pop) sum += ind.report->aggregate;
    log.mean_fitness = sum / static_cast<double>(pop.size());
    std::size_t mid = pop.size() / 2;
    log.median_fitness = pop.size() % 2 == 1
                             ? pop[mid].report->aggregate
                             : 0.5 * (pop[mid - 1].report->aggregate + pop[mid].report->aggregate);
    log.best_node_count = pop.front().node_count;
    log.m_r2 = anneal(g, cfg);
    log.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - gen_start).count();
    result.logs.push_back(log);
    if (opts.on_generation) opts.on_generation(log);

    if (opts.stop_at_fitness && log.best_fitness >= *opts.stop_at_fitness) break;
    if (g + 1 == cfg.generations) break;

    // Breed the next generation: the sorted population is the parent pool,
    // offspring and fresh programs overwrite the worst tail, elite slot 0 is
    // carried unchanged.
    const std::vector<Individual> parents = pop;
    auto n_fresh = static_cast<std::size_t>(cfg.new_gen_rate * pop_size);
    n_fresh = std::min(n_fresh, static_cast<std::size_t>(pop_size - 1));
    auto n_pairs = static_cast<std::size_t>(cfg.crossover_rate * pop_size / 2.0);
    std::size_t n_children = std::min(2 * n_pairs, static_cast<std::size_t>(pop_size - 1) - n_fresh);

    std::size_t slot = pop.size() - n_fresh - n_children;
    for (std::size_t pair = 0; pair < n_pairs && slot < pop.size() - n_fresh; ++pair) {
      const auto& pa = parents[select_index(parents, cfg.selection_method, rng, cfg.tournament_size)];
      const auto& pb = parents[select_index(parents, cfg.selection_method, rng, cfg.tournament_size)];
      auto [c1, c2] = crossover(pa.program, pb.program, rng, cfg.max_length);
      pop[slot++] = make_individual(simplify(std::move(c1)), g + 1);
      if (slot < pop.size() - n_fresh) pop[slot++] = make_individual(simplify(std::move(c2)), g + 1);
    }
    for (std::size_t i = pop.size() - n_fresh; i < pop.size(); ++i)
      pop[i] = make_individual(simplify(random_program(grammar, rng)), g + 1);

    double m_r2 = anneal(g, cfg);
    auto n_mut = static_cast<std::size_t>(cfg.mutation_rate * pop_size);
    n_mut = std::min(n_mut, static_cast<std::size_t>(pop_size - 1));
    std::vector<std::size_t> candidates;
    candidates.reserve(static_cast<std::size_t>(pop_size) - 1);
    for (std::size_t i = 1; i < pop.size(); ++i) candidates.push_back(i);
    for (std::size_t k = 0; k < n_mut; ++k) {
      auto pick = static_cast<std::size_t>(rng.uniform_int(static_cast<long long>(k),
                                                           static_cast<long long>(candidates.size()) - 1));
      std::swap(candidates[k], candidates[pick]);
      Individual& target = pop[candidates[k]];
      target = make_individual(simplify(mutate(target.program, m_r2, grammar, rng)), g + 1);
    }
  }

  return result;
}

}  // namespace qdeqomp
