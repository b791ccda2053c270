// End-to-end demo: build a GHZ corpus in memory, evolve a generator program
// for it, and print the best program in both DSL and pythonic form.
#include <iostream>

#include "qdeqomp/bench.hpp"
#include "qdeqomp/dsl.hpp"
#include "qdeqomp/evolve.hpp"

int main() {
  using namespace qdeqomp;

  Corpus corpus = make_corpus("ghz", 2, 10);

  // Short genomes plus a site mutation rate annealed from 0.99 keep the
  // population churning through argument variants early on, which is what
  // cracks the cx operand pattern.
  EvolutionConfig cfg;
  cfg.algorithm_name = "ghz";
  cfg.operations = {Gate::H, Gate::CX};
  cfg.compare_method = ComparisonMethod::Combined;
  cfg.generations = 500;
  cfg.pop_size = 40;
  cfg.max_length = 4;
  cfg.max_loop_depth = 3;
  cfg.crossover_rate = 0.2;
  cfg.new_gen_rate = 0.3;
  cfg.mutation_rate = 0.3;
  cfg.mutation_rate_2_initial = 0.99;
  cfg.seed = 3;

  RunOptions opts;
  opts.stop_at_fitness = 1.0 - cfg.parsimony_lambda * 30; // perfect modulo parsimony
  opts.on_generation = [](const GenerationLog& log) {
    if (log.generation % 20 == 0)
      std::cout << "gen " << log.generation << " best " << log.best_fitness << " mean " << log.mean_fitness << "\n";
  };

  RunResult result = run(cfg, corpus, opts);

  std::cout << "\nbest fitness " << result.best.report->aggregate << " (born generation "
            << result.best.birth_generation << ")\n\n";
  std::cout << render_dsl(result.best.program) << "\n";
  std::cout << render_pythonic(result.best.program, "ghz") << "\n";
  return 0;
}
