#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qdeqomp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qdeqomp: evolve size-generic generator programs from families of OpenQASM circuits"};
  app.set_version_flag("--version", std::string(qdeqomp::kToolVersion));
  app.require_subcommand(1);

  std::string bench_name;
  int n_min = 2, n_max = 10;
  std::string gen_out = "corpora";
  auto* gen = app.add_subcommand("generate", "Write a benchmark corpus as canonical QASM files");
  gen->add_option("benchmark", bench_name, "benchmark name, e.g. ghz or qft")->required();
  gen->add_option("n_min", n_min, "smallest qubit count")->required();
  gen->add_option("n_max", n_max, "largest qubit count")->required();
  gen->add_option("out_dir", gen_out, "corpus root directory (default corpora)");

  std::string config_path, corpus_dir, run_out = "runs/latest";
  int workers = 1;
  auto* dec = app.add_subcommand("decompile", "Run the evolutionary decompiler on a corpus");
  dec->add_option("config", config_path, "key=value config file")->required();
  dec->add_option("corpus", corpus_dir, "directory of <name>_<n>.qasm files")->required();
  dec->add_option("out_dir", run_out, "run output directory (default runs/latest)");
  dec->add_option("--workers", workers, "parallel fitness evaluation threads")->check(CLI::PositiveNumber);

  std::string score_program, score_corpus, score_method = "combined", score_agg = "mean";
  bool score_csv = false;
  double score_lambda = 1e-4;
  auto* score = app.add_subcommand("score", "Score a DSL program against a corpus");
  score->add_option("program", score_program, "DSL program file")->required();
  score->add_option("corpus", score_corpus, "directory of <name>_<n>.qasm files")->required();
  score->add_option("--method", score_method, "comparison method (default combined)")
      ->check(CLI::IsMember({"combined", "l_by_l", "seq", "freq"}));
  score->add_option("--lambda", score_lambda, "parsimony weight (default 1e-4)");
  score->add_option("--aggregate", score_agg, "aggregate mode (default mean)")
      ->check(CLI::IsMember({"mean", "sum"}));
  score->add_flag("--csv", score_csv, "machine-readable output");

  std::string simp_program;
  bool simp_check = false;
  auto* simp = app.add_subcommand("simplify", "Print the simplified form of a DSL program");
  simp->add_option("program", simp_program, "DSL program file")->required();
  simp->add_flag("--check", simp_check, "verify instantiation equivalence for n in 1..16");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*gen) return qdeqomp::cmd_generate(bench_name, n_min, n_max, gen_out, std::cout, std::cerr);
  if (*dec) return qdeqomp::cmd_decompile(config_path, corpus_dir, run_out, workers, std::cout, std::cerr);
  if (*score)
    return qdeqomp::cmd_score(score_program, score_corpus, *qdeqomp::compare_method_from_name(score_method),
                              score_csv, score_lambda, *qdeqomp::aggregate_mode_from_name(score_agg), std::cout,
                              std::cerr);
  if (*simp) return qdeqomp::cmd_simplify(simp_program, simp_check, std::cout, std::cerr);
  return 2;
}
