#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdeqomp/bench.hpp"
#include "qdeqomp/config.hpp"
#include "qdeqomp/dsl.hpp"
#include "qdeqomp/evolve.hpp"

namespace qdeqomp {

inline constexpr const char* kToolName = "qdeqomp";
inline constexpr const char* kToolVersion = "0.1.0";

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

inline std::string iso_timestamp_utc() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Reads every <stem>_<n>.qasm in the directory into one family.
inline Corpus load_corpus_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError(dir.string() + " is not a readable directory");
  Corpus corpus;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".qasm") files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  if (files.empty()) throw IoError("no .qasm files in " + dir.string());
  for (const auto& file : files) {
    std::string stem = file.stem().string();
    auto underscore = stem.rfind('_');
    if (underscore == std::string::npos || underscore == 0 || underscore + 1 == stem.size())
      throw IoError("corpus file name must look like <name>_<n>.qasm: " + file.string());
    std::string suffix = stem.substr(underscore + 1);
    if (suffix.find_first_not_of("0123456789") != std::string::npos)
      throw IoError("corpus file name must end in _<n>: " + file.string());
    int n = std::stoi(suffix);
    std::string name = stem.substr(0, underscore);
    if (corpus.algorithm_name.empty())
      corpus.algorithm_name = name;
    else if (corpus.algorithm_name != name)
      throw IoError("mixed corpus names in " + dir.string() + ": " + corpus.algorithm_name + " vs " + name);
    if (corpus.entries.count(n)) throw IoError("duplicate corpus entry for n=" + std::to_string(n));
    try {
      corpus.entries[n] = parse_qasm(read_text_file(file));
    } catch (const ParseError& e) {
      throw IoError(file.string() + ": " + e.what());
    }
  }
  return corpus;
}

namespace detail {

inline nlohmann::json config_to_json(const EvolutionConfig& cfg) {
  nlohmann::json j;
  j["algorithm_name"] = cfg.algorithm_name;
  j["qubit_limit"] = cfg.qubit_limit;
  j["generations"] = cfg.generations;
  j["pop_size"] = cfg.pop_size;
  j["max_length"] = cfg.max_length;
  j["crossover_rate"] = cfg.crossover_rate;
  j["new_gen_rate"] = cfg.new_gen_rate;
  j["mutation_rate"] = cfg.mutation_rate;
  j["compare_method"] = compare_method_name(cfg.compare_method);
  j["max_loop_depth"] = cfg.max_loop_depth;
  j["selection_method"] = selection_method_name(cfg.selection_method);
  j["operations"] = operations_to_string(cfg.operations);
  j["seed"] = cfg.seed;
  j["mutation_rate_2_initial"] = cfg.mutation_rate_2_initial;
  j["decay"] = cfg.decay;
  j["mutation_rate_2_min"] = cfg.mutation_rate_2_min;
  j["parsimony_lambda"] = cfg.parsimony_lambda;
  j["tournament_size"] = cfg.tournament_size;
  j["aggregate_mode"] = aggregate_mode_name(cfg.aggregate_mode);
  return j;
}

inline std::string fitness_csv(const std::vector<GenerationLog>& logs) {
  std::ostringstream out;
  out << "generation,best_fitness,mean_fitness,median_fitness,best_node_count,m_r2,elapsed_ms\n";
  for (const auto& log : logs) {
    out << log.generation << ',' << format_real(log.best_fitness) << ',' << format_real(log.mean_fitness) << ','
        << format_real(log.median_fitness) << ',' << log.best_node_count << ',' << format_real(log.m_r2) << ','
        << log.elapsed_ms << '\n';
  }
  return out.str();
}

inline std::string report_csv(const FitnessReport& report) {
  std::ostringstream out;
  out << "n,s_seq,s_freq,s_lcs,s_total,valid\n";
  for (const auto& [n, row] : report.per_n) {
    out << n << ',' << format_real(row.s_seq) << ',' << format_real(row.s_freq) << ',' << format_real(row.s_lcs)
        << ',' << format_real(row.s_total) << ',' << (row.valid ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace detail

inline int cmd_generate(const std::string& name, int n_min, int n_max, const std::filesystem::path& out_dir,
                        std::ostream& out, std::ostream& err) {
  try {
    BenchmarkSpec spec{name, n_min, n_max};
    Corpus corpus = generate_corpus(spec, out_dir);

    nlohmann::json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["command"] = "generate";
    manifest["benchmark"] = name;
    manifest["n_min"] = n_min;
    manifest["n_max"] = n_max;
    manifest["output_dir"] = (out_dir / name).string();
    manifest["start_timestamp"] = iso_timestamp_utc();
    manifest["files"] = corpus.entries.size();
    write_text_file(out_dir / name / "manifest.json", manifest.dump(2) + "\n");

    out << "wrote " << corpus.entries.size() << " files to " << (out_dir / name).string() << "\n";
    return 0;
  } catch (const UnknownBenchmark& e) {
    err << e.what() << "\nknown benchmarks:";
    for (const auto& b : benchmark_names()) err << ' ' << b;
    err << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\nusage: qdeqomp generate <benchmark> <n_min> <n_max> <out_dir>\n";
    return 2;
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return 3;
  }
}

inline int cmd_decompile(const std::filesystem::path& config_path, const std::filesystem::path& corpus_path,
                         const std::filesystem::path& out_dir, int workers, std::ostream& out, std::ostream& err) {
  EvolutionConfig cfg;
  try {
    cfg = parse_config(read_text_file(config_path));
  } catch (const ConfigError& e) {
    err << config_path.string() << ": " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return 2;
  }

  Corpus corpus;
  try {
    corpus = load_corpus_dir(corpus_path);
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return 3;
  }

  Corpus filtered;
  filtered.algorithm_name = corpus.algorithm_name;
  for (const auto& [n, circuit] : corpus.entries)
    if (n <= cfg.qubit_limit) filtered.entries[n] = circuit;
  if (filtered.entries.empty()) {
    err << "qubit_limit " << cfg.qubit_limit << " excludes every corpus entry\n";
    return 2;
  }

  std::string timestamp = iso_timestamp_utc();
  RunOptions opts;
  opts.workers = workers;
  RunResult result = run(cfg, filtered, opts);

  try {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    write_text_file(out_dir / "fitness.csv", detail::fitness_csv(result.logs));
    write_text_file(out_dir / "best.dsl", render_dsl(result.best.program));
    write_text_file(out_dir / "best.py.txt", render_pythonic(result.best.program, corpus.algorithm_name));
    write_text_file(out_dir / "best_report.csv", detail::report_csv(*result.best.report));
    write_text_file(out_dir / "config.txt", serialize_config(cfg));

    nlohmann::json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["command"] = "decompile";
    manifest["corpus_path"] = corpus_path.string();
    manifest["output_dir"] = out_dir.string();
    manifest["seed"] = cfg.seed;
    manifest["workers"] = workers;
    manifest["start_timestamp"] = timestamp;
    manifest["config"] = detail::config_to_json(cfg);
    manifest["best"] = {{"aggregate", result.best.report->aggregate},
                        {"parsimony", result.best.report->parsimony},
                        {"node_count", result.best.node_count},
                        {"birth_generation", result.best.birth_generation},
                        {"generations_run", result.logs.size()}};
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return 3;
  }

  out << "best fitness " << detail::format_real(result.best.report->aggregate) << " after " << result.logs.size()
      << " generations; results in " << out_dir.string() << "\n";
  return 0;
}

inline int cmd_score(const std::filesystem::path& program_path, const std::filesystem::path& corpus_path,
                     ComparisonMethod method, bool csv, double lambda, AggregateMode mode, std::ostream& out,
                     std::ostream& err) {
  GenProgram program;
  try {
    program = parse_dsl(read_text_file(program_path));
  } catch (const DslError& e) {
    err << program_path.string() << ": " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return 3;
  }

  Corpus corpus;
  try {
    corpus = load_corpus_dir(corpus_path);
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return 3;
  }

  FitnessReport report = evaluate(program, corpus, method, lambda, 0, mode);
  int nodes = program.node_count();
  if (csv) {
    out << "n,s_seq,s_freq,s_lcs,s_total,valid,node_count,aggregate\n";
    for (const auto& [n, row] : report.per_n) {
      out << n << ',' << detail::format_real(row.s_seq) << ',' << detail::format_real(row.s_freq) << ','
          << detail::format_real(row.s_lcs) << ',' << detail::format_real(row.s_total) << ',' << (row.valid ? 1 : 0)
          << ',' << nodes << ',' << detail::format_real(report.aggregate) << '\n';
    }
  } else {
    out << std::left << std::setw(6) << "n" << std::setw(12) << "s_seq" << std::setw(12) << "s_freq" << std::setw(12)
        << "s_lcs" << std::setw(12) << "s_total" << "\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& [n, row] : report.per_n) {
      out << std::left << std::setw(6) << n << std::setw(12) << row.s_seq << std::setw(12) << row.s_freq
          << std::setw(12) << row.s_lcs << std::setw(12) << row.s_total << "\n";
    }
    out << "node_count " << nodes << "\n";
    out << "aggregate  " << report.aggregate << "\n";
    out.unsetf(std::ios::fixed);
    out << std::setprecision(6);
  }
  return 0;
}

inline int cmd_simplify(const std::filesystem::path& program_path, bool check, std::ostream& out, std::ostream& err) {
  GenProgram program;
  try {
    program = parse_dsl(read_text_file(program_path));
  } catch (const DslError& e) {
    err << program_path.string() << ": " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return 3;
  }

  GenProgram simplified = simplify(program);
  out << render_dsl(simplified);
  if (!check) return 0;

  int failures = 0;
  for (int n = 1; n <= 16; ++n) {
    bool ok_before = true, ok_after = true;
    Circuit before, after;
    try {
      before = instantiate(program, n);
    } catch (const EvalError&) {
      ok_before = false;
    }
    try {
      after = instantiate(simplified, n);
    } catch (const EvalError&) {
      ok_after = false;
    }
    bool same = ok_before == ok_after && (!ok_before || before == after);
    if (!same) {
      err << "instantiation mismatch at n=" << n << "\n";
      ++failures;
    }
  }
  out << "node_count before " << program.node_count() << " after " << simplified.node_count() << "\n";
  if (failures == 0) {
    out << "equivalence OK for n in 1..16\n";
    return 0;
  }
  return 1;
}

}  // namespace qdeqomp
