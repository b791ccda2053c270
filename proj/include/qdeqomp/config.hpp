#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdeqomp/evolve.hpp"

namespace qdeqomp {

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(int line_no, const std::string& msg)
      : std::runtime_error(line_no > 0 ? "config line " + std::to_string(line_no) + ": " + msg : "config: " + msg),
        line(line_no) {}
  explicit ConfigError(const std::string& msg) : ConfigError(0, msg) {}
};

inline const char* compare_method_name(ComparisonMethod m) {
  switch (m) {
    case ComparisonMethod::Combined: return "combined";
    case ComparisonMethod::LineByLine: return "l_by_l";
    case ComparisonMethod::Seq: return "seq";
    case ComparisonMethod::Freq: return "freq";
  }
  return "combined";
}

inline std::optional<ComparisonMethod> compare_method_from_name(const std::string& s) {
  if (s == "combined") return ComparisonMethod::Combined;
  if (s == "l_by_l") return ComparisonMethod::LineByLine;
  if (s == "seq") return ComparisonMethod::Seq;
  if (s == "freq") return ComparisonMethod::Freq;
  return std::nullopt;
}

inline const char* selection_method_name(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::Tournament: return "tournament";
    case SelectionMethod::Roulette: return "roulette";
    case SelectionMethod::Rank: return "rank";
    case SelectionMethod::Random: return "random";
    case SelectionMethod::WeightedRoulette: return "weighted_roulette";
  }
  return "tournament";
}

inline std::optional<SelectionMethod> selection_method_from_name(const std::string& s) {
  if (s == "tournament") return SelectionMethod::Tournament;
  if (s == "roulette") return SelectionMethod::Roulette;
  if (s == "rank") return SelectionMethod::Rank;
  if (s == "random") return SelectionMethod::Random;
  if (s == "weighted_roulette") return SelectionMethod::WeightedRoulette;
  return std::nullopt;
}

inline const char* aggregate_mode_name(AggregateMode m) {
  return m == AggregateMode::Sum ? "sum" : "mean";
}

inline std::optional<AggregateMode> aggregate_mode_from_name(const std::string& s) {
  if (s == "mean") return AggregateMode::Mean;
  if (s == "sum") return AggregateMode::Sum;
  return std::nullopt;
}

inline std::string operations_to_string(const std::vector<Gate>& ops) {
  std::string out;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (i) out += ",";
    out += gate_name(ops[i]);
  }
  return out;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline long long parse_int_value(const std::string& value, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    throw ConfigError(line, key + ": expected an integer, got '" + value + "'");
  return v;
}

inline double parse_real_value(const std::string& value, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    throw ConfigError(line, key + ": expected a number, got '" + value + "'");
  return v;
}

inline std::uint64_t parse_seed_value(const std::string& value, int line) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || *end != '\0' || value.empty() || value[0] == '-')
    throw ConfigError(line, "seed: expected a non-negative integer, got '" + value + "'");
  return v;
}

inline std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline std::vector<Gate> operations_from_string(const std::string& raw, int line = 0) {
  std::string s = detail::trim(raw);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = detail::trim(s.substr(1, s.size() - 2));
  std::vector<Gate> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (item.empty()) throw ConfigError(line, "operations: empty gate name in list '" + raw + "'");
    auto g = gate_from_name(item);
    if (!g) throw ConfigError(line, "operations: unknown gate '" + item + "'");
    out.push_back(*g);
  }
  if (out.empty()) throw ConfigError(line, "operations: list must not be empty");
  return out;
}

inline void validate_config(const EvolutionConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (cfg.qubit_limit < 1) fail("qubit_limit must be at least 1");
  if (cfg.generations < 1) fail("generations must be at least 1");
  if (cfg.pop_size < 2) fail("pop_size must be at least 2");
  if (cfg.max_length < 1) fail("max_length must be at least 1");
  if (cfg.max_loop_depth < 0) fail("max_loop_depth must be non-negative");
  if (cfg.crossover_rate < 0.0 || cfg.crossover_rate > 1.0) fail("crossover_rate must lie in [0, 1]");
  if (cfg.new_gen_rate < 0.0 || cfg.new_gen_rate > 1.0) fail("new_gen_rate must lie in [0, 1]");
  if (cfg.mutation_rate < 0.0 || cfg.mutation_rate > 1.0) fail("mutation_rate must lie in [0, 1]");
  if (cfg.mutation_rate_2_initial < 0.0 || cfg.mutation_rate_2_initial > 1.0)
    fail("mutation_rate_2_initial must lie in [0, 1]");
  if (cfg.mutation_rate_2_min < 0.0 || cfg.mutation_rate_2_min > 1.0) fail("mutation_rate_2_min must lie in [0, 1]");
  if (cfg.decay <= 0.0 || cfg.decay > 1.0) fail("decay must lie in (0, 1]");
  if (cfg.parsimony_lambda < 0.0) fail("parsimony_lambda must be non-negative");
  if (cfg.tournament_size < 1) fail("tournament_size must be at least 1");
  if (cfg.operations.empty()) fail("operations must not be empty");
}

inline EvolutionConfig parse_config(const std::string& text) {
  EvolutionConfig cfg;
  std::stringstream ss(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value, got '" + line + "'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    if (value.empty()) throw ConfigError(line_no, key + ": missing value");

    if (key == "algorithm_name") {
      cfg.algorithm_name = value;
    } else if (key == "qubit_limit") {
      cfg.qubit_limit = static_cast<int>(detail::parse_int_value(value, line_no, key));
    } else if (key == "generations") {
      cfg.generations = static_cast<int>(detail::parse_int_value(value, line_no, key));
    } else if (key == "pop_size") {
      cfg.pop_size = static_cast<int>(detail::parse_int_value(value, line_no, key));
    } else if (key == "max_length") {
      cfg.max_length = static_cast<int>(detail::parse_int_value(value, line_no, key));
    } else if (key == "crossover_rate") {
      cfg.crossover_rate = detail::parse_real_value(value, line_no, key);
    } else if (key == "new_gen_rate") {
      cfg.new_gen_rate = detail::parse_real_value(value, line_no, key);
    } else if (key == "mutation_rate") {
      cfg.mutation_rate = detail::parse_real_value(value, line_no, key);
    } else if (key == "compare_method") {
      auto m = compare_method_from_name(value);
      if (!m) throw ConfigError(line_no, "compare_method: expected combined|l_by_l|seq|freq, got '" + value + "'");
      cfg.compare_method = *m;
    } else if (key == "max_loop_depth") {
      cfg.max_loop_depth = static_cast<int>(detail::parse_int_value(value, line_no, key));
    } else if (key == "selection_method") {
      auto m = selection_method_from_name(value);
      if (!m)
        throw ConfigError(line_no,
                          "selection_method: expected tournament|roulette|rank|random|weighted_roulette, got '" +
                              value + "'");
      cfg.selection_method = *m;
    } else if (key == "operations") {
      cfg.operations = operations_from_string(value, line_no);
    } else if (key == "seed") {
      cfg.seed = detail::parse_seed_value(value, line_no);
    } else if (key == "mutation_rate_2_initial") {
      cfg.mutation_rate_2_initial = detail::parse_real_value(value, line_no, key);
    } else if (key == "decay") {
      cfg.decay = detail::parse_real_value(value, line_no, key);
    } else if (key == "mutation_rate_2_min") {
      cfg.mutation_rate_2_min = detail::parse_real_value(value, line_no, key);
    } else if (key == "parsimony_lambda") {
      cfg.parsimony_lambda = detail::parse_real_value(value, line_no, key);
    } else if (key == "tournament_size") {
      cfg.tournament_size = static_cast<int>(detail::parse_int_value(value, line_no, key));
    } else if (key == "aggregate_mode") {
      auto m = aggregate_mode_from_name(value);
      if (!m) throw ConfigError(line_no, "aggregate_mode: expected mean|sum, got '" + value + "'");
      cfg.aggregate_mode = *m;
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

inline std::string serialize_config(const EvolutionConfig& cfg) {
  std::ostringstream out;
  out << "algorithm_name = " << cfg.algorithm_name << "\n";
  out << "qubit_limit = " << cfg.qubit_limit << "\n";
  out << "generations = " << cfg.generations << "\n";
  out << "pop_size = " << cfg.pop_size << "\n";
  out << "max_length = " << cfg.max_length << "\n";
  out << "crossover_rate = " << detail::format_real(cfg.crossover_rate) << "\n";
  out << "new_gen_rate = " << detail::format_real(cfg.new_gen_rate) << "\n";
  out << "mutation_rate = " << detail::format_real(cfg.mutation_rate) << "\n";
  out << "compare_method = " << compare_method_name(cfg.compare_method) << "\n";
  out << "max_loop_depth = " << cfg.max_loop_depth << "\n";
  out << "selection_method = " << selection_method_name(cfg.selection_method) << "\n";
  out << "operations = " << operations_to_string(cfg.operations) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "mutation_rate_2_initial = " << detail::format_real(cfg.mutation_rate_2_initial) << "\n";
  out << "decay = " << detail::format_real(cfg.decay) << "\n";
  out << "mutation_rate_2_min = " << detail::format_real(cfg.mutation_rate_2_min) << "\n";
  out << "parsimony_lambda = " << detail::format_real(cfg.parsimony_lambda) << "\n";
  out << "tournament_size = " << cfg.tournament_size << "\n";
  out << "aggregate_mode = " << aggregate_mode_name(cfg.aggregate_mode) << "\n";
  return out.str();
}

}  // namespace qdeqomp
