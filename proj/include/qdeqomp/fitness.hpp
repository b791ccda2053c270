#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qdeqomp/circuit.hpp"
#include "qdeqomp/program.hpp"
#include "qdeqomp/qasm.hpp"

namespace qdeqomp {

enum class ComparisonMethod { Combined, LineByLine, Seq, Freq };
enum class AggregateMode { Mean, Sum };

struct PerNScores {
  double s_seq = 0.0;
  double s_freq = 0.0;
  double s_lcs = 0.0;
  double s_total = 0.0;
  bool valid = false; // false when instantiation failed at this n
};

struct FitnessReport {
  std::map<int, PerNScores> per_n;
  double parsimony = 0.0; // -lambda * node_count
  double aggregate = 0.0;
};

namespace detail {

template <class T>
inline std::size_t levenshtein_tokens(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) return levenshtein_tokens(b, a); // second arg drives memory
  if (b.empty()) return a.size();
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t tmp = row[j];
      std::size_t best = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      if (row[j] + 1 < best) best = row[j] + 1;
      if (row[j - 1] + 1 < best) best = row[j - 1] + 1;
      row[j] = best;
      diag = tmp;
    }
  }
  return row[b.size()];
}

template <class T>
inline std::size_t lcs_tokens(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) return lcs_tokens(b, a);
  if (b.empty()) return 0;
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t tmp = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = tmp;
    }
  }
  return row[b.size()];
}

inline std::array<double, kGateCount> gate_counts(const Circuit& c) {
  std::array<double, kGateCount> counts{};
  for (const auto& instr : c.instructions) counts[static_cast<std::size_t>(instr.kind)] += 1.0;
  return counts;
}

inline double cosine(const std::array<double, kGateCount>& x, const std::array<double, kGateCount>& y) {
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < kGateCount; ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0.0 && ny == 0.0) return 1.0;
  if (nx == 0.0 || ny == 0.0) return 0.0;
  // Counts are integers, so nx * ny is exact and identical vectors score an
  // exact 1.0; the clamp absorbs the last-ulp excess rounding can produce.
  return std::min(1.0, dot / std::sqrt(nx * ny));
}

}  // namespace detail

inline std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return detail::levenshtein_tokens<std::string>(a, b);
}

inline std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return detail::lcs_tokens<std::string>(a, b);
}

// 1 - sqrt(D / max(|A|, |B|)) over canonical instruction lines.
inline double seq_similarity(const Circuit& a, const Circuit& b) {
  std::size_t la = a.instructions.size(), lb = b.instructions.size();
  if (la == 0 && lb == 0) return 1.0;
  auto d = static_cast<double>(levenshtein(gate_lines(a), gate_lines(b)));
  return 1.0 - std::sqrt(d / static_cast<double>(std::max(la, lb)));
}

// Cosine similarity of gate-name frequency vectors.
inline double freq_similarity(const Circuit& a, const Circuit& b) {
  return detail::cosine(detail::gate_counts(a), detail::gate_counts(b));
}

// LCS length over the target's line count, capped at 1.
inline double lcs_similarity(const Circuit& candidate, const Circuit& target) {
  if (target.instructions.empty()) return candidate.instructions.empty() ? 1.0 : 0.0;
  auto l = static_cast<double>(lcs_length(gate_lines(candidate), gate_lines(target)));
  return std::min(1.0, l / static_cast<double>(target.instructions.size()));
}

inline double combined_score(const Circuit& candidate, const Circuit& target, ComparisonMethod method) {
  switch (method) {
    case ComparisonMethod::LineByLine:
      return lcs_similarity(candidate, target);
    case ComparisonMethod::Seq:
      return seq_similarity(candidate, target);
    case ComparisonMethod::Freq:
      return freq_similarity(candidate, target);
    case ComparisonMethod::Combined:
      break;
  }
  double product = seq_similarity(candidate, target) * freq_similarity(candidate, target) *
                   lcs_similarity(candidate, target);
  return std::cbrt(product);
}

// Pre-tokenized corpus for the evaluation hot path. Identical lines share an
// id so the DPs run over integers.
class CorpusIndex {
 public:
  struct Entry {
    int n = 0;
    std::vector<int> line_ids;
    std::array<double, kGateCount> freq{};
  };

  explicit CorpusIndex(const Corpus& corpus) {
    entries_.reserve(corpus.entries.size());
    for (const auto& [n, circuit] : corpus.entries) {
      Entry e;
      e.n = n;
      e.freq = detail::gate_counts(circuit);
      e.line_ids.reserve(circuit.instructions.size());
      for (const auto& instr : circuit.instructions) e.line_ids.push_back(intern(format_instruction(instr)));
      entries_.push_back(std::move(e));
    }
  }

  const std::vector<Entry>& entries() const { return entries_; }

  int lookup(const std::string& line) const {
    auto it = ids_.find(line);
    return it == ids_.end() ? -1 : it->second;
  }

 private:
  int intern(const std::string& line) {
    auto [it, inserted] = ids_.emplace(line, static_cast<int>(ids_.size()));
    return it->second;
  }

  std::unordered_map<std::string, int> ids_;
  std::vector<Entry> entries_;
};

inline FitnessReport evaluate(const GenProgram& p, const CorpusIndex& index, ComparisonMethod method,
                              double lambda, int cap_max_length = 0,
                              AggregateMode mode = AggregateMode::Mean) {
  FitnessReport report;
  int nodes = p.node_count();
  report.parsimony = -lambda * static_cast<double>(nodes);

  double sum = 0.0;
  for (const auto& entry : index.entries()) {
    PerNScores scores;
    Circuit candidate;
    bool valid = true;
    try {
      std::size_t cap = instantiation_cap(entry.n, cap_max_length > 0 ? cap_max_length
                                                                      : std::max(1, p.gate_stmt_count()));
      candidate = instantiate(p, entry.n, cap);
    } catch (const EvalError&) {
      valid = false;
    }
    if (valid) {
      scores.valid = true;
      std::vector<int> cand_ids;
      cand_ids.reserve(candidate.instructions.size());
      std::unordered_map<std::string, int> local;
      for (const auto& instr : candidate.instructions) {
        std::string line = format_instruction(instr);
        int id = index.lookup(line);
        if (id < 0) {
          auto [it, inserted] = local.emplace(std::move(line), -static_cast<int>(local.size()) - 2);
          id = it->second;
        }
        cand_ids.push_back(id);
      }

      std::size_t la = cand_ids.size(), lb = entry.line_ids.size();
      if (la == 0 && lb == 0) {
        scores.s_seq = 1.0;
      } else {
        auto d = static_cast<double>(detail::levenshtein_tokens<int>(cand_ids, entry.line_ids));
        scores.s_seq = 1.0 - std::sqrt(d / static_cast<double>(std::max(la, lb)));
      }
      scores.s_freq = detail::cosine(detail::gate_counts(candidate), entry.freq);
      if (lb == 0) {
        scores.s_lcs = la == 0 ? 1.0 : 0.0;
      } else {
        auto l = static_cast<double>(detail::lcs_tokens<int>(cand_ids, entry.line_ids));
        scores.s_lcs = std::min(1.0, l / static_cast<double>(lb));
      }
      switch (method) {
        case ComparisonMethod::Combined:
          scores.s_total = std::cbrt(scores.s_seq * scores.s_freq * scores.s_lcs);
          break;
        case ComparisonMethod::LineByLine:
          scores.s_total = scores.s_lcs;
          break;
        case ComparisonMethod::Seq:
          scores.s_total = scores.s_seq;
          break;
        case ComparisonMethod::Freq:
          scores.s_total = scores.s_freq;
          break;
      }
    }
    sum += scores.s_total;
    report.per_n.emplace(entry.n, scores);
  }

  double base = sum;
  if (mode == AggregateMode::Mean && !index.entries().empty())
    base = sum / static_cast<double>(index.entries().size());
  report.aggregate = base + report.parsimony;
  return report;
}

inline FitnessReport evaluate(const GenProgram& p, const Corpus& corpus, ComparisonMethod method,
                              double lambda, int cap_max_length = 0,
                              AggregateMode mode = AggregateMode::Mean) {
  return evaluate(p, CorpusIndex(corpus), method, lambda, cap_max_length, mode);
}

}  // namespace qdeqomp
