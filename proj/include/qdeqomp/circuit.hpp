#pragma once

#include <map>
#include <string>
#include <vector>

#include "qdeqomp/gates.hpp"

namespace qdeqomp {

struct Instruction {
  Gate kind;
  std::vector<int> qubits;    // size == gate_arity(kind), pairwise distinct
  std::vector<double> params; // size == gate_param_count(kind), all finite

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct Circuit {
  int n_qubits = 1;
  std::vector<Instruction> instructions;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

// A family of target circuits over a contiguous range of sizes.
struct Corpus {
  std::string algorithm_name;
  std::map<int, Circuit> entries; // n -> circuit, entry for n has n_qubits == n
};

}  // namespace qdeqomp
