#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace qdeqomp {

enum class Gate {
  H, X, Y, Z, S, T, SX,
  RX, RY, RZ, P,
  CX, CZ, CP, CRX, CRY, CRZ,
  SWAP, CCX,
};

inline constexpr std::size_t kGateCount = 19;

struct GateInfo {
  Gate kind;
  std::string_view name;
  int arity;        // qubit operands
  int param_count;  // angle parameters
};

inline constexpr std::array<GateInfo, kGateCount> kGateTable{{
    {Gate::H, "h", 1, 0},
    {Gate::X, "x", 1, 0},
    {Gate::Y, "y", 1, 0},
    {Gate::Z, "z", 1, 0},
    {Gate::S, "s", 1, 0},
    {Gate::T, "t", 1, 0},
    {Gate::SX, "sx", 1, 0},
    {Gate::RX, "rx", 1, 1},
    {Gate::RY, "ry", 1, 1},
    {Gate::RZ, "rz", 1, 1},
    {Gate::P, "p", 1, 1},
    {Gate::CX, "cx", 2, 0},
    {Gate::CZ, "cz", 2, 0},
    {Gate::CP, "cp", 2, 1},
    {Gate::CRX, "crx", 2, 1},
    {Gate::CRY, "cry", 2, 1},
    {Gate::CRZ, "crz", 2, 1},
    {Gate::SWAP, "swap", 2, 0},
    {Gate::CCX, "ccx", 3, 0},
}};

inline constexpr const GateInfo& gate_info(Gate g) {
  return kGateTable[static_cast<std::size_t>(g)];
}

inline constexpr std::string_view gate_name(Gate g) { return gate_info(g).name; }
inline constexpr int gate_arity(Gate g) { return gate_info(g).arity; }
inline constexpr int gate_param_count(Gate g) { return gate_info(g).param_count; }

inline std::optional<Gate> gate_from_name(std::string_view name) {
  for (const auto& info : kGateTable) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

}  // namespace qdeqomp
