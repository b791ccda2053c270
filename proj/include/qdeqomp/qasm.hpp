#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdeqomp/circuit.hpp"

namespace qdeqomp {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnsupportedFeature : public ParseError {
 public:
  using ParseError::ParseError;
};

class IndexOutOfRange : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownGate : public ParseError {
 public:
  using ParseError::ParseError;
};

// Decimal with up to 12 significant digits, trailing zeros trimmed. Values in
// [1e-4, 1e6) always come out in fixed notation.
inline std::string format_angle(double x) {
  if (x == 0.0) return "0";  // avoid "-0"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace detail {

class QasmParser {
 public:
  explicit QasmParser(std::string_view src) : src_(src) {}

  Circuit parse() {
    Circuit result;
    bool have_qreg = false;
    skip_ws();
    while (!at_end()) {
      std::string word = read_identifier();
      if (word.empty()) fail<SyntaxError>("expected statement");
      if (word == "OPENQASM") {
        std::string version = read_until_semicolon();
        if (trim(version) != "2.0") fail<UnsupportedFeature>("unsupported OPENQASM version");
      } else if (word == "include") {
        read_until_semicolon();
      } else if (word == "qreg") {
        if (have_qreg) fail<UnsupportedFeature>("multiple quantum registers");
        parse_qreg(result);
        have_qreg = true;
      } else if (word == "creg" || word == "measure" || word == "barrier" ||
                 word == "gate" || word == "opaque" || word == "if" || word == "reset") {
        fail<UnsupportedFeature>("unsupported statement '" + word + "'");
      } else {
        if (!have_qreg) fail<SyntaxError>("gate before qreg declaration");
        parse_gate(word, result);
      }
      skip_ws();
    }
    if (!have_qreg) fail<SyntaxError>("missing qreg declaration");
    return result;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::string reg_name_;

  template <class E>
  [[noreturn]] void fail(const std::string& msg) const {
    throw E(line_, msg);
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (at_end() || peek() != c) fail<SyntaxError>(std::string("expected '") + c + "' " + what);
    advance();
  }

  static std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  std::string read_identifier() {
    skip_ws();
    std::string out;
    while (!at_end()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        out += advance();
      } else {
        break;
      }
    }
    return out;
  }

  std::string read_until_semicolon() {
    std::string out;
    while (!at_end() && peek() != ';') out += advance();
    if (at_end()) fail<SyntaxError>("missing ';'");
    advance();
    return out;
  }

  long read_integer() {
    skip_ws();
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      advance();
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail<SyntaxError>("expected integer");
    long v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (advance() - '0');
      if (v > 1000000000L) fail<SyntaxError>("integer too large");
    }
    return neg ? -v : v;
  }

  void parse_qreg(Circuit& result) {
    reg_name_ = read_identifier();
    if (reg_name_.empty()) fail<SyntaxError>("expected register name");
    expect('[', "after register name");
    long size = read_integer();
    expect(']', "after register size");
    expect(';', "after qreg");
    if (size < 1) fail<SyntaxError>("register size must be positive");
    if (size > 1000000) fail<SyntaxError>("register size too large");
    result.n_qubits = static_cast<int>(size);
  }

  void parse_gate(const std::string& name, Circuit& result) {
    auto kind = gate_from_name(name);
    if (!kind) fail<UnknownGate>("unknown gate '" + name + "'");
    Instruction instr;
    instr.kind = *kind;
    skip_ws();
    if (peek() == '(') {
      advance();
      while (true) {
        instr.params.push_back(parse_expr());
        skip_ws();
        if (peek() == ',') {
          advance();
          continue;
        }
        break;
      }
      expect(')', "after gate parameters");
    }
    while (true) {
      instr.qubits.push_back(parse_operand(result.n_qubits));
      skip_ws();
      if (peek() == ',') {
        advance();
        continue;
      }
      break;
    }
    expect(';', "after gate statement");

    const auto& info = gate_info(instr.kind);
    if (static_cast<int>(instr.qubits.size()) != info.arity)
      fail<SyntaxError>("gate '" + name + "' expects " + std::to_string(info.arity) + " qubit operand(s)");
    if (static_cast<int>(instr.params.size()) != info.param_count)
      fail<SyntaxError>("gate '" + name + "' expects " + std::to_string(info.param_count) + " parameter(s)");
    for (std::size_t i = 0; i < instr.qubits.size(); ++i)
      for (std::size_t j = i + 1; j < instr.qubits.size(); ++j)
        if (instr.qubits[i] == instr.qubits[j]) fail<SyntaxError>("duplicate qubit operand");
    for (double p : instr.params)
      if (!std::isfinite(p)) fail<SyntaxError>("non-finite gate parameter");
    result.instructions.push_back(std::move(instr));
  }

  int parse_operand(int n_qubits) {
    std::string name = read_identifier();
    if (name != reg_name_) fail<SyntaxError>("unknown register '" + name + "'");
    expect('[', "after register name");
    long idx = read_integer();
    expect(']', "after qubit index");
    if (idx < 0 || idx >= n_qubits) fail<IndexOutOfRange>("qubit index " + std::to_string(idx) + " out of range");
    return static_cast<int>(idx);
  }

  // Parameter expressions: decimal literals, pi, + - * / ^ and parentheses.
  double parse_expr() {
    double v = parse_term();
    while (true) {
      skip_ws();
      char c = peek();
      if (c == '+') {
        advance();
        v += parse_term();
      } else if (c == '-') {
        advance();
        v -= parse_term();
      } else {
        return v;
      }
    }
  }

  double parse_term() {
    double v = parse_unary();
    while (true) {
      skip_ws();
      char c = peek();
      if (c == '*') {
        advance();
        v *= parse_unary();
      } else if (c == '/') {
        advance();
        v /= parse_unary();
      } else {
        return v;
      }
    }
  }

  double parse_unary() {
    skip_ws();
    if (peek() == '-') {
      advance();
      return -parse_unary();
    }
    if (peek() == '+') {
      advance();
      return parse_unary();
    }
    return parse_power();
  }

  double parse_power() {
    double base = parse_atom();
    skip_ws();
    if (peek() == '^') {
      advance();
      double e = parse_unary();
      return std::pow(base, e);
    }
    return base;
  }

  double parse_atom() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      advance();
      double v = parse_expr();
      expect(')', "in parameter expression");
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word = read_identifier();
      if (word == "pi") return M_PI;
      fail<SyntaxError>("unknown symbol '" + word + "' in parameter expression");
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::string lit;
      while (!at_end()) {
        char d = peek();
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '.') {
          lit += advance();
        } else if (d == 'e' || d == 'E') {
          lit += advance();
          if (peek() == '+' || peek() == '-') lit += advance();
        } else {
          break;
        }
      }
      char* end = nullptr;
      double v = std::strtod(lit.c_str(), &end);
      if (end != lit.c_str() + lit.size()) fail<SyntaxError>("malformed number '" + lit + "'");
      return v;
    }
    fail<SyntaxError>("expected parameter expression");
  }
};

}  // namespace detail

inline Circuit parse_qasm(std::string_view text) { return detail::QasmParser(text).parse(); }

inline std::string format_instruction(const Instruction& instr) {
  std::string out(gate_name(instr.kind));
  if (!instr.params.empty()) {
    out += '(';
    for (std::size_t i = 0; i < instr.params.size(); ++i) {
      if (i) out += ',';
      out += format_angle(instr.params[i]);
    }
    out += ')';
  }
  out += ' ';
  for (std::size_t i = 0; i < instr.qubits.size(); ++i) {
    if (i) out += ',';
    out += "q[" + std::to_string(instr.qubits[i]) + ']';
  }
  out += ';';
  return out;
}

inline std::vector<std::string> gate_lines(const Circuit& c) {
  std::vector<std::string> lines;
  lines.reserve(c.instructions.size());
  for (const auto& instr : c.instructions) lines.push_back(format_instruction(instr));
  return lines;
}

inline std::string print_qasm(const Circuit& c) {
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" + std::to_string(c.n_qubits) + "];\n";
  for (const auto& instr : c.instructions) {
    out += format_instruction(instr);
    out += '\n';
  }
  return out;
}

}  // namespace qdeqomp
