#pragma once

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdeqomp/program.hpp"

namespace qdeqomp {

class DslError : public std::runtime_error {
 public:
  DslError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::string render_index(const IndexExpr& e);

inline bool is_chain(const IndexExpr& e) {
  return e.kind() == IndexExpr::Kind::Add || e.kind() == IndexExpr::Kind::Sub;
}

inline std::string render_index_operand(const IndexExpr& e) {
  if (is_chain(e)) return "(" + render_index(e) + ")";
  return render_index(e);
}

inline std::string render_index(const IndexExpr& e) {
  switch (e.kind()) {
    case IndexExpr::Kind::SizeVar:
      return "n";
    case IndexExpr::Kind::LoopVar:
      return "i" + std::to_string(e.var_index());
    case IndexExpr::Kind::IntConst:
      return std::to_string(e.value());
    case IndexExpr::Kind::Abs:
      return "abs(" + render_index(e.operand()) + ")";
    case IndexExpr::Kind::Add:
      return render_index(e.left()) + " + " + render_index_operand(e.right());
    case IndexExpr::Kind::Sub: {
      const IndexExpr l = e.left();
      const IndexExpr r = e.right();
      if (l.kind() == IndexExpr::Kind::IntConst && l.value() == 0 && r.kind() != IndexExpr::Kind::IntConst)
        return "-" + render_index_operand(r);
      return render_index(l) + " - " + render_index_operand(r);
    }
  }
  return "";
}

// Bare when a single non-negative leaf, parenthesized otherwise.
inline std::string render_term(const IndexExpr& e) {
  if (is_chain(e) || (e.kind() == IndexExpr::Kind::IntConst && e.value() < 0))
    return "(" + render_index(e) + ")";
  return render_index(e);
}

inline std::string render_angle(const AngleExpr& a) {
  std::string out = a.sign < 0 ? "-pi/(2^" : "pi/(2^";
  out += render_term(a.exponent);
  out += " + ";
  out += render_term(a.offset);
  out += a.shift < 0 ? " - " : " + ";
  out += std::to_string(a.shift < 0 ? -a.shift : a.shift);
  out += ")";
  return out;
}

inline void render_statement(const Statement& s, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  if (s.is_gate()) {
    out += "g ";
    out += gate_name(s.gate);
    out += " [";
    for (std::size_t i = 0; i < s.qubits.size(); ++i) {
      if (i) out += ", ";
      out += render_index(s.qubits[i]);
    }
    out += "]";
    if (!s.angles.empty()) {
      out += " (";
      for (std::size_t i = 0; i < s.angles.size(); ++i) {
        if (i) out += ", ";
        out += render_angle(s.angles[i]);
      }
      out += ")";
    }
    out += '\n';
  } else {
    out += "for i" + std::to_string(s.depth) + " in range(" + render_index(s.range) + "):\n";
    for (const auto& child : s.body) render_statement(child, depth + 1, out);
  }
}

class DslParser {
 public:
  explicit DslParser(std::string_view src) : src_(src) {}

  GenProgram parse() {
    GenProgram program;
    std::vector<std::vector<Statement>*> stack{&program.body};
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < src_.size()) {
      std::size_t eol = src_.find('\n', pos);
      if (eol == std::string_view::npos) eol = src_.size();
      std::string_view line = src_.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

      std::size_t indent = 0;
      while (indent < line.size() && line[indent] == ' ') ++indent;
      std::string_view content = line.substr(indent);
      if (content.empty() || content[0] == '#') continue;
      if (indent % 2 != 0) throw DslError(line_no, "indentation must be a multiple of 2 spaces");
      std::size_t depth = indent / 2;
      if (depth + 1 > stack.size()) throw DslError(line_no, "unexpected indentation");
      stack.resize(depth + 1);

      line_ = line_no;
      text_ = content;
      cur_ = 0;
      if (content.rfind("for", 0) == 0) {
        Statement loop = parse_for(static_cast<int>(depth));
        stack.back()->push_back(std::move(loop));
        stack.push_back(&stack.back()->back().body);
      } else if (content.rfind("g ", 0) == 0) {
        stack.back()->push_back(parse_gate());
      } else {
        throw DslError(line_no, "expected gate or for statement");
      }
    }
    return program;
  }

 private:
  std::string_view src_;
  std::string_view text_;
  std::size_t cur_ = 0;
  int line_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw DslError(line_, msg); }

  void skip_spaces() {
    while (cur_ < text_.size() && text_[cur_] == ' ') ++cur_;
  }

  bool at_end() {
    skip_spaces();
    return cur_ >= text_.size();
  }

  char peek() {
    skip_spaces();
    return cur_ < text_.size() ? text_[cur_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++cur_;
  }

  bool consume(char c) {
    if (peek() == c) {
      ++cur_;
      return true;
    }
    return false;
  }

  std::string read_word() {
    skip_spaces();
    std::string out;
    while (cur_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[cur_])) || text_[cur_] == '_')) {
      out += text_[cur_++];
    }
    return out;
  }

  long long read_uint() {
    skip_spaces();
    if (cur_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[cur_]))) fail("expected integer");
    long long v = 0;
    while (cur_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[cur_]))) {
      v = v * 10 + (text_[cur_++] - '0');
      if (v > (1LL << 40)) fail("integer literal too large");
    }
    return v;
  }

  IndexExpr parse_index_expr() {
    IndexExpr acc = parse_signed_factor();
    while (true) {
      char c = peek();
      if (c == '+') {
        ++cur_;
        acc = IndexExpr::add(acc, parse_signed_factor());
      } else if (c == '-') {
        ++cur_;
        acc = IndexExpr::sub(acc, parse_signed_factor());
      } else {
        return acc;
      }
    }
  }

  IndexExpr parse_signed_factor() {
    if (consume('-')) {
      IndexExpr f = parse_signed_factor();
      if (f.kind() == IndexExpr::Kind::IntConst) return IndexExpr::int_const(-f.value());
      return IndexExpr::sub(IndexExpr::int_const(0), f);
    }
    return parse_factor();
  }

  IndexExpr parse_factor() {
    char c = peek();
    if (c == '(') {
      ++cur_;
      IndexExpr e = parse_index_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return IndexExpr::int_const(read_uint());
    std::string word = read_word();
    if (word == "n") return IndexExpr::size_var();
    if (word == "abs") {
      expect('(');
      IndexExpr e = parse_index_expr();
      expect(')');
      return IndexExpr::abs(e);
    }
    if (word.size() >= 2 && word[0] == 'i' && std::isdigit(static_cast<unsigned char>(word[1]))) {
      for (std::size_t i = 1; i < word.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(word[i]))) fail("malformed loop variable '" + word + "'");
      return IndexExpr::loop_var(std::atoi(word.c_str() + 1));
    }
    fail("expected index expression");
  }

  AngleExpr parse_angle_expr() {
    AngleExpr a;
    a.sign = consume('-') ? -1 : 1;
    if (read_word() != "pi") fail("phase expression must start with 'pi'");
    expect('/');
    expect('(');
    if (read_uint() != 2) fail("phase denominator must start with '2^'");
    expect('^');
    a.exponent = parse_signed_factor();
    expect('+');
    a.offset = parse_signed_factor();
    bool negative_shift = false;
    if (consume('-')) {
      negative_shift = true;
    } else {
      expect('+');
    }
    long long shift = read_uint();
    a.shift = negative_shift ? -shift : shift;
    expect(')');
    return a;
  }

  Statement parse_for(int depth) {
    std::string word = read_word();
    if (word != "for") fail("expected 'for'");
    std::string var = read_word();
    std::string expected = "i" + std::to_string(depth);
    if (var != expected) fail("loop at this depth must bind " + expected);
    if (read_word() != "in") fail("expected 'in'");
    if (read_word() != "range") fail("expected 'range'");
    expect('(');
    IndexExpr range = parse_index_expr();
    expect(')');
    expect(':');
    if (!at_end()) fail("trailing text after ':'");
    return Statement::loop(depth, range, {});
  }

  Statement parse_gate() {
    std::string g = read_word();
    if (g != "g") fail("expected 'g'");
    std::string name = read_word();
    auto kind = gate_from_name(name);
    if (!kind) fail("unknown gate '" + name + "'");
    Statement s;
    s.kind = Statement::Kind::Gate;
    s.gate = *kind;
    expect('[');
    if (!consume(']')) {
      while (true) {
        s.qubits.push_back(parse_index_expr());
        if (consume(',')) continue;
        expect(']');
        break;
      }
    }
    if (peek() == '(') {
      ++cur_;
      while (true) {
        s.angles.push_back(parse_angle_expr());
        if (consume(',')) continue;
        expect(')');
        break;
      }
    }
    if (!at_end()) fail("trailing text after gate statement");
    if (static_cast<int>(s.qubits.size()) != gate_arity(s.gate)) fail("gate '" + name + "' operand count mismatch");
    if (static_cast<int>(s.angles.size()) != gate_param_count(s.gate)) fail("gate '" + name + "' parameter count mismatch");
    return s;
  }
};

inline std::string render_python_index(const IndexExpr& e) { return render_index(e); }

inline std::string render_python_angle(const AngleExpr& a) {
  std::string out = "pi * (1 / (2 ** (";
  out += render_index(a.exponent);
  out += ") + (";
  out += render_index(a.offset);
  out += a.shift < 0 ? " - " : " + ";
  out += std::to_string(a.shift < 0 ? -a.shift : a.shift);
  out += ")))";
  if (a.sign < 0) return "-(" + out + ")";
  return out;
}

inline void render_python_statement(const Statement& s, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth + 1) * 4, ' ');
  if (s.is_gate()) {
    out += "qc.";
    out += gate_name(s.gate);
    out += "(";
    bool first = true;
    for (const auto& a : s.angles) {
      if (!first) out += ", ";
      out += render_python_angle(a);
      first = false;
    }
    for (const auto& q : s.qubits) {
      if (!first) out += ", ";
      out += "(" + render_index(q) + ") % n";
      first = false;
    }
    out += ")\n";
  } else {
    out += "for i" + std::to_string(s.depth) + " in range(" + render_index(s.range) + "):\n";
    for (const auto& child : s.body) render_python_statement(child, depth + 1, out);
  }
}

}  // namespace detail

inline std::string render_dsl(const GenProgram& p) {
  std::string out;
  for (const auto& s : p.body) detail::render_statement(s, 0, out);
  return out;
}

inline GenProgram parse_dsl(std::string_view text) { return detail::DslParser(text).parse(); }

inline std::string render_pythonic(const GenProgram& p, const std::string& name = "decompiled") {
  std::string out = "def " + name + "(n):\n    qc = QuantumCircuit(n)\n";
  for (const auto& s : p.body) detail::render_python_statement(s, 0, out);
  out += "    return qc\n";
  return out;
}

}  // namespace qdeqomp
