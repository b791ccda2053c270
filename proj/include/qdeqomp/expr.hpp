#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

namespace qdeqomp {

class EvalError : public std::runtime_error {
 public:
  enum class Kind {
    UnboundLoopVar,
    ZeroDenominator,
    DuplicateQubitOperands,
    ResourceExceeded,
  };

  EvalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Integer index expression over the circuit size n, bound loop variables and
// small constants. Immutable; copies share structure.
class IndexExpr {
 public:
  enum class Kind { SizeVar, LoopVar, IntConst, Add, Sub, Abs };

  IndexExpr() : IndexExpr(make(Kind::IntConst, 0, nullptr, nullptr)) {}

  static IndexExpr size_var() { return IndexExpr(make(Kind::SizeVar, 0, nullptr, nullptr)); }
  static IndexExpr loop_var(int index) { return IndexExpr(make(Kind::LoopVar, index, nullptr, nullptr)); }
  static IndexExpr int_const(long long value) { return IndexExpr(make(Kind::IntConst, value, nullptr, nullptr)); }
  static IndexExpr add(const IndexExpr& l, const IndexExpr& r) {
    return IndexExpr(make(Kind::Add, 0, l.node_, r.node_));
  }
  static IndexExpr sub(const IndexExpr& l, const IndexExpr& r) {
    return IndexExpr(make(Kind::Sub, 0, l.node_, r.node_));
  }
  static IndexExpr abs(const IndexExpr& operand) { return IndexExpr(make(Kind::Abs, 0, operand.node_, nullptr)); }

  Kind kind() const { return node_->kind; }
  long long value() const { return node_->value; }
  int var_index() const { return static_cast<int>(node_->value); }
  IndexExpr left() const { return IndexExpr(node_->a); }
  IndexExpr right() const { return IndexExpr(node_->b); }
  IndexExpr operand() const { return IndexExpr(node_->a); }

  int node_count() const { return count(node_.get()); }

  long long eval(long long n, std::span<const long long> loop_env) const { return eval(node_.get(), n, loop_env); }

  // Highest LoopVar index referenced, or -1 if none.
  int max_loop_var() const { return max_loop_var(node_.get()); }

  friend bool operator==(const IndexExpr& x, const IndexExpr& y) { return compare(x, y) == 0; }
  friend bool operator!=(const IndexExpr& x, const IndexExpr& y) { return compare(x, y) != 0; }

  // Total structural order; used for canonical term ordering.
  static int compare(const IndexExpr& x, const IndexExpr& y) { return compare(x.node_.get(), y.node_.get()); }

 private:
  struct Node {
    Kind kind;
    long long value;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
  };

  explicit IndexExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::shared_ptr<const Node> make(Kind kind, long long value, std::shared_ptr<const Node> a,
                                          std::shared_ptr<const Node> b) {
    return std::make_shared<const Node>(Node{kind, value, std::move(a), std::move(b)});
  }

  static int count(const Node* node) {
    switch (node->kind) {
      case Kind::SizeVar:
      case Kind::LoopVar:
      case Kind::IntConst:
        return 1;
      case Kind::Abs:
        return 1 + count(node->a.get());
      case Kind::Add:
      case Kind::Sub:
        return 1 + count(node->a.get()) + count(node->b.get());
    }
    return 0;
  }

  static long long eval(const Node* node, long long n, std::span<const long long> loop_env) {
    switch (node->kind) {
      case Kind::SizeVar:
        return n;
      case Kind::LoopVar: {
        auto idx = static_cast<std::size_t>(node->value);
        if (idx >= loop_env.size())
          throw EvalError(EvalError::Kind::UnboundLoopVar, "unbound loop variable i" + std::to_string(node->value));
        return loop_env[idx];
      }
      case Kind::IntConst:
        return node->value;
      case Kind::Add:
        return eval(node->a.get(), n, loop_env) + eval(node->b.get(), n, loop_env);
      case Kind::Sub:
        return eval(node->a.get(), n, loop_env) - eval(node->b.get(), n, loop_env);
      case Kind::Abs: {
        long long v = eval(node->a.get(), n, loop_env);
        return v < 0 ? -v : v;
      }
    }
    return 0;
  }

  static int max_loop_var(const Node* node) {
    switch (node->kind) {
      case Kind::LoopVar:
        return static_cast<int>(node->value);
      case Kind::SizeVar:
      case Kind::IntConst:
        return -1;
      case Kind::Abs:
        return max_loop_var(node->a.get());
      case Kind::Add:
      case Kind::Sub:
        return std::max(max_loop_var(node->a.get()), max_loop_var(node->b.get()));
    }
    return -1;
  }

  static int compare(const Node* x, const Node* y) {
    if (x == y) return 0;
    if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
    if (x->value != y->value) return x->value < y->value ? -1 : 1;
    if (x->a) {
      if (int c = compare(x->a.get(), y->a.get())) return c;
    }
    if (x->b) {
      if (int c = compare(x->b.get(), y->b.get())) return c;
    }
    return 0;
  }

  std::shared_ptr<const Node> node_;
};

// Phase of the form sign * pi / (2^a + b + c) with integer-valued a, b and a
// fixed integer shift c. 2^a is evaluated as a real power when a < 0.
struct AngleExpr {
  int sign = 1;
  IndexExpr exponent;  // a
  IndexExpr offset;    // b
  long long shift = 0; // c

  int node_count() const { return 1 + exponent.node_count() + offset.node_count() + 1; }

  friend bool operator==(const AngleExpr& x, const AngleExpr& y) {
    return x.sign == y.sign && x.exponent == y.exponent && x.offset == y.offset && x.shift == y.shift;
  }
};

inline long long eval_index(const IndexExpr& e, long long n, std::span<const long long> loop_env) {
  return e.eval(n, loop_env);
}

inline double eval_angle(const AngleExpr& ae, long long n, std::span<const long long> loop_env) {
  long long a = ae.exponent.eval(n, loop_env);
  long long b = ae.offset.eval(n, loop_env);
  if (a >= 63) throw EvalError(EvalError::Kind::ZeroDenominator, "2^" + std::to_string(a) + " exceeds integer range");
  double pow2 = a < -2000 ? 0.0 : std::ldexp(1.0, static_cast<int>(a));
  double den = pow2 + static_cast<double>(b) + static_cast<double>(ae.shift);
  if (den == 0.0) throw EvalError(EvalError::Kind::ZeroDenominator, "phase denominator is zero");
  double angle = static_cast<double>(ae.sign) * M_PI / den;
  if (!std::isfinite(angle)) throw EvalError(EvalError::Kind::ZeroDenominator, "phase denominator is degenerate");
  return angle;
}

}  // namespace qdeqomp
