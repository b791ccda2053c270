#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "qdeqomp/program.hpp"

namespace qdeqomp {

inline IndexExpr simplify(const IndexExpr& e);

namespace detail {

// +/- chains are linear combinations with unit coefficients of atoms
// (n, loop variables, abs subtrees) plus a folded constant.
struct LinearForm {
  long long constant = 0;
  std::vector<std::pair<IndexExpr, long long>> terms;

  void add(const IndexExpr& atom, long long coeff) {
    for (auto& [a, c] : terms) {
      if (a == atom) {
        c += coeff;
        return;
      }
    }
    terms.emplace_back(atom, coeff);
  }
};

inline void collect(const IndexExpr& e, long long sign, LinearForm& form) {
  switch (e.kind()) {
    case IndexExpr::Kind::IntConst:
      form.constant += sign * e.value();
      return;
    case IndexExpr::Kind::SizeVar:
    case IndexExpr::Kind::LoopVar:
      form.add(e, sign);
      return;
    case IndexExpr::Kind::Add:
      collect(e.left(), sign, form);
      collect(e.right(), sign, form);
      return;
    case IndexExpr::Kind::Sub:
      collect(e.left(), sign, form);
      collect(e.right(), -sign, form);
      return;
    case IndexExpr::Kind::Abs: {
      IndexExpr inner = simplify(e.operand());
      if (inner.kind() == IndexExpr::Kind::IntConst) {
        long long v = inner.value();
        form.constant += sign * (v < 0 ? -v : v);
        return;
      }
      // |x| == x when x is never negative (n >= 1, loop variables >= 0,
      // abs terms >= 0), and |x| == -x when x is never positive.
      LinearForm inner_form;
      collect(inner, 1, inner_form);
      bool all_nonneg = inner_form.constant >= 0;
      bool all_nonpos = inner_form.constant <= 0;
      for (const auto& [atom, coeff] : inner_form.terms) {
        (void)atom;
        if (coeff > 0) all_nonpos = false;
        if (coeff < 0) all_nonneg = false;
      }
      if (all_nonneg) {
        form.constant += sign * inner_form.constant;
        for (const auto& [atom, coeff] : inner_form.terms) form.add(atom, sign * coeff);
        return;
      }
      if (all_nonpos) {
        form.constant -= sign * inner_form.constant;
        for (const auto& [atom, coeff] : inner_form.terms) form.add(atom, -sign * coeff);
        return;
      }
      if (inner.kind() == IndexExpr::Kind::Abs) {
        form.add(inner, sign); // ||x|| == |x|
        return;
      }
      form.add(IndexExpr::abs(inner), sign);
      return;
    }
  }
}

inline IndexExpr emit(LinearForm form) {
  form.terms.erase(std::remove_if(form.terms.begin(), form.terms.end(),
                                  [](const auto& t) { return t.second == 0; }),
                   form.terms.end());
  std::sort(form.terms.begin(), form.terms.end(),
            [](const auto& x, const auto& y) { return IndexExpr::compare(x.first, y.first) < 0; });

  IndexExpr acc;
  bool have = false;
  auto append = [&](const IndexExpr& atom, bool positive) {
    if (!have) {
      acc = positive ? atom : IndexExpr::sub(IndexExpr::int_const(0), atom);
      have = true;
    } else {
      acc = positive ? IndexExpr::add(acc, atom) : IndexExpr::sub(acc, atom);
    }
  };
  bool any_positive = false;
  for (const auto& [atom, coeff] : form.terms) {
    (void)atom;
    if (coeff > 0) any_positive = true;
  }
  // A positive constant leads when every atom is subtracted, so "2 - i0"
  // stays three nodes instead of becoming "0 - i0 + 2".
  bool constant_leads = !any_positive && form.constant > 0 && !form.terms.empty();
  if (constant_leads) {
    acc = IndexExpr::int_const(form.constant);
    have = true;
  }
  for (const auto& [atom, coeff] : form.terms)
    for (long long k = 0; k < coeff; ++k) append(atom, true);
  for (const auto& [atom, coeff] : form.terms)
    for (long long k = 0; k < -coeff; ++k) append(atom, false);
  if (!have) return IndexExpr::int_const(form.constant);
  if (!constant_leads) {
    if (form.constant > 0) acc = IndexExpr::add(acc, IndexExpr::int_const(form.constant));
    if (form.constant < 0) acc = IndexExpr::sub(acc, IndexExpr::int_const(-form.constant));
  }
  return acc;
}

}  // namespace detail

inline IndexExpr simplify(const IndexExpr& e) {
  detail::LinearForm form;
  detail::collect(e, 1, form);
  return detail::emit(std::move(form));
}

inline AngleExpr simplify(const AngleExpr& a) {
  return AngleExpr{a.sign, simplify(a.exponent), simplify(a.offset), a.shift};
}

inline Statement simplify(const Statement& s) {
  Statement out = s;
  if (s.is_gate()) {
    for (auto& q : out.qubits) q = simplify(q);
    for (auto& a : out.angles) a = simplify(a);
  } else {
    out.range = simplify(s.range);
    for (auto& child : out.body) child = simplify(child);
  }
  return out;
}

inline GenProgram simplify(const GenProgram& p) {
  GenProgram out = p;
  for (auto& s : out.body) s = simplify(s);
  return out;
}

}  // namespace qdeqomp
