#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ecml/error.hpp"

namespace ecml {

using BigInt = boost::multiprecision::cpp_int;

// Variables of the side condition φ.
enum class VarKind {
  Card,         // |X_i|, |Y_j|, |FX_i|, |FY_j|
  Components,   // cc(...) of the same
  NumVertices,  // |V|
  NumEdges,     // |E|
  Param,
};

enum class SetKind { QuantVertex, QuantEdge, FixedVertex, FixedEdge };

struct Var {
  VarKind kind = VarKind::Param;
  SetKind set = SetKind::QuantVertex;  // Card / Components only
  int index = 0;                       // set or parameter index
  friend auto operator<=>(const Var&, const Var&) = default;

  bool quantified_cc() const {
    return kind == VarKind::Components && (set == SetKind::QuantVertex || set == SetKind::QuantEdge);
  }
};

enum class ArithOp { Lit, Var, Add, Sub, Mul, Neg, Eq, Ne, Le, Lt, Ge, Gt, And, Or, Not };

struct ArithNode;
using ArithExpr = std::shared_ptr<const ArithNode>;

struct ArithNode {
  ArithOp op;
  BigInt literal;
  ecml::Var var;
  std::vector<ArithExpr> kids;
};

namespace arith {

inline ArithExpr node(ArithOp op, std::vector<ArithExpr> kids) {
  return std::make_shared<const ArithNode>(ArithNode{op, 0, {}, std::move(kids)});
}
inline ArithExpr lit(BigInt v) { return std::make_shared<const ArithNode>(ArithNode{ArithOp::Lit, std::move(v), {}, {}}); }
inline ArithExpr var(Var v) { return std::make_shared<const ArithNode>(ArithNode{ArithOp::Var, 0, v, {}}); }
inline ArithExpr truth() { return node(ArithOp::Le, {lit(0), lit(0)}); }
inline ArithExpr both(ArithExpr a, ArithExpr b) { return node(ArithOp::And, {std::move(a), std::move(b)}); }

inline bool is_boolean(ArithOp op) { return op >= ArithOp::Eq; }

}  // namespace arith

using ArithEnv = std::map<Var, BigInt>;

namespace detail {

template <class Lookup>
BigInt eval_term(const ArithExpr& e, const Lookup& lookup) {
  switch (e->op) {
    case ArithOp::Lit: return e->literal;
    case ArithOp::Var: return lookup(e->var);
    case ArithOp::Add: return eval_term(e->kids[0], lookup) + eval_term(e->kids[1], lookup);
    case ArithOp::Sub: return eval_term(e->kids[0], lookup) - eval_term(e->kids[1], lookup);
    case ArithOp::Mul: return eval_term(e->kids[0], lookup) * eval_term(e->kids[1], lookup);
    case ArithOp::Neg: return -eval_term(e->kids[0], lookup);
    default: throw Error("boolean expression used as a term");
  }
}

template <class Lookup>
bool eval_bool(const ArithExpr& e, const Lookup& lookup) {
  auto cmp = [&](auto pred) { return pred(eval_term(e->kids[0], lookup), eval_term(e->kids[1], lookup)); };
  switch (e->op) {
    case ArithOp::Eq: return cmp([](const BigInt& a, const BigInt& b) { return a == b; });
    case ArithOp::Ne: return cmp([](const BigInt& a, const BigInt& b) { return a != b; });
    case ArithOp::Le: return cmp([](const BigInt& a, const BigInt& b) { return a <= b; });
    case ArithOp::Lt: return cmp([](const BigInt& a, const BigInt& b) { return a < b; });
    case ArithOp::Ge: return cmp([](const BigInt& a, const BigInt& b) { return a >= b; });
    case ArithOp::Gt: return cmp([](const BigInt& a, const BigInt& b) { return a > b; });
    case ArithOp::And: return eval_bool(e->kids[0], lookup) && eval_bool(e->kids[1], lookup);
    case ArithOp::Or: return eval_bool(e->kids[0], lookup) || eval_bool(e->kids[1], lookup);
    case ArithOp::Not: return !eval_bool(e->kids[0], lookup);
    default: throw Error("term used as a boolean expression");
  }
}

}  // namespace detail

inline bool eval_arith(const ArithExpr& phi, const ArithEnv& env) {
  return detail::eval_bool(phi, [&](const Var& v) -> BigInt {
    auto it = env.find(v);
    if (it == env.end()) throw Error("unbound variable in arithmetic constraint");
    return it->second;
  });
}

inline void collect_vars(const ArithExpr& e, std::vector<Var>& out) {
  if (e->op == ArithOp::Var && std::find(out.begin(), out.end(), e->var) == out.end()) out.push_back(e->var);
  for (const auto& k : e->kids) collect_vars(k, out);
}

inline bool mentions_quantified_cc(const ArithExpr& e) {
  if (e->op == ArithOp::Var) return e->var.quantified_cc();
  for (const auto& k : e->kids)
    if (mentions_quantified_cc(k)) return true;
  return false;
}

namespace detail {

// cc(Q) of quantified sets may only occur as plain summands (never subtracted,
// negated, or multiplied) of the smaller side of ≤ / <.
inline bool cc_positive_sum(const ArithExpr& e) {
  switch (e->op) {
    case ArithOp::Lit:
    case ArithOp::Var: return true;
    case ArithOp::Add: return cc_positive_sum(e->kids[0]) && cc_positive_sum(e->kids[1]);
    default: return !mentions_quantified_cc(e);
  }
}

inline void check_monotone(const ArithExpr& e) {
  switch (e->op) {
    case ArithOp::And:
    case ArithOp::Or:
      check_monotone(e->kids[0]);
      check_monotone(e->kids[1]);
      return;
    case ArithOp::Le:
    case ArithOp::Lt:
    case ArithOp::Ge:
    case ArithOp::Gt: {
      bool le = e->op == ArithOp::Le || e->op == ArithOp::Lt;
      const auto& small = e->kids[le ? 0 : 1];
      const auto& large = e->kids[le ? 1 : 0];
      if (mentions_quantified_cc(large) || !cc_positive_sum(small))
        throw SpecError("cc of a quantified set must appear as a summand on the smaller side of <= or <");
      return;
    }
    default:
      if (mentions_quantified_cc(e))
        throw SpecError("cc of a quantified set may only appear in upper-bound atoms joined by and/or");
  }
}

}  // namespace detail

// Throws SpecError unless φ is syntactically monotone (non-increasing) in every quantified cc variable.
inline void check_monotone_cc(const ArithExpr& phi) { detail::check_monotone(phi); }

}  // namespace ecml
