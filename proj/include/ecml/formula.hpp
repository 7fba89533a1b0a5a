#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ecml/error.hpp"
#include "ecml/graph.hpp"
#include "ecml/recognizable_set.hpp"

namespace ecml {

// Reference to a quantified (X̄ / Ȳ) or fixed (FX̄ / FȲ) set by declaration index.
struct SetRef {
  bool fixed = false;
  int index = 0;
  friend bool operator==(const SetRef&, const SetRef&) = default;
};

enum class FormulaOp { Not, And, Or, Implies, Iff, VertexSet, EdgeSet, ArcDown, ArcUp, Diamond, Box };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  FormulaOp op;
  SetRef set;                   // VertexSet / EdgeSet
  UPSet count;                  // Diamond / Box
  std::vector<Formula> kids;
};

inline Formula make_formula(FormulaOp op, std::vector<Formula> kids = {}, SetRef set = {}, UPSet count = {}) {
  return std::make_shared<const FormulaNode>(FormulaNode{op, set, std::move(count), std::move(kids)});
}

namespace cml {

inline const UPSet& positive() {
  static const UPSet s = upset_parse(">=1");
  return s;
}

inline Formula vertex_set(int i, bool fixed = false) { return make_formula(FormulaOp::VertexSet, {}, {fixed, i}); }
inline Formula edge_set(int j, bool fixed = false) { return make_formula(FormulaOp::EdgeSet, {}, {fixed, j}); }
inline Formula down() { return make_formula(FormulaOp::ArcDown); }
inline Formula up() { return make_formula(FormulaOp::ArcUp); }
inline Formula lnot(Formula a) { return make_formula(FormulaOp::Not, {std::move(a)}); }
inline Formula land(Formula a, Formula b) { return make_formula(FormulaOp::And, {std::move(a), std::move(b)}); }
inline Formula lor(Formula a, Formula b) { return make_formula(FormulaOp::Or, {std::move(a), std::move(b)}); }
inline Formula implies(Formula a, Formula b) { return make_formula(FormulaOp::Implies, {std::move(a), std::move(b)}); }
inline Formula iff(Formula a, Formula b) { return make_formula(FormulaOp::Iff, {std::move(a), std::move(b)}); }
inline Formula diamond(UPSet s, Formula body) { return make_formula(FormulaOp::Diamond, {std::move(body)}, {}, std::move(s)); }
inline Formula box(UPSet s, Formula body) { return make_formula(FormulaOp::Box, {std::move(body)}, {}, std::move(s)); }
inline Formula diamond(Formula body) { return diamond(positive(), std::move(body)); }
inline Formula box(Formula body) { return box(positive(), std::move(body)); }

}  // namespace cml

inline bool formula_equal(const Formula& a, const Formula& b) {
  if (a->op != b->op || a->kids.size() != b->kids.size()) return false;
  if ((a->op == FormulaOp::VertexSet || a->op == FormulaOp::EdgeSet) && !(a->set == b->set)) return false;
  if ((a->op == FormulaOp::Diamond || a->op == FormulaOp::Box) && !(a->count == b->count)) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!formula_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

inline bool is_modal(const Formula& f) { return f->op == FormulaOp::Diamond || f->op == FormulaOp::Box; }

// Maximum nesting of Diamond/Box.
inline int modal_depth(const Formula& f) {
  int d = 0;
  for (const auto& k : f->kids) d = std::max(d, modal_depth(k));
  return d + (is_modal(f) ? 1 : 0);
}

inline int count_ops(const Formula& f, FormulaOp op) {
  int c = f->op == op;
  for (const auto& k : f->kids) c += count_ops(k, op);
  return c;
}

// □^S b  ↦  ¬◇^S ¬b, applied bottom-up.
inline Formula eliminate_boxes(const Formula& f) {
  std::vector<Formula> kids;
  kids.reserve(f->kids.size());
  for (const auto& k : f->kids) kids.push_back(eliminate_boxes(k));
  if (f->op == FormulaOp::Box) return cml::lnot(cml::diamond(f->count, cml::lnot(kids[0])));
  return make_formula(f->op, std::move(kids), f->set, f->count);
}

// Values of the quantified sets X̄, Ȳ.
struct Assignment {
  std::vector<VertexSet> vertex_sets;
  std::vector<EdgeSet> edge_sets;
};

// Reference semantics. ◇^S b holds at v iff the number of incident edges e = vw
// with b true at w (accessed via e) lies in S.
inline bool eval_cml(const Instance& inst, const Assignment& a, VertexId v, const Formula& f,
                     std::optional<EdgeId> via = std::nullopt) {
  const Graph& g = inst.graph;
  auto need_via = [&](const char* what) {
    if (!via) throw Error(std::string(what) + " evaluated without an access edge");
    return *via;
  };
  switch (f->op) {
    case FormulaOp::Not: return !eval_cml(inst, a, v, f->kids[0], via);
    case FormulaOp::And: return eval_cml(inst, a, v, f->kids[0], via) && eval_cml(inst, a, v, f->kids[1], via);
    case FormulaOp::Or: return eval_cml(inst, a, v, f->kids[0], via) || eval_cml(inst, a, v, f->kids[1], via);
    case FormulaOp::Implies: return !eval_cml(inst, a, v, f->kids[0], via) || eval_cml(inst, a, v, f->kids[1], via);
    case FormulaOp::Iff: return eval_cml(inst, a, v, f->kids[0], via) == eval_cml(inst, a, v, f->kids[1], via);
    case FormulaOp::VertexSet:
      return f->set.fixed ? inst.fixed_vertex_sets.at(f->set.index).contains(v)
                          : a.vertex_sets.at(f->set.index).contains(v);
    case FormulaOp::EdgeSet: {
      EdgeId e = need_via("edge-set operator");
      return f->set.fixed ? inst.fixed_edge_sets.at(f->set.index).contains(e) : a.edge_sets.at(f->set.index).contains(e);
    }
    case FormulaOp::ArcDown:
    case FormulaOp::ArcUp: {
      EdgeId e = need_via("arc operator");
      if (!g.directed()) throw Error("arc operator on an undirected graph");
      bool toward_current = g.edge(e).v == v;
      return f->op == FormulaOp::ArcDown ? toward_current : !toward_current;
    }
    case FormulaOp::Diamond:
    case FormulaOp::Box: {
      // □^S b  ≡  ¬◇^S ¬b
      bool box = f->op == FormulaOp::Box;
      std::int64_t hits = 0;
      for (auto [e, w] : g.incident(v)) hits += eval_cml(inst, a, w, f->kids[0], e) != box;
      return f->count.contains(hits) != box;
    }
  }
  return false;
}

}  // namespace ecml
