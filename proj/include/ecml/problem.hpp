#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ecml/arith.hpp"
#include "ecml/error.hpp"
#include "ecml/formula.hpp"
#include "ecml/graph.hpp"

namespace ecml {

// ∃X̄ ∃Ȳ [φ ∧ ∀v ψ] together with its fixed sets and parameters.
struct ProblemSpec {
  std::string name;
  bool directed = false;
  std::vector<std::string> params;
  std::vector<std::string> fixed_vertex_sets;
  std::vector<std::string> fixed_edge_sets;
  std::vector<std::string> vertex_sets;  // X̄
  std::vector<std::string> edge_sets;    // Ȳ
  std::vector<ArithExpr> requires_;      // φ is their conjunction
  Formula matrix;                        // ψ
  std::vector<bool> vertex_cc;           // cc(X_i) occurs in φ
  std::vector<bool> edge_cc;             // cc(Y_j) occurs in φ

  int p0() const { return static_cast<int>(fixed_vertex_sets.size()); }
  int q0() const { return static_cast<int>(fixed_edge_sets.size()); }
  int p1() const { return static_cast<int>(vertex_sets.size()); }
  int q1() const { return static_cast<int>(edge_sets.size()); }

  ArithExpr constraint() const {
    if (requires_.empty()) return arith::truth();
    ArithExpr phi = requires_.front();
    for (std::size_t i = 1; i < requires_.size(); ++i) phi = arith::both(phi, requires_[i]);
    return phi;
  }

  bool has_connectivity() const {
    return std::count(vertex_cc.begin(), vertex_cc.end(), true) + std::count(edge_cc.begin(), edge_cc.end(), true) > 0;
  }
};

namespace detail {

enum class Tok { Ident, Int, Sym, String, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
};

inline std::vector<Token> lex(const std::string& src, int first_line) {
  static const std::vector<std::string> symbols = {"<->", "->", "<=", ">=", "==", "!=", "<", ">", "=", "+", "-",
                                                   "*",   "(",  ")",  "|",  "&",  "!",  ",", "[", "]", "{", "}", ";"};
  std::vector<Token> out;
  int line = first_line;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line, ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), line});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, src.substr(i, j - i), line});
      i = j;
      continue;
    }
    if (c == '"') {
      std::size_t j = src.find('"', i + 1);
      if (j == std::string::npos) throw ParseError(line, "unterminated string");
      out.push_back({Tok::String, src.substr(i + 1, j - i - 1), line});
      i = j + 1;
      continue;
    }
    bool matched = false;
    for (const auto& s : symbols) {
      if (src.compare(i, s.size(), s) == 0) {
        out.push_back({Tok::Sym, s, line});
        i += s.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(line, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line});
  return out;
}

inline const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {"V",   "E",      "cc",     "and",  "or",     "not",
                                              "up",  "down",   "diamond", "box", "problem", "param",
                                              "fixed", "exists", "require", "formula", "directed", "vertexset",
                                              "edgeset"};
  return words;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}
  const Token& peek(int ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is(const std::string& sym) const { return peek().kind != Tok::String && peek().text == sym; }
  bool accept(const std::string& sym) {
    if (!is(sym)) return false;
    next();
    return true;
  }
  void expect(const std::string& sym) {
    if (!accept(sym)) fail("expected '" + sym + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.line, msg + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"));
  }
  std::size_t mark() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }
  bool done() const { return peek().kind == Tok::End; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

class SpecParser {
 public:
  explicit SpecParser(ProblemSpec& spec) : spec_(spec) {}

  void declare(const std::string& name, int line) {
    if (reserved_words().count(name)) throw ParseError(line, "'" + name + "' is a reserved word");
    if (!names_.insert(name).second) throw ParseError(line, "duplicate identifier '" + name + "'");
  }

  // ---- arithmetic ----

  ArithExpr arith_bool(Cursor& c) {
    ArithExpr lhs = arith_and(c);
    while (c.accept("or")) lhs = arith::node(ArithOp::Or, {lhs, arith_and(c)});
    return lhs;
  }

  ArithExpr arith_and(Cursor& c) {
    ArithExpr lhs = arith_not(c);
    while (c.accept("and")) lhs = arith::node(ArithOp::And, {lhs, arith_not(c)});
    return lhs;
  }

  ArithExpr arith_not(Cursor& c) {
    if (c.accept("not")) return arith::node(ArithOp::Not, {arith_not(c)});
    if (c.is("(")) {
      // "(" may open a boolean group or a term; try the group first.
      auto save = c.mark();
      try {
        c.next();
        ArithExpr inner = arith_bool(c);
        c.expect(")");
        if (!is_term_continuation(c)) return inner;
      } catch (const ParseError&) {
      }
      c.reset(save);
    }
    return comparison(c);
  }

  static bool is_term_continuation(const Cursor& c) {
    for (const char* s : {"+", "-", "*", "<=", ">=", "==", "!=", "<", ">", "="})
      if (c.is(s)) return true;
    return false;
  }

  ArithExpr comparison(Cursor& c) {
    ArithExpr lhs = term(c);
    static const std::vector<std::pair<std::string, ArithOp>> ops = {
        {"<=", ArithOp::Le}, {">=", ArithOp::Ge}, {"==", ArithOp::Eq}, {"!=", ArithOp::Ne},
        {"<", ArithOp::Lt},  {">", ArithOp::Gt},  {"=", ArithOp::Eq}};
    for (const auto& [sym, op] : ops)
      if (c.accept(sym)) return arith::node(op, {lhs, term(c)});
    c.fail("expected a comparison");
  }

  ArithExpr term(Cursor& c) {
    ArithExpr lhs = product(c);
    for (;;) {
      if (c.accept("+"))
        lhs = arith::node(ArithOp::Add, {lhs, product(c)});
      else if (c.accept("-"))
        lhs = arith::node(ArithOp::Sub, {lhs, product(c)});
      else
        return lhs;
    }
  }

  ArithExpr product(Cursor& c) {
    ArithExpr lhs = unary(c);
    while (c.accept("*")) lhs = arith::node(ArithOp::Mul, {lhs, unary(c)});
    return lhs;
  }

  ArithExpr unary(Cursor& c) {
    if (c.accept("-")) return arith::node(ArithOp::Neg, {unary(c)});
    const Token& t = c.peek();
    if (t.kind == Tok::Int) {
      c.next();
      return arith::lit(BigInt(t.text));
    }
    if (c.accept("(")) {
      ArithExpr inner = term(c);
      c.expect(")");
      return inner;
    }
    if (c.accept("|")) {
      const Token& id = c.next();
      if (id.kind != Tok::Ident) c.fail("expected a set name inside |...|");
      c.expect("|");
      if (id.text == "V") return arith::var({VarKind::NumVertices, SetKind::QuantVertex, 0});
      if (id.text == "E") return arith::var({VarKind::NumEdges, SetKind::QuantVertex, 0});
      return arith::var(set_var(VarKind::Card, id));
    }
    if (t.kind == Tok::Ident && t.text == "cc") {
      c.next();
      c.expect("(");
      const Token& id = c.next();
      if (id.kind != Tok::Ident) c.fail("expected a set name inside cc(...)");
      c.expect(")");
      return arith::var(set_var(VarKind::Components, id));
    }
    if (t.kind == Tok::Ident) {
      c.next();
      auto it = std::find(spec_.params.begin(), spec_.params.end(), t.text);
      if (it == spec_.params.end()) throw SpecError("line " + std::to_string(t.line) + ": unknown parameter '" + t.text + "'");
      return arith::var({VarKind::Param, SetKind::QuantVertex, static_cast<int>(it - spec_.params.begin())});
    }
    c.fail("expected an arithmetic term");
  }

  Var set_var(VarKind kind, const Token& id) {
    auto find = [&](const std::vector<std::string>& names, SetKind sk) -> std::optional<Var> {
      auto it = std::find(names.begin(), names.end(), id.text);
      if (it == names.end()) return std::nullopt;
      return Var{kind, sk, static_cast<int>(it - names.begin())};
    };
    for (auto [names, sk] : {std::pair{&spec_.vertex_sets, SetKind::QuantVertex}, {&spec_.edge_sets, SetKind::QuantEdge},
                             {&spec_.fixed_vertex_sets, SetKind::FixedVertex}, {&spec_.fixed_edge_sets, SetKind::FixedEdge}})
      if (auto v = find(*names, sk)) return *v;
    throw SpecError("line " + std::to_string(id.line) + ": unknown set '" + id.text + "'");
  }

  // ---- formula ----

  Formula formula(Cursor& c) {
    Formula lhs = implication(c);
    while (c.accept("<->")) lhs = cml::iff(lhs, implication(c));
    return lhs;
  }

  Formula implication(Cursor& c) {
    Formula lhs = disjunction(c);
    if (c.accept("->")) return cml::implies(lhs, implication(c));
    return lhs;
  }

  Formula disjunction(Cursor& c) {
    Formula lhs = conjunction(c);
    while (c.accept("|")) lhs = cml::lor(lhs, conjunction(c));
    return lhs;
  }

  Formula conjunction(Cursor& c) {
    Formula lhs = negation(c);
    while (c.accept("&")) lhs = cml::land(lhs, negation(c));
    return lhs;
  }

  Formula negation(Cursor& c) {
    if (c.accept("!")) return cml::lnot(negation(c));
    if (c.accept("(")) {
      Formula inner = formula(c);
      c.expect(")");
      return inner;
    }
    const Token& t = c.next();
    if (t.kind != Tok::Ident) {
      c.reset(c.mark() - 1);
      c.fail("expected a formula");
    }
    if (t.text == "diamond" || t.text == "box") {
      UPSet count = cml::positive();
      if (c.accept("[")) {
        std::string raw;
        while (!c.is("]")) {
          if (c.done()) c.fail("unterminated '['");
          raw += c.next().text;
        }
        c.next();
        try {
          count = upset_parse(raw);
        } catch (const ParseError& e) {
          throw ParseError(t.line, e.what());
        }
      }
      c.expect("(");
      ++depth_;
      Formula body = formula(c);
      --depth_;
      c.expect(")");
      return t.text == "diamond" ? cml::diamond(count, body) : cml::box(count, body);
    }
    if (t.text == "up" || t.text == "down") {
      if (!spec_.directed) throw SpecError("line " + std::to_string(t.line) + ": '" + t.text + "' needs a directed problem");
      if (depth_ == 0) throw SpecError("line " + std::to_string(t.line) + ": edge operator outside any diamond/box");
      return t.text == "up" ? cml::up() : cml::down();
    }
    auto index_in = [&](const std::vector<std::string>& names) {
      return static_cast<int>(std::find(names.begin(), names.end(), t.text) - names.begin());
    };
    if (int i = index_in(spec_.vertex_sets); i < spec_.p1()) return cml::vertex_set(i);
    if (int i = index_in(spec_.fixed_vertex_sets); i < spec_.p0()) return cml::vertex_set(i, true);
    bool quantified = index_in(spec_.edge_sets) < spec_.q1();
    bool fixed = index_in(spec_.fixed_edge_sets) < spec_.q0();
    if (quantified || fixed) {
      if (depth_ == 0)
        throw SpecError("line " + std::to_string(t.line) + ": edge set '" + t.text + "' used outside any diamond/box");
      return quantified ? cml::edge_set(index_in(spec_.edge_sets)) : cml::edge_set(index_in(spec_.fixed_edge_sets), true);
    }
    throw SpecError("line " + std::to_string(t.line) + ": unknown identifier '" + t.text + "'");
  }

 private:
  ProblemSpec& spec_;
  std::set<std::string> names_;
  int depth_ = 0;
};

inline void finish_spec(ProblemSpec& spec) {
  spec.vertex_cc.assign(spec.p1(), false);
  spec.edge_cc.assign(spec.q1(), false);
  for (const auto& r : spec.requires_) {
    check_monotone_cc(r);
    std::vector<Var> vars;
    collect_vars(r, vars);
    for (const auto& v : vars) {
      if (!v.quantified_cc()) continue;
      (v.set == SetKind::QuantVertex ? spec.vertex_cc : spec.edge_cc)[v.index] = true;
    }
  }
}

}  // namespace detail

// DSL: header lines (problem, directed, param, fixed, exists, require), then
// "formula:" followed by ψ up to the end of the text.
inline ProblemSpec parse_problem(const std::string& text) {
  ProblemSpec spec;
  detail::SpecParser parser(spec);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_name = false;
  std::vector<std::pair<std::string, int>> pending_requires;
  std::optional<std::pair<std::string, int>> formula_text;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    auto first = body.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    body = body.substr(first);
    if (body.rfind("formula:", 0) == 0) {
      std::string rest = body.substr(8) + "\n";
      for (std::string more; std::getline(in, more);) rest += more + "\n";
      formula_text = {rest, lineno};
      break;
    }
    auto words = detail::split_ws(body);
    const std::string& kw = words[0];
    if (kw == "problem") {
      auto q1 = body.find('"'), q2 = body.rfind('"');
      if (have_name || q1 == std::string::npos || q2 == q1) throw ParseError(lineno, "expected problem \"name\"");
      spec.name = body.substr(q1 + 1, q2 - q1 - 1);
      have_name = true;
    } else if (kw == "directed") {
      if (words.size() != 1) throw ParseError(lineno, "'directed' takes no arguments");
      spec.directed = true;
    } else if (kw == "param" || kw == "fixed" || kw == "exists") {
      std::size_t at = 1;
      std::vector<std::string>* target = &spec.params;
      if (kw != "param") {
        if (words.size() < 2 || (words[1] != "vertexset" && words[1] != "edgeset"))
          throw ParseError(lineno, "expected 'vertexset' or 'edgeset' after '" + kw + "'");
        bool vertex = words[1] == "vertexset";
        target = kw == "fixed" ? (vertex ? &spec.fixed_vertex_sets : &spec.fixed_edge_sets)
                               : (vertex ? &spec.vertex_sets : &spec.edge_sets);
        at = 2;
      }
      if (at >= words.size()) throw ParseError(lineno, "missing name");
      for (; at < words.size(); ++at) {
        std::string name = words[at];
        if (!name.empty() && name.back() == ',') name.pop_back();
        bool ok = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') &&
                  std::all_of(name.begin(), name.end(), [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
        if (!ok) throw ParseError(lineno, "bad identifier '" + name + "'");
        parser.declare(name, lineno);
        target->push_back(name);
      }
    } else if (kw == "require") {
      pending_requires.push_back({body.substr(7), lineno});
    } else {
      throw ParseError(lineno, "unknown declaration '" + kw + "'");
    }
  }
  if (!have_name) throw ParseError(0, "missing problem \"name\" line");
  if (!formula_text) throw ParseError(0, "missing 'formula:' section");
  for (const auto& [src, ln] : pending_requires) {
    detail::Cursor c(detail::lex(src, ln));
    ArithExpr e = parser.arith_bool(c);
    if (!c.done()) c.fail("unexpected trailing input");
    spec.requires_.push_back(e);
  }
  detail::Cursor c(detail::lex(formula_text->first, formula_text->second));
  if (c.done()) c.fail("empty formula");
  spec.matrix = parser.formula(c);
  if (!c.done()) c.fail("unexpected trailing input");
  detail::finish_spec(spec);
  return spec;
}

// ---- printing ----

namespace detail {

inline std::string set_name(const ProblemSpec& spec, const Var& v) {
  switch (v.set) {
    case SetKind::QuantVertex: return spec.vertex_sets.at(v.index);
    case SetKind::QuantEdge: return spec.edge_sets.at(v.index);
    case SetKind::FixedVertex: return spec.fixed_vertex_sets.at(v.index);
    case SetKind::FixedEdge: return spec.fixed_edge_sets.at(v.index);
  }
  return "?";
}

inline int arith_prec(ArithOp op) {
  switch (op) {
    case ArithOp::Or: return 1;
    case ArithOp::And: return 2;
    case ArithOp::Not: return 3;
    case ArithOp::Eq:
    case ArithOp::Ne:
    case ArithOp::Le:
    case ArithOp::Lt:
    case ArithOp::Ge:
    case ArithOp::Gt: return 4;
    case ArithOp::Add:
    case ArithOp::Sub: return 5;
    case ArithOp::Mul: return 6;
    case ArithOp::Neg: return 7;
    default: return 8;
  }
}

inline std::string print_arith(const ProblemSpec& spec, const ArithExpr& e) {
  auto wrap = [&](const ArithExpr& k, bool strict_child) {
    std::string s = print_arith(spec, k);
    int pk = arith_prec(k->op), pe = arith_prec(e->op);
    bool paren = pk < pe || (strict_child && pk == pe && pk < 8);
    return paren ? "(" + s + ")" : s;
  };
  switch (e->op) {
    case ArithOp::Lit: return e->literal.str();
    case ArithOp::Var:
      switch (e->var.kind) {
        case VarKind::Card: return "|" + set_name(spec, e->var) + "|";
        case VarKind::Components: return "cc(" + set_name(spec, e->var) + ")";
        case VarKind::NumVertices: return "|V|";
        case VarKind::NumEdges: return "|E|";
        case VarKind::Param: return spec.params.at(e->var.index);
      }
      return "?";
    case ArithOp::Neg: return "-" + wrap(e->kids[0], true);
    case ArithOp::Not: return "not " + wrap(e->kids[0], false);
    default: break;
  }
  static const std::map<ArithOp, std::string> sym = {
      {ArithOp::Add, " + "}, {ArithOp::Sub, " - "}, {ArithOp::Mul, " * "}, {ArithOp::Eq, " = "},
      {ArithOp::Ne, " != "}, {ArithOp::Le, " <= "}, {ArithOp::Lt, " < "},  {ArithOp::Ge, " >= "},
      {ArithOp::Gt, " > "},  {ArithOp::And, " and "}, {ArithOp::Or, " or "}};
  bool comparison = arith_prec(e->op) == 4;
  return wrap(e->kids[0], comparison) + sym.at(e->op) + wrap(e->kids[1], true);
}

inline std::string print_formula(const ProblemSpec& spec, const Formula& f) {
  auto wrap = [&](const Formula& k) {
    bool atomic = k->op == FormulaOp::Not || k->op == FormulaOp::VertexSet || k->op == FormulaOp::EdgeSet ||
                  k->op == FormulaOp::ArcDown || k->op == FormulaOp::ArcUp || is_modal(k);
    std::string s = print_formula(spec, k);
    return atomic ? s : "(" + s + ")";
  };
  switch (f->op) {
    case FormulaOp::Not: return "!" + wrap(f->kids[0]);
    case FormulaOp::And: return wrap(f->kids[0]) + " & " + wrap(f->kids[1]);
    case FormulaOp::Or: return wrap(f->kids[0]) + " | " + wrap(f->kids[1]);
    case FormulaOp::Implies: return wrap(f->kids[0]) + " -> " + wrap(f->kids[1]);
    case FormulaOp::Iff: return wrap(f->kids[0]) + " <-> " + wrap(f->kids[1]);
    case FormulaOp::VertexSet: return f->set.fixed ? spec.fixed_vertex_sets.at(f->set.index) : spec.vertex_sets.at(f->set.index);
    case FormulaOp::EdgeSet: return f->set.fixed ? spec.fixed_edge_sets.at(f->set.index) : spec.edge_sets.at(f->set.index);
    case FormulaOp::ArcDown: return "down";
    case FormulaOp::ArcUp: return "up";
    case FormulaOp::Diamond:
    case FormulaOp::Box: {
      std::string out = f->op == FormulaOp::Diamond ? "diamond" : "box";
      if (!(f->count == cml::positive())) out += "[" + to_string(f->count) + "]";
      return out + "(" + print_formula(spec, f->kids[0]) + ")";
    }
  }
  return "?";
}

inline std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : " ") + n;
  return out;
}

}  // namespace detail

inline std::string to_dsl(const ProblemSpec& spec) {
  std::ostringstream out;
  out << "problem \"" << spec.name << "\"\n";
  if (spec.directed) out << "directed\n";
  if (!spec.params.empty()) out << "param " << detail::join_names(spec.params) << "\n";
  if (!spec.fixed_vertex_sets.empty()) out << "fixed vertexset " << detail::join_names(spec.fixed_vertex_sets) << "\n";
  if (!spec.fixed_edge_sets.empty()) out << "fixed edgeset " << detail::join_names(spec.fixed_edge_sets) << "\n";
  if (!spec.vertex_sets.empty()) out << "exists vertexset " << detail::join_names(spec.vertex_sets) << "\n";
  if (!spec.edge_sets.empty()) out << "exists edgeset " << detail::join_names(spec.edge_sets) << "\n";
  for (const auto& r : spec.requires_) out << "require " << detail::print_arith(spec, r) << "\n";
  out << "formula: " << detail::print_formula(spec, spec.matrix) << "\n";
  return out.str();
}

inline bool arith_equal(const ArithExpr& a, const ArithExpr& b) {
  if (a->op != b->op || a->kids.size() != b->kids.size()) return false;
  if (a->op == ArithOp::Lit && a->literal != b->literal) return false;
  if (a->op == ArithOp::Var && !(a->var == b->var)) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!arith_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

inline bool spec_equal(const ProblemSpec& a, const ProblemSpec& b) {
  if (a.name != b.name || a.directed != b.directed || a.params != b.params ||
      a.fixed_vertex_sets != b.fixed_vertex_sets || a.fixed_edge_sets != b.fixed_edge_sets ||
      a.vertex_sets != b.vertex_sets || a.edge_sets != b.edge_sets || a.requires_.size() != b.requires_.size())
    return false;
  for (std::size_t i = 0; i < a.requires_.size(); ++i)
    if (!arith_equal(a.requires_[i], b.requires_[i])) return false;
  return formula_equal(a.matrix, b.matrix);
}

// ---- instance binding ----

namespace detail {

inline VertexId resolve_vertex(const Graph& g, const nlohmann::json& j) {
  if (j.is_number_integer()) {
    auto v = j.get<long long>();
    if (v < 0 || v >= g.num_vertices()) throw Error("vertex id " + std::to_string(v) + " out of range");
    return static_cast<VertexId>(v);
  }
  if (j.is_string()) {
    auto it = std::find(g.names.begin(), g.names.end(), j.get<std::string>());
    if (it == g.names.end()) throw Error("unknown vertex name '" + j.get<std::string>() + "'");
    return static_cast<VertexId>(it - g.names.begin());
  }
  throw Error("vertex must be an id or a name");
}

}  // namespace detail

// Bindings: {"params": {"k": 2}, "fixed": {"T": [0, 1], "F": [[0, 1], 3]}}.
// Edge members are edge ids or [u, v] endpoint pairs.
inline Instance bind_instance(const Graph& g, const ProblemSpec& spec, const nlohmann::json& bindings) {
  if (spec.directed && !g.directed()) throw SpecError("problem '" + spec.name + "' needs a directed graph");
  Instance inst;
  inst.graph = g;
  auto section = [&](const char* key) {
    if (!bindings.is_object() || !bindings.contains(key)) return nlohmann::json::object();
    if (!bindings[key].is_object()) throw Error(std::string("bindings '") + key + "' must be an object");
    return bindings[key];
  };
  auto params = section("params"), fixed = section("fixed");
  for (const auto& [key, _] : params.items())
    if (std::find(spec.params.begin(), spec.params.end(), key) == spec.params.end()) throw Error("unknown parameter '" + key + "'");
  for (const auto& [key, _] : fixed.items())
    if (std::find(spec.fixed_vertex_sets.begin(), spec.fixed_vertex_sets.end(), key) == spec.fixed_vertex_sets.end() &&
        std::find(spec.fixed_edge_sets.begin(), spec.fixed_edge_sets.end(), key) == spec.fixed_edge_sets.end())
      throw Error("unknown fixed set '" + key + "'");
  for (const auto& p : spec.params) {
    if (!params.contains(p) || !params[p].is_number_integer()) throw Error("parameter '" + p + "' needs an integer value");
    inst.params.push_back(params[p].get<std::int64_t>());
  }
  for (const auto& name : spec.fixed_vertex_sets) {
    if (!fixed.contains(name) || !fixed[name].is_array()) throw Error("fixed set '" + name + "' needs a list of vertices");
    VertexSet s = VertexSet::of(g.num_vertices());
    for (const auto& m : fixed[name]) s.bits[detail::resolve_vertex(g, m)] = true;
    inst.fixed_vertex_sets.push_back(std::move(s));
  }
  for (const auto& name : spec.fixed_edge_sets) {
    if (!fixed.contains(name) || !fixed[name].is_array()) throw Error("fixed set '" + name + "' needs a list of edges");
    EdgeSet s = EdgeSet::of(g.num_edges());
    for (const auto& m : fixed[name]) {
      if (m.is_number_integer()) {
        auto e = m.get<long long>();
        if (e < 0 || e >= g.num_edges()) throw Error("edge id " + std::to_string(e) + " out of range");
        s.bits[e] = true;
      } else if (m.is_array() && m.size() == 2) {
        auto e = g.find_edge(detail::resolve_vertex(g, m[0]), detail::resolve_vertex(g, m[1]));
        if (!e) throw Error("no edge " + m.dump());
        s.bits[*e] = true;
      } else {
        throw Error("edge must be an id or a [u, v] pair");
      }
    }
    inst.fixed_edge_sets.push_back(std::move(s));
  }
  return inst;
}

inline void check_instance(const Instance& inst, const ProblemSpec& spec) {
  const Graph& g = inst.graph;
  if (spec.directed && !g.directed()) throw SpecError("problem '" + spec.name + "' needs a directed graph");
  if (static_cast<int>(inst.params.size()) != static_cast<int>(spec.params.size()) ||
      static_cast<int>(inst.fixed_vertex_sets.size()) != spec.p0() || static_cast<int>(inst.fixed_edge_sets.size()) != spec.q0())
    throw Error("instance does not match the problem's fixed sets / parameters");
  for (const auto& s : inst.fixed_vertex_sets)
    if (static_cast<int>(s.bits.size()) != g.num_vertices()) throw Error("fixed vertex set has wrong length");
  for (const auto& s : inst.fixed_edge_sets)
    if (static_cast<int>(s.bits.size()) != g.num_edges()) throw Error("fixed edge set has wrong length");
}

// Values of every non-quantified variable: parameters, |V|, |E|, fixed-set sizes and components.
inline ArithEnv constant_env(const Instance& inst, const ProblemSpec& spec) {
  ArithEnv env;
  const Graph& g = inst.graph;
  env[{VarKind::NumVertices, SetKind::QuantVertex, 0}] = g.num_vertices();
  env[{VarKind::NumEdges, SetKind::QuantVertex, 0}] = g.num_edges();
  for (int i = 0; i < static_cast<int>(spec.params.size()); ++i) env[{VarKind::Param, SetKind::QuantVertex, i}] = inst.params[i];
  for (int i = 0; i < spec.p0(); ++i) {
    env[{VarKind::Card, SetKind::FixedVertex, i}] = inst.fixed_vertex_sets[i].size();
    env[{VarKind::Components, SetKind::FixedVertex, i}] = connected_components(g, inst.fixed_vertex_sets[i]);
  }
  for (int j = 0; j < spec.q0(); ++j) {
    env[{VarKind::Card, SetKind::FixedEdge, j}] = inst.fixed_edge_sets[j].size();
    env[{VarKind::Components, SetKind::FixedEdge, j}] = connected_components(g, inst.fixed_edge_sets[j]);
  }
  return env;
}

}  // namespace ecml
