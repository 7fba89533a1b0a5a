#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ecml/decomposition.hpp"
#include "ecml/error.hpp"
#include "ecml/formula.hpp"
#include "ecml/graph.hpp"
#include "ecml/problem.hpp"

namespace ecml::detail {

using U128 = unsigned __int128;

inline int bit_width_of(std::uint64_t max_value) {
  int b = 0;
  while (max_value >> b) ++b;
  return b;
}

// Box-free ψ flattened into an array, with its quantified subformulas ψ_1..ψ_l in post-order.
struct CompiledMatrix {
  struct Node {
    FormulaOp op = FormulaOp::Not;
    int a = -1, b = -1;
    SetRef set;
    int diamond = -1;
  };

  // Atom values at one vertex (and, below a quantifier, the access edge).
  struct Local {
    std::uint64_t x = 0, fx = 0, y = 0, fy = 0, truth = 0;
    bool toward = false;
  };

  std::vector<Node> nodes;
  int root = -1;
  std::vector<UPSet> sets;
  std::vector<int> body;
  std::vector<bool> top_level;

  int l() const { return static_cast<int>(sets.size()); }

  static CompiledMatrix compile(const Formula& psi) {
    CompiledMatrix cm;
    cm.root = cm.add(eliminate_boxes(psi), 0);
    return cm;
  }

  bool eval(int i, const Local& c) const {
    const Node& n = nodes[i];
    switch (n.op) {
      case FormulaOp::Not: return !eval(n.a, c);
      case FormulaOp::And: return eval(n.a, c) && eval(n.b, c);
      case FormulaOp::Or: return eval(n.a, c) || eval(n.b, c);
      case FormulaOp::Implies: return !eval(n.a, c) || eval(n.b, c);
      case FormulaOp::Iff: return eval(n.a, c) == eval(n.b, c);
      case FormulaOp::VertexSet: return ((n.set.fixed ? c.fx : c.x) >> n.set.index) & 1;
      case FormulaOp::EdgeSet: return ((n.set.fixed ? c.fy : c.y) >> n.set.index) & 1;
      case FormulaOp::ArcDown: return c.toward;
      case FormulaOp::ArcUp: return !c.toward;
      case FormulaOp::Diamond: return (c.truth >> n.diamond) & 1;
      case FormulaOp::Box: break;
    }
    throw Error("box left in a compiled formula");
  }

 private:
  int add(const Formula& f, int depth) {
    Node n;
    n.op = f->op;
    n.set = f->set;
    bool modal = f->op == FormulaOp::Diamond;
    if (!f->kids.empty()) n.a = add(f->kids[0], depth + (modal ? 1 : 0));
    if (f->kids.size() > 1) n.b = add(f->kids[1], depth);
    if (modal) {
      n.diamond = l();
      sets.push_back(f->count);
      body.push_back(n.a);
      top_level.push_back(depth == 0);
    }
    nodes.push_back(n);
    return static_cast<int>(nodes.size()) - 1;
  }
};

// Accumulator limits. nu / mu hold -1 for sets whose components are not tracked.
struct Bounds {
  std::vector<int> tau, sigma, nu, mu;
};

struct DpOptions {
  // Predictions of quantified subformulas not nested in another quantifier are
  // fixed from the history at forget time instead of being guessed.
  bool lazy_predictions = true;
  std::size_t max_entries = 40'000'000;
};

struct NodeStat {
  int node;
  NiceKind kind;
  int bag_size;
  std::size_t entries;
};

// Per-vertex information packed into `bits` bits:
// histories | predictions | X-alignment | Y-alignment (tracked edge sets only).
struct Layout {
  int l = 0;
  std::vector<int> carrier, hist_off, hist_bits, pred_off;
  std::vector<int> x_off, x_states, y_off;
  int bits = 0;
  std::uint64_t static_mask = 0;  // predictions and X-alignment

  std::uint64_t info_size() const {
    std::uint64_t s = 1;
    for (int c : carrier) s *= c;
    for (int p : pred_off) s *= p >= 0 ? 2 : 1;
    for (int x : x_states) s *= x;
    for (int y : y_off) s *= y >= 0 ? 3 : 1;
    return s;
  }

  static std::uint64_t field(std::uint64_t code, int off, int width) {
    return width == 0 ? 0 : (code >> off) & ((1ULL << width) - 1);
  }
  static std::uint64_t with_field(std::uint64_t code, int off, int width, std::uint64_t value) {
    if (width == 0) return code;
    std::uint64_t mask = ((1ULL << width) - 1) << off;
    return (code & ~mask) | (value << off);
  }

  int hist(std::uint64_t code, int i) const { return static_cast<int>(field(code, hist_off[i], hist_bits[i])); }
  int xval(std::uint64_t code, int i) const { return static_cast<int>(field(code, x_off[i], x_states[i] == 3 ? 2 : 1)); }
  int yval(std::uint64_t code, int j) const { return y_off[j] < 0 ? 0 : static_cast<int>(field(code, y_off[j], 2)); }

  std::uint64_t membership(std::uint64_t code) const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < x_off.size(); ++i) m |= static_cast<std::uint64_t>(xval(code, static_cast<int>(i)) != 0) << i;
    return m;
  }
  std::uint64_t predictions(std::uint64_t code) const {
    std::uint64_t t = 0;
    for (int i = 0; i < l; ++i)
      if (pred_off[i] >= 0) t |= ((code >> pred_off[i]) & 1) << i;
    return t;
  }
};

struct AccLayout {
  struct Field {
    int off, bits, bound;
  };
  std::vector<Field> fields;  // tau (p1), sigma (q1), then nu / mu for tracked sets
  std::vector<int> nu_field, mu_field;
  int p1 = 0, q1 = 0;

  static constexpr int kMaxFields = 32;
  using Values = std::array<int, kMaxFields>;

  Values unpack(std::uint64_t acc) const {
    Values v{};
    for (std::size_t f = 0; f < fields.size(); ++f) v[f] = static_cast<int>(Layout::field(acc, fields[f].off, fields[f].bits));
    return v;
  }
  std::uint64_t pack(const Values& v) const {
    std::uint64_t acc = 0;
    for (std::size_t f = 0; f < fields.size(); ++f)
      if (fields[f].bits) acc |= static_cast<std::uint64_t>(v[f]) << fields[f].off;
    return acc;
  }
  // acc with field f increased by `by`, or nullopt past the bound.
  std::optional<std::uint64_t> bump(std::uint64_t acc, int f, int by = 1) const {
    if (by == 0) return acc;
    const Field& fd = fields[f];
    std::uint64_t cur = Layout::field(acc, fd.off, fd.bits);
    if (static_cast<int>(cur) + by > fd.bound) return std::nullopt;
    return acc + (static_cast<std::uint64_t>(by) << fd.off);
  }
};

template <class V>
struct Entry {
  U128 bag;
  std::uint64_t acc;
  V val;
};

template <class V>
struct Weights {
  std::vector<std::vector<V>> vertex;  // [v][digits in base 3 over X̄]
  std::vector<std::vector<V>> edge;    // [e][digits in base 3 over Ȳ]
};

template <class V>
struct ValueOps {
  static V one() { return V::one(); }
  static bool is_zero(const V& v) { return v.is_zero(); }
};

template <>
struct ValueOps<BigInt> {
  static BigInt one() { return 1; }
  static bool is_zero(const BigInt& v) { return v.is_zero(); }
};

struct U128Hash {
  std::size_t operator()(U128 x) const {
    std::uint64_t lo = static_cast<std::uint64_t>(x), hi = static_cast<std::uint64_t>(x >> 64);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6) + (lo >> 2));
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Bottom-up evaluation of the bag recurrences over a nice tree decomposition.
// Without tracked sets this is the counting program; with tracked sets (nu / mu
// bounds) X-alignments carry a cut side, Y-alignments are added, and markers and
// weights enter at forget / introduce-edge nodes.
template <class V>
class BagDP {
 public:
  using Table = std::vector<Entry<V>>;
  using Ops = ValueOps<V>;

  BagDP(const Instance& inst, const ProblemSpec& spec, const CompiledMatrix& cm, Bounds bounds, DpOptions opt = {},
        const Weights<V>* weights = nullptr)
      : inst_(inst), cm_(cm), bounds_(std::move(bounds)), opt_(opt), weights_(weights), p1_(spec.p1()), q1_(spec.q1()) {
    if (bounds_.nu.empty()) bounds_.nu.assign(p1_, -1);
    if (bounds_.mu.empty()) bounds_.mu.assign(q1_, -1);
    if (static_cast<int>(bounds_.tau.size()) != p1_ || static_cast<int>(bounds_.sigma.size()) != q1_ ||
        static_cast<int>(bounds_.nu.size()) != p1_ || static_cast<int>(bounds_.mu.size()) != q1_)
      throw Error("accumulator bounds do not match the problem");
    if (p1_ > 20 || q1_ > 20 || spec.p0() > 64 || spec.q0() > 64 || cm_.l() > 64) throw Error("problem too large for the packed state");
    build_layout();
    build_acc();
    build_intro();
    for (int i = 0; i < cm_.l(); ++i) {
      const UPSet& s = cm_.sets[i];
      int c = s.carrier_size();
      std::vector<int> add(c * c);
      for (int a = 0; a < c; ++a)
        for (int b = 0; b < c; ++b) add[a * c + b] = madd(s, {a}, {b}).value;
      madd_.push_back(std::move(add));
      std::vector<int> succ(c);
      for (int a = 0; a < c; ++a) succ[a] = madd(s, {a}, hom(s, 1)).value;
      succ_.push_back(std::move(succ));
    }
  }

  const Layout& layout() const { return L_; }
  const AccLayout& acc_layout() const { return A_; }
  std::vector<NodeStat> stats;

  // Root values keyed by accumulators (tau, sigma, then tracked nu, mu).
  std::vector<std::pair<AccLayout::Values, V>> run(const NiceDecomposition& nd) {
    std::vector<Table> tables(nd.nodes.size());
    stats.clear();
    for (std::size_t idx = 0; idx < nd.nodes.size(); ++idx) {
      const NiceNode& node = nd.nodes[idx];
      if (static_cast<int>(node.bag.size()) * L_.bits > 128)
        throw BudgetExceeded("bag of " + std::to_string(node.bag.size()) + " vertices exceeds the packed state (" +
                             std::to_string(L_.bits) + " bits per vertex)");
      Table out;
      switch (node.kind) {
        case NiceKind::Leaf:
          if (!node.bag.empty()) throw Error("leaf bag must be empty");
          out.push_back({0, 0, Ops::one()});
          break;
        case NiceKind::IntroduceVertex:
          out = introduce_vertex(tables[node.children.at(0)], node);
          break;
        case NiceKind::IntroduceEdge:
          out = introduce_edge(tables[node.children.at(0)], node);
          break;
        case NiceKind::Forget:
          out = forget(tables[node.children.at(0)], node, nd.nodes[node.children.at(0)].bag);
          break;
        case NiceKind::Join:
          out = join(tables[node.children.at(0)], tables[node.children.at(1)], node);
          break;
      }
      for (int c : node.children) Table().swap(tables[c]);
      if (out.size() > opt_.max_entries)
        throw BudgetExceeded("table at node " + std::to_string(idx) + " exceeds " + std::to_string(opt_.max_entries) + " entries");
      stats.push_back({static_cast<int>(idx), node.kind, static_cast<int>(node.bag.size()), out.size()});
      tables[idx] = std::move(out);
    }
    if (!nd.nodes[nd.root].bag.empty()) throw Error("root bag must be empty");
    std::vector<std::pair<AccLayout::Values, V>> result;
    for (auto& e : tables[nd.root]) result.push_back({A_.unpack(e.acc), std::move(e.val)});
    return result;
  }

 private:
  // ---- layout ----

  void build_layout() {
    L_.l = cm_.l();
    int off = 0;
    for (int i = 0; i < L_.l; ++i) {
      int c = cm_.sets[i].carrier_size();
      L_.carrier.push_back(c);
      L_.hist_bits.push_back(bit_width_of(static_cast<std::uint64_t>(c - 1)));
      L_.hist_off.push_back(off);
      off += L_.hist_bits.back();
    }
    for (int i = 0; i < L_.l; ++i) {
      bool lazy = opt_.lazy_predictions && cm_.top_level[i];
      L_.pred_off.push_back(lazy ? -1 : off);
      if (!lazy) L_.static_mask |= 1ULL << off++;
    }
    for (int i = 0; i < p1_; ++i) {
      bool tracked = bounds_.nu[i] >= 0;
      int width = tracked ? 2 : 1;
      L_.x_states.push_back(tracked ? 3 : 2);
      L_.x_off.push_back(off);
      L_.static_mask |= ((1ULL << width) - 1) << off;
      off += width;
    }
    for (int j = 0; j < q1_; ++j) {
      bool tracked = bounds_.mu[j] >= 0;
      L_.y_off.push_back(tracked ? off : -1);
      if (tracked) {
        tracked_y_.push_back(j);
        off += 2;
      }
    }
    for (int i = 0; i < p1_; ++i)
      if (bounds_.nu[i] >= 0) tracked_x_.push_back(i);
    L_.bits = off;
    if (L_.bits > 62) throw BudgetExceeded("per-vertex information needs " + std::to_string(L_.bits) + " bits");
    code_mask_ = L_.bits == 0 ? 0 : (L_.bits >= 64 ? ~0ULL : (1ULL << L_.bits) - 1);
  }

  void build_acc() {
    int off = 0;
    auto add_field = [&](int bound) {
      if (bound < 0) throw Error("negative accumulator bound");
      int bits = bit_width_of(static_cast<std::uint64_t>(bound));
      A_.fields.push_back({off, bits, bound});
      off += bits;
      return static_cast<int>(A_.fields.size()) - 1;
    };
    A_.p1 = p1_;
    A_.q1 = q1_;
    for (int b : bounds_.tau) add_field(b);
    for (int b : bounds_.sigma) add_field(b);
    A_.nu_field.assign(p1_, -1);
    A_.mu_field.assign(q1_, -1);
    for (int i = 0; i < p1_; ++i)
      if (bounds_.nu[i] >= 0) A_.nu_field[i] = add_field(bounds_.nu[i]);
    for (int j = 0; j < q1_; ++j)
      if (bounds_.mu[j] >= 0) A_.mu_field[j] = add_field(bounds_.mu[j]);
    if (off > 64 || static_cast<int>(A_.fields.size()) > AccLayout::kMaxFields)
      throw BudgetExceeded("accumulators do not fit the packed state");
  }

  void build_intro() {
    std::vector<std::uint64_t> codes = {0};
    for (int i = 0; i < L_.l; ++i) {
      if (L_.pred_off[i] < 0) continue;
      std::size_t n = codes.size();
      for (std::size_t c = 0; c < n; ++c) codes.push_back(codes[c] | (1ULL << L_.pred_off[i]));
    }
    for (int i = 0; i < p1_; ++i) {
      std::size_t n = codes.size();
      for (int x = 1; x < L_.x_states[i]; ++x)
        for (std::size_t c = 0; c < n; ++c) codes.push_back(codes[c] | (static_cast<std::uint64_t>(x) << L_.x_off[i]));
    }
    intro_codes_ = std::move(codes);
  }

  // ---- slots ----

  static U128 low_mask(int nbits) { return nbits >= 128 ? ~U128(0) : ((U128(1) << nbits) - 1); }

  U128 insert_slot(U128 bag, int p, std::uint64_t code) const {
    int at = L_.bits * p;
    U128 low = bag & low_mask(at);
    U128 high = at >= 128 ? 0 : bag >> at;
    U128 out = low | (U128(code) << at);
    if (at + L_.bits < 128) out |= high << (at + L_.bits);
    return out;
  }
  U128 remove_slot(U128 bag, int p) const {
    int at = L_.bits * p;
    U128 low = bag & low_mask(at);
    U128 high = at + L_.bits >= 128 ? 0 : bag >> (at + L_.bits);
    return low | (at >= 128 ? 0 : high << at);
  }
  std::uint64_t slot(U128 bag, int p) const {
    int at = L_.bits * p;
    return at >= 128 ? 0 : static_cast<std::uint64_t>(bag >> at) & code_mask_;
  }
  U128 set_slot(U128 bag, int p, std::uint64_t code) const {
    int at = L_.bits * p;
    return (bag & ~(U128(code_mask_) << at)) | (U128(code) << at);
  }

  static int position(const std::vector<VertexId>& bag, VertexId v) {
    auto it = std::lower_bound(bag.begin(), bag.end(), v);
    if (it == bag.end() || *it != v) throw Error("vertex " + std::to_string(v) + " missing from its bag");
    return static_cast<int>(it - bag.begin());
  }

  std::uint64_t fixed_vertex_bits(VertexId v) const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < inst_.fixed_vertex_sets.size(); ++i) m |= static_cast<std::uint64_t>(inst_.fixed_vertex_sets[i].contains(v)) << i;
    return m;
  }
  std::uint64_t fixed_edge_bits(EdgeId e) const {
    std::uint64_t m = 0;
    for (std::size_t j = 0; j < inst_.fixed_edge_sets.size(); ++j) m |= static_cast<std::uint64_t>(inst_.fixed_edge_sets[j].contains(e)) << j;
    return m;
  }

  std::uint64_t add_one(std::uint64_t code, std::uint64_t mask) const {
    for (; mask; mask &= mask - 1) {
      int i = __builtin_ctzll(mask);
      code = Layout::with_field(code, L_.hist_off[i], L_.hist_bits[i], succ_[i][L_.hist(code, i)]);
    }
    return code;
  }

  // ---- merging ----

  static void merge(Table& t) {
    std::sort(t.begin(), t.end(), [](const Entry<V>& a, const Entry<V>& b) {
      return a.bag != b.bag ? a.bag < b.bag : a.acc < b.acc;
    });
    std::size_t w = 0;
    for (std::size_t r = 0; r < t.size();) {
      std::size_t s = r + 1;
      V sum = std::move(t[r].val);
      for (; s < t.size() && t[s].bag == t[r].bag && t[s].acc == t[r].acc; ++s) sum += t[s].val;
      if (!Ops::is_zero(sum)) {
        t[w].bag = t[r].bag;
        t[w].acc = t[r].acc;
        t[w].val = std::move(sum);
        ++w;
      }
      r = s;
    }
    t.resize(w);
  }

  // ---- bag rules ----

  Table introduce_vertex(const Table& child, const NiceNode& node) {
    int p = position(node.bag, node.vertex);
    Table out;
    out.reserve(child.size() * intro_codes_.size());
    for (const auto& e : child) {
      for (std::uint64_t code : intro_codes_) {
        std::optional<std::uint64_t> acc = e.acc;
        for (int i = 0; i < p1_ && acc; ++i)
          if (L_.xval(code, i)) acc = A_.bump(*acc, i);
        if (!acc) continue;
        out.push_back({insert_slot(e.bag, p, code), *acc, e.val});
      }
    }
    return out;
  }

  struct YChoice {
    std::uint64_t ya = 0, yb = 0;  // new Y fields, already shifted into the code
    std::uint64_t markers = 0;     // over tracked edge sets (index into tracked_y_)
    int digits = 0;                // base-3 index over all edge sets
  };

  Table introduce_edge(const Table& child, const NiceNode& node) {
    const Graph& g = inst_.graph;
    EdgeId e = node.edge;
    VertexId a = g.edge(e).u, b = g.edge(e).v;
    int pa = position(node.bag, a), pb = position(node.bag, b);
    const std::uint64_t fxa = fixed_vertex_bits(a), fxb = fixed_vertex_bits(b), fy = fixed_edge_bits(e);
    std::uint64_t y_mask = 0;
    for (int j : tracked_y_) y_mask |= 3ULL << L_.y_off[j];

    // which ψ'_i hold at w (code cw, fixed bits fxw) reached through e with edge-set bits d
    std::unordered_map<std::uint64_t, std::uint64_t> memo[2];
    auto sat = [&](int role, std::uint64_t cw, std::uint64_t d) {
      std::uint64_t key = ((cw & L_.static_mask) << q1_) | d;
      auto it = memo[role].find(key);
      if (it != memo[role].end()) return it->second;
      CompiledMatrix::Local c;
      c.x = L_.membership(cw);
      c.fx = role == 0 ? fxb : fxa;
      c.y = d;
      c.fy = fy;
      c.truth = L_.predictions(cw);
      c.toward = role == 0;  // role 0: at b, accessed from a, and the arc a->b points at b
      std::uint64_t mask = 0;
      for (int i = 0; i < L_.l; ++i)
        if (cm_.eval(cm_.body[i], c)) mask |= 1ULL << i;
      memo[role].emplace(key, mask);
      return mask;
    };

    std::vector<int> pow3(q1_ + 1, 1);
    for (int j = 1; j <= q1_; ++j) pow3[j] = pow3[j - 1] * 3;

    Table out;
    out.reserve(child.size() * 2);
    std::vector<YChoice> choices;
    for (const auto& ent : child) {
      std::uint64_t ca = slot(ent.bag, pa), cb = slot(ent.bag, pb);
      bool consistent = true;
      for (int i : tracked_x_) {
        int xa = L_.xval(ca, i), xb = L_.xval(cb, i);
        if (xa && xb && xa != xb) consistent = false;
      }
      if (!consistent) continue;
      for (std::uint64_t d = 0; d < (1ULL << q1_); ++d) {
        std::optional<std::uint64_t> acc = ent.acc;
        for (int j = 0; j < q1_ && acc; ++j)
          if ((d >> j) & 1) acc = A_.bump(*acc, p1_ + j);
        if (!acc) continue;
        int base_digits = 0;
        for (int j = 0; j < q1_; ++j) base_digits += static_cast<int>((d >> j) & 1) * pow3[j];
        choices.assign(1, YChoice{ca & y_mask, cb & y_mask, 0, base_digits});
        for (std::size_t t = 0; t < tracked_y_.size(); ++t) {
          int j = tracked_y_[t];
          if (!((d >> j) & 1)) continue;
          int off = L_.y_off[j];
          int ya = L_.yval(ca, j), yb = L_.yval(cb, j);
          std::vector<YChoice> next;
          for (int side = 1; side <= 2; ++side) {
            if ((ya && ya != side) || (yb && yb != side)) continue;
            for (int m = 0; m <= (side == 1 ? 1 : 0); ++m)
              for (const auto& ch : choices) {
                YChoice n = ch;
                n.ya = Layout::with_field(n.ya, off, 2, side);
                n.yb = Layout::with_field(n.yb, off, 2, side);
                if (m) {
                  n.markers |= 1ULL << t;
                  n.digits += pow3[j];
                }
                next.push_back(n);
              }
          }
          choices = std::move(next);
        }
        if (choices.empty()) continue;
        std::uint64_t na_static = add_one(ca, sat(0, cb, d)) & ~y_mask;
        std::uint64_t nb_static = add_one(cb, sat(1, ca, d)) & ~y_mask;
        for (const auto& ch : choices) {
          std::optional<std::uint64_t> acc2 = acc;
          for (std::size_t t = 0; t < tracked_y_.size() && acc2; ++t)
            if ((ch.markers >> t) & 1) acc2 = A_.bump(*acc2, A_.mu_field[tracked_y_[t]]);
          if (!acc2) continue;
          U128 bag = set_slot(set_slot(ent.bag, pa, na_static | ch.ya), pb, nb_static | ch.yb);
          if (weights_)
            out.push_back({bag, *acc2, ent.val * weights_->edge[e][ch.digits]});
          else
            out.push_back({bag, *acc2, ent.val});
        }
      }
    }
    merge(out);
    return out;
  }

  struct ForgetVariant {
    int digits;
    std::uint64_t markers;  // over tracked_x_
  };

  std::vector<ForgetVariant> forget_variants(std::uint64_t code, std::uint64_t fx) const {
    std::uint64_t truth = 0;
    for (int i = 0; i < L_.l; ++i) {
      bool accepted = cm_.sets[i].bits()[L_.hist(code, i)];
      if (L_.pred_off[i] >= 0) {
        bool predicted = (code >> L_.pred_off[i]) & 1;
        if (predicted != accepted) return {};
      }
      truth |= static_cast<std::uint64_t>(accepted) << i;
    }
    CompiledMatrix::Local c;
    c.x = L_.membership(code);
    c.fx = fx;
    c.truth = truth;
    if (!cm_.eval(cm_.root, c)) return {};
    int base = 0, pw = 1;
    std::vector<int> pow3(p1_);
    for (int i = 0; i < p1_; ++i, pw *= 3) {
      pow3[i] = pw;
      base += (L_.xval(code, i) != 0) * pw;
    }
    std::vector<ForgetVariant> out = {{base, 0}};
    for (std::size_t t = 0; t < tracked_x_.size(); ++t) {
      int i = tracked_x_[t];
      if (L_.xval(code, i) != 1) continue;
      std::size_t n = out.size();
      for (std::size_t k = 0; k < n; ++k) out.push_back({out[k].digits + pow3[i], out[k].markers | (1ULL << t)});
    }
    return out;
  }

  Table forget(const Table& child, const NiceNode& node, const std::vector<VertexId>& child_bag) {
    VertexId v = node.vertex;
    int p = position(child_bag, v);
    std::uint64_t fx = fixed_vertex_bits(v);
    std::unordered_map<std::uint64_t, std::vector<ForgetVariant>> memo;
    Table out;
    out.reserve(child.size());
    for (const auto& ent : child) {
      std::uint64_t code = slot(ent.bag, p);
      auto it = memo.find(code);
      if (it == memo.end()) it = memo.emplace(code, forget_variants(code, fx)).first;
      if (it->second.empty()) continue;
      U128 bag = remove_slot(ent.bag, p);
      for (const auto& var : it->second) {
        std::optional<std::uint64_t> acc = ent.acc;
        for (std::size_t t = 0; t < tracked_x_.size() && acc; ++t)
          if ((var.markers >> t) & 1) acc = A_.bump(*acc, A_.nu_field[tracked_x_[t]]);
        if (!acc) continue;
        if (weights_)
          out.push_back({bag, *acc, ent.val * weights_->vertex[v][var.digits]});
        else
          out.push_back({bag, *acc, ent.val});
      }
    }
    merge(out);
    return out;
  }

  Table join(const Table& left, const Table& right, const NiceNode& node) {
    const int k = static_cast<int>(node.bag.size());
    U128 proj_mask = 0;
    for (int s = 0; s < k; ++s) proj_mask |= U128(L_.static_mask) << (L_.bits * s);
    std::unordered_map<U128, std::vector<std::size_t>, U128Hash> groups;
    for (std::size_t r = 0; r < right.size(); ++r) groups[right[r].bag & proj_mask].push_back(r);

    const int nf = static_cast<int>(A_.fields.size());
    Table out;
    for (const auto& a : left) {
      U128 proj = a.bag & proj_mask;
      auto it = groups.find(proj);
      if (it == groups.end()) continue;
      AccLayout::Values xi{};
      for (int s = 0; s < k; ++s) {
        std::uint64_t c = slot(a.bag, s);
        for (int i = 0; i < p1_; ++i) xi[i] += L_.xval(c, i) != 0;
      }
      AccLayout::Values ua = A_.unpack(a.acc);
      for (std::size_t r : it->second) {
        const auto& b = right[r];
        AccLayout::Values ub = A_.unpack(b.acc), sum{};
        bool ok = true;
        for (int f = 0; f < nf && ok; ++f) {
          sum[f] = ua[f] + ub[f] - (f < p1_ ? xi[f] : 0);
          ok = sum[f] <= A_.fields[f].bound;
        }
        if (!ok) continue;
        U128 bag = proj;
        for (int s = 0; s < k && ok; ++s) {
          std::uint64_t ca = slot(a.bag, s), cb = slot(b.bag, s), c = 0;
          for (int i = 0; i < L_.l; ++i) {
            int h = madd_[i][L_.hist(ca, i) * L_.carrier[i] + L_.hist(cb, i)];
            c = Layout::with_field(c, L_.hist_off[i], L_.hist_bits[i], static_cast<std::uint64_t>(h));
          }
          for (int j : tracked_y_) {
            int ya = L_.yval(ca, j), yb = L_.yval(cb, j);
            if (ya && yb && ya != yb) {
              ok = false;
              break;
            }
            c = Layout::with_field(c, L_.y_off[j], 2, static_cast<std::uint64_t>(ya ? ya : yb));
          }
          bag |= U128(c) << (L_.bits * s);
        }
        if (!ok) continue;
        out.push_back({bag, A_.pack(sum), a.val * b.val});
      }
    }
    merge(out);
    return out;
  }

  const Instance& inst_;
  const CompiledMatrix& cm_;
  Bounds bounds_;
  DpOptions opt_;
  const Weights<V>* weights_;
  int p1_, q1_;
  Layout L_;
  AccLayout A_;
  std::uint64_t code_mask_ = 0;
  std::vector<int> tracked_x_, tracked_y_;
  std::vector<std::uint64_t> intro_codes_;
  std::vector<std::vector<int>> madd_, succ_;
};

}  // namespace ecml::detail
