#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "posetnet/error.hpp"
#include "posetnet/intlin.hpp"
#include "posetnet/paths.hpp"
#include "posetnet/poset.hpp"

namespace posetnet {

// ---------------------------------------------------------------------------
// Presentations of the loop group. Generators are the non-tree edges of the
// comparability graph; every three-element chain contributes the relator of
// its triangle written through the spanning tree.
// ---------------------------------------------------------------------------

struct GroupPresentation {
  std::string basepoint;
  /// Oriented non-tree edges (u, v) with u < v in label order; traversing
  /// u -> v reads as the generator, v -> u as its inverse.
  std::vector<std::pair<std::string, std::string>> generators;
  /// Freely reduced words; entry k > 0 means generator k-1, k < 0 its inverse.
  std::vector<std::vector<int>> relators;
  std::vector<std::pair<std::string, std::string>> spanning_tree;
};

struct AbelianInvariants {
  int rank = 0;
  std::vector<long long> torsion;  // divisor chain, entries > 1

  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

namespace detail {

struct EdgeTable {
  // edge (i, j) with i < j -> generator index, or -1 for tree edges
  std::map<std::pair<int, int>, int> gen_index;
  std::vector<std::pair<int, int>> tree_edges;
  std::vector<std::pair<int, int>> gen_edges;
};

inline EdgeTable spanning_tree_table(const Poset& p, int root) {
  EdgeTable t;
  std::vector<bool> seen(static_cast<std::size_t>(p.size()), false);
  std::vector<int> queue{root};
  seen[static_cast<std::size_t>(root)] = true;
  std::size_t head = 0;
  while (head < queue.size()) {
    int x = queue[head++];
    for (int y = 0; y < p.size(); ++y) {
      if (y == x || !p.comparable(x, y)) continue;
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        t.tree_edges.emplace_back(std::min(x, y), std::max(x, y));
        queue.push_back(y);
      }
    }
  }
  std::sort(t.tree_edges.begin(), t.tree_edges.end());
  for (int i = 0; i < p.size(); ++i) {
    for (int j = i + 1; j < p.size(); ++j) {
      if (!p.comparable(i, j)) continue;
      auto e = std::make_pair(i, j);
      if (std::binary_search(t.tree_edges.begin(), t.tree_edges.end(), e)) continue;
      t.gen_index[e] = static_cast<int>(t.gen_edges.size());
      t.gen_edges.push_back(e);
    }
  }
  return t;
}

/// Signed generator letter for traversing x -> y, 0 for tree edges.
inline int edge_letter(const EdgeTable& t, int x, int y) {
  auto e = std::make_pair(std::min(x, y), std::max(x, y));
  auto it = t.gen_index.find(e);
  if (it == t.gen_index.end()) return 0;
  int g = it->second + 1;
  return x < y ? g : -g;
}

inline void free_reduce(std::vector<int>& word) {
  std::vector<int> out;
  for (int letter : word) {
    if (!out.empty() && out.back() == -letter)
      out.pop_back();
    else
      out.push_back(letter);
  }
  word = std::move(out);
}

}  // namespace detail

inline GroupPresentation loop_group_presentation(const Poset& p, const std::string& base) {
  if (!p.is_path_connected())
    fail(ErrorCode::not_path_connected, "loop group presentations need a path connected poset");
  int root = p.id_of(base);
  auto table = detail::spanning_tree_table(p, root);
  GroupPresentation pres;
  pres.basepoint = base;
  for (auto [i, j] : table.gen_edges) pres.generators.emplace_back(p.label(i), p.label(j));
  for (auto [i, j] : table.tree_edges) pres.spanning_tree.emplace_back(p.label(i), p.label(j));
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y)
      for (int z = 0; z < p.size(); ++z) {
        if (x == y || y == z || x == z) continue;
        if (!(p.leq(x, y) && p.leq(y, z))) continue;
        std::vector<int> word;
        for (auto [u, v] : {std::make_pair(x, y), std::make_pair(y, z), std::make_pair(z, x)}) {
          int letter = detail::edge_letter(table, u, v);
          if (letter != 0) word.push_back(letter);
        }
        detail::free_reduce(word);
        if (word.empty()) continue;
        if (std::find(pres.relators.begin(), pres.relators.end(), word) == pres.relators.end())
          pres.relators.push_back(word);
      }
  return pres;
}

inline IntMatrix relator_matrix(const GroupPresentation& g) {
  IntMatrix m;
  for (const auto& word : g.relators) {
    std::vector<long long> row(g.generators.size(), 0);
    for (int letter : word) row[static_cast<std::size_t>(std::abs(letter)) - 1] += letter > 0 ? 1 : -1;
    m.push_back(std::move(row));
  }
  return m;
}

inline AbelianInvariants abelianization(const GroupPresentation& g) {
  AbelianInvariants inv;
  if (g.generators.empty()) return inv;
  IntMatrix m = relator_matrix(g);
  if (m.empty()) {
    inv.rank = static_cast<int>(g.generators.size());
    return inv;
  }
  auto diag = smith_diagonal(std::move(m));
  int nonzero = 0;
  for (long long d : diag)
    if (d != 0) {
      ++nonzero;
      if (d > 1) inv.torsion.push_back(d);
    }
  inv.rank = static_cast<int>(g.generators.size()) - nonzero;
  std::sort(inv.torsion.begin(), inv.torsion.end());
  return inv;
}

// ---------------------------------------------------------------------------
// Abelianized-class invariant of loops; the computable separator behind
// the `equivalent` decision on uncertified posets.
// ---------------------------------------------------------------------------

class LoopAbelianizer {
 public:
  explicit LoopAbelianizer(const Poset& p)
      : poset_(&p),
        table_(detail::spanning_tree_table(p, 0)),
        lattice_(build_lattice(p, table_)) {}

  /// Signed non-tree-edge traversal counts of a (not necessarily loop) word.
  std::vector<long long> h1_vector(const PathSeq& seq) const {
    std::vector<long long> v(table_.gen_edges.size(), 0);
    for (const Step& s : seq.steps) {
      if (s.trivial()) continue;
      int letter = detail::edge_letter(table_, s.start(), s.end());
      if (letter != 0) v[static_cast<std::size_t>(std::abs(letter)) - 1] += letter > 0 ? 1 : -1;
    }
    return v;
  }

  /// True iff the invariant proves the two words inequivalent. Sound for any
  /// pair with matching endpoints: their formal difference is a loop.
  bool provably_distinct(const PathSeq& a, const PathSeq& b) const {
    auto va = h1_vector(a), vb = h1_vector(b);
    for (std::size_t i = 0; i < va.size(); ++i) va[i] -= vb[i];
    return !lattice_.contains(va);
  }

  Separator separator() const {
    return [this](const PathSeq& a, const PathSeq& b) { return provably_distinct(a, b); };
  }

 private:
  static IntLattice build_lattice(const Poset& p, const detail::EdgeTable& table) {
    IntMatrix rows;
    for (int x = 0; x < p.size(); ++x)
      for (int y = 0; y < p.size(); ++y)
        for (int z = 0; z < p.size(); ++z) {
          if (x == y || y == z || x == z) continue;
          if (!(p.leq(x, y) && p.leq(y, z))) continue;
          std::vector<long long> row(table.gen_edges.size(), 0);
          for (auto [u, v] : {std::make_pair(x, y), std::make_pair(y, z), std::make_pair(z, x)}) {
            int letter = detail::edge_letter(table, u, v);
            if (letter != 0) row[static_cast<std::size_t>(std::abs(letter)) - 1] += letter > 0 ? 1 : -1;
          }
          rows.push_back(std::move(row));
        }
    return IntLattice(std::move(rows));
  }

  const Poset* poset_;
  detail::EdgeTable table_;
  IntLattice lattice_;
};

/// Full-strength equivalence decision: canonical forms, then the abelianized
/// separator, then bounded closure search.
class EquivalenceDecider {
 public:
  explicit EquivalenceDecider(const PathContext& ctx) : ctx_(&ctx) {
    if (ctx.poset().is_path_connected()) abel_.emplace(ctx.poset());
  }

  EquivResult decide(const PathSeq& p, const PathSeq& q, int budget = 100000) const {
    return equivalent(*ctx_, p, q, budget, abel_ ? abel_->separator() : Separator{});
  }

  EquivResult decide(const PathClass& p, const PathClass& q, int budget = 100000) const {
    if (p.zero || q.zero) return p.zero == q.zero ? EquivResult::Yes : EquivResult::No;
    return decide(p.repr, q.repr, budget);
  }

  const PathContext& context() const { return *ctx_; }
  const std::optional<LoopAbelianizer>& abelianizer() const { return abel_; }

 private:
  const PathContext* ctx_;
  std::optional<LoopAbelianizer> abel_;
};

// ---------------------------------------------------------------------------
// Conjugation isomorphism between loop groups along the order
// ---------------------------------------------------------------------------

/// sigma_ba: loops at a to loops at b for a <= b, by conjugating with the
/// connecting pair and reducing.
inline PathClass sigma_ba(const PathContext& ctx, int a, int b, const PathClass& p) {
  const Poset& ps = ctx.poset();
  if (!ps.leq(a, b))
    fail(ErrorCode::not_comparable, ps.label(a) + " <= " + ps.label(b) + " does not hold");
  if (p.zero || p.start() != a || p.end() != a)
    fail(ErrorCode::not_a_loop, "sigma needs a loop based at " + ps.label(a));
  if (a == b) return p;
  Word w;
  w.push_back(step_down(ps, a, b));  // b -> a
  w.insert(w.end(), p.repr.steps.begin(), p.repr.steps.end());
  w.push_back(step_up(ps, a, b));  // a -> b
  return make_class(ctx, PathSeq{std::move(w)});
}

inline PathClass sigma_ba(const PathContext& ctx, const std::string& a, const std::string& b,
                          const PathClass& p) {
  return sigma_ba(ctx, ctx.poset().id_of(a), ctx.poset().id_of(b), p);
}

// ---------------------------------------------------------------------------
// Directedness forces trivial loops; verified sample-wise
// ---------------------------------------------------------------------------

struct TrivialityReport {
  bool all_trivial = true;
  AbelianInvariants invariants;
  struct Item {
    PathSeq loop;
    EquivResult trivial;
  };
  std::vector<Item> items;
};

/// Closure-only decision used where the canonical strategy would be circular.
inline EquivResult equivalent_by_closure(const Poset& p, const PathSeq& a, const PathSeq& b,
                                         int budget = 100000) {
  if (a.start() != b.start() || a.end() != b.end()) return EquivResult::No;
  std::size_t cap = std::max(a.steps.size(), b.steps.size()) + 2;
  std::map<Word, int> side;
  std::deque<Word> queue;
  side[a.steps] = 1;
  side[b.steps] = 2;
  queue.push_back(a.steps);
  queue.push_back(b.steps);
  int visited = 0;
  while (!queue.empty() && visited < budget) {
    Word w = std::move(queue.front());
    queue.pop_front();
    ++visited;
    int s = side[w];
    std::vector<Word> nexts;
    for (auto& [pos, r] : one_step_reducts(p, w)) nexts.push_back(r);
    for (auto& e : one_step_expansions(p, w, cap)) nexts.push_back(e);
    for (auto& nw : nexts) {
      auto [it, fresh] = side.emplace(nw, s);
      if (!fresh && it->second != s) return EquivResult::Yes;
      if (fresh) queue.push_back(nw);
    }
  }
  return EquivResult::Unknown;
}

inline TrivialityReport loops_trivial_if_directed(const PathContext& ctx,
                                                  const std::vector<PathSeq>& samples,
                                                  int budget = 100000) {
  const Poset& p = ctx.poset();
  if (!p.is_upward_directed())
    fail(ErrorCode::not_directed, "poset is not upward directed");
  TrivialityReport rep;
  EquivalenceDecider decider(ctx);
  for (const auto& loop : samples) {
    if (!loop.is_loop()) fail(ErrorCode::not_a_loop, "sample is not a loop");
    PathSeq triv{{step_trivial(loop.start())}};
    // Decide independently of the directed canonical form: greedy reduction
    // first, bounded closure otherwise.
    EquivResult r;
    if (greedy_reduce(p, loop) == triv)
      r = EquivResult::Yes;
    else
      r = equivalent_by_closure(p, loop, triv, budget);
    rep.items.push_back({loop, r});
    if (r != EquivResult::Yes) rep.all_trivial = false;
  }
  if (p.is_path_connected()) {
    rep.invariants = abelianization(loop_group_presentation(p, p.label(0)));
    if (rep.invariants.rank != 0 || !rep.invariants.torsion.empty()) rep.all_trivial = false;
  }
  return rep;
}

}  // namespace posetnet
