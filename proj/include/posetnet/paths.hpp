#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "posetnet/error.hpp"
#include "posetnet/poset.hpp"

namespace posetnet {

// ---------------------------------------------------------------------------
// Elementary steps and step sequences
// ---------------------------------------------------------------------------

enum class StepKind : std::uint8_t { Down, Up, Trivial };

/// One elementary move between comparable elements. A Down step travels
/// hi -> lo, an Up step lo -> hi, a Trivial step stays at lo == hi.
struct Step {
  StepKind kind;
  int lo;
  int hi;

  int start() const { return kind == StepKind::Down ? hi : lo; }
  int end() const { return kind == StepKind::Up ? hi : lo; }
  bool trivial() const { return kind == StepKind::Trivial; }

  friend bool operator==(const Step&, const Step&) = default;
  friend auto operator<=>(const Step&, const Step&) = default;
};

inline Step step_down(const Poset& p, int lo, int hi) {
  if (!p.leq(lo, hi))
    fail(ErrorCode::not_comparable, p.label(lo) + " <= " + p.label(hi) + " does not hold");
  if (lo == hi) return Step{StepKind::Trivial, lo, lo};
  return Step{StepKind::Down, lo, hi};
}

inline Step step_up(const Poset& p, int lo, int hi) {
  if (!p.leq(lo, hi))
    fail(ErrorCode::not_comparable, p.label(lo) + " <= " + p.label(hi) + " does not hold");
  if (lo == hi) return Step{StepKind::Trivial, lo, lo};
  return Step{StepKind::Up, lo, hi};
}

inline Step step_trivial(int a) { return Step{StepKind::Trivial, a, a}; }

inline Step reverse_step(const Step& s) {
  switch (s.kind) {
    case StepKind::Down: return Step{StepKind::Up, s.lo, s.hi};
    case StepKind::Up: return Step{StepKind::Down, s.lo, s.hi};
    case StepKind::Trivial: return s;
  }
  fail(ErrorCode::internal_error, "bad step kind");
}

/// The unique step from `from` to `to` (trivial when equal).
inline Step direct_step(const Poset& p, int from, int to) {
  if (from == to) return step_trivial(from);
  if (p.leq(from, to)) return Step{StepKind::Up, from, to};
  if (p.leq(to, from)) return Step{StepKind::Down, to, from};
  fail(ErrorCode::not_comparable, p.label(from) + " and " + p.label(to) + " are incomparable");
}

using Word = std::vector<Step>;

/// Nonempty composable sequence of elementary steps, kept in application
/// order: steps[0] acts first, so start() is where the sequence departs.
struct PathSeq {
  Word steps;

  int start() const { return steps.front().start(); }
  int end() const { return steps.back().end(); }
  bool is_loop() const { return start() == end(); }

  /// Steps that move; trivial steps do not count toward length budgets.
  int word_len() const {
    int n = 0;
    for (const auto& s : steps)
      if (!s.trivial()) ++n;
    return n;
  }

  friend bool operator==(const PathSeq&, const PathSeq&) = default;
  friend auto operator<=>(const PathSeq&, const PathSeq&) = default;
};

inline void validate_word(const Poset& p, const Word& w) {
  if (w.empty()) fail(ErrorCode::input_error, "empty path");
  for (const auto& s : w) {
    if (s.lo < 0 || s.hi >= p.size()) fail(ErrorCode::unknown_element, "step element out of range");
    if (!p.leq(s.lo, s.hi)) fail(ErrorCode::not_comparable, "step endpoints incomparable");
    if (s.trivial() && s.lo != s.hi) fail(ErrorCode::input_error, "malformed trivial step");
    if (!s.trivial() && s.lo == s.hi) fail(ErrorCode::input_error, "degenerate nontrivial step");
  }
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i].end() != w[i + 1].start())
      fail(ErrorCode::input_error, "steps are not composable at position " + std::to_string(i));
}

inline PathSeq make_path(const Poset& p, Word steps) {
  validate_word(p, steps);
  return PathSeq{std::move(steps)};
}

inline PathSeq reverse_path(const PathSeq& seq) {
  Word out;
  out.reserve(seq.steps.size());
  for (auto it = seq.steps.rbegin(); it != seq.steps.rend(); ++it) out.push_back(reverse_step(*it));
  return PathSeq{std::move(out)};
}

// ---------------------------------------------------------------------------
// Text syntax: d(a,b) descends b -> a, u(b,a) ascends a -> b, i(a) stays.
// Terms are '*'-separated in application order right to left.
// ---------------------------------------------------------------------------

inline std::string print_step(const Poset& p, const Step& s) {
  switch (s.kind) {
    case StepKind::Down: return "d(" + p.label(s.lo) + "," + p.label(s.hi) + ")";
    case StepKind::Up: return "u(" + p.label(s.hi) + "," + p.label(s.lo) + ")";
    case StepKind::Trivial: return "i(" + p.label(s.lo) + ")";
  }
  return "?";
}

inline std::string print_path(const Poset& p, const PathSeq& seq) {
  std::string out;
  for (auto it = seq.steps.rbegin(); it != seq.steps.rend(); ++it) {
    if (!out.empty()) out += "*";
    out += print_step(p, *it);
  }
  return out;
}

namespace detail {

inline std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

inline Step parse_step_token(const Poset& p, const std::string& raw) {
  std::string tok = strip(raw);
  if (tok.size() < 4 || tok[1] != '(' || tok.back() != ')')
    fail(ErrorCode::input_error, "malformed step '" + raw + "'");
  char k = tok[0];
  std::string body = tok.substr(2, tok.size() - 3);
  if (k == 'i') return step_trivial(p.id_of(strip(body)));
  auto comma = body.find(',');
  if (comma == std::string::npos) fail(ErrorCode::input_error, "malformed step '" + raw + "'");
  std::string x = strip(body.substr(0, comma));
  std::string y = strip(body.substr(comma + 1));
  if (k == 'd') return step_down(p, p.id_of(x), p.id_of(y));   // d(a,b): b -> a with a <= b
  if (k == 'u') return step_up(p, p.id_of(y), p.id_of(x));     // u(b,a): a -> b with a <= b
  fail(ErrorCode::input_error, "unknown step kind '" + std::string(1, k) + "'");
}

}  // namespace detail

inline PathSeq parse_path(const Poset& p, const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (c == '*') {
      tokens.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  tokens.push_back(cur);
  Word steps;
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it)
    steps.push_back(detail::parse_step_token(p, *it));
  return make_path(p, std::move(steps));
}

// ---------------------------------------------------------------------------
// Rewriting. The length-reducing rules are the two-step consequences of the
// defining relations: adjacent trivial steps are absorbed, and two adjacent
// moving steps x -> m -> y collapse to the direct step whenever x and y are
// comparable (to i_x when x == y).
// ---------------------------------------------------------------------------

namespace detail {

/// Result of one rule application at position i: steps i, i+1 replaced.
inline std::optional<Step> combine(const Poset& p, const Step& s, const Step& t) {
  if (s.trivial() && t.trivial()) return step_trivial(s.lo);
  if (s.trivial()) return t;
  if (t.trivial()) return s;
  int x = s.start(), y = t.end();
  if (x == y) return step_trivial(x);
  if (p.comparable(x, y)) return direct_step(p, x, y);
  return std::nullopt;
}

inline Word rewrite_at(const Word& w, std::size_t i, const Step& replacement) {
  Word out;
  out.reserve(w.size() - 1);
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
  out.push_back(replacement);
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 2, w.end());
  return out;
}

}  // namespace detail

/// Leftmost-innermost reduction to an irreducible word. Each rule removes a
/// step, so this terminates; the result is canonical exactly when the poset
/// carries a confluence certificate.
inline PathSeq greedy_reduce(const Poset& p, const PathSeq& seq) {
  Word w = seq.steps;
  std::size_t i = 0;
  while (w.size() > 1 && i + 1 < w.size()) {
    auto r = detail::combine(p, w[i], w[i + 1]);
    if (r) {
      w = detail::rewrite_at(w, i, *r);
      i = i > 0 ? i - 1 : 0;
    } else {
      ++i;
    }
  }
  return PathSeq{std::move(w)};
}

/// All single-rule reducts of a word, with the rewrite position.
inline std::vector<std::pair<std::size_t, Word>> one_step_reducts(const Poset& p, const Word& w) {
  std::vector<std::pair<std::size_t, Word>> out;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    auto r = detail::combine(p, w[i], w[i + 1]);
    if (r) out.emplace_back(i, detail::rewrite_at(w, i, *r));
  }
  return out;
}

/// Sound one-step expansions: un-collapse a step through an admissible
/// middle, blow a trivial step into a backtrack, or insert a trivial step.
/// Together with the reducing rules these generate the full equivalence.
inline std::vector<Word> one_step_expansions(const Poset& p, const Word& w, std::size_t max_len) {
  std::vector<Word> out;
  if (w.size() + 1 > max_len) return out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Step& s = w[i];
    int x = s.start(), y = s.end();
    for (int m = 0; m < p.size(); ++m) {
      if (m == x || m == y) continue;
      if (!p.comparable(m, x) || !p.comparable(m, y)) continue;
      Word nw;
      nw.reserve(w.size() + 1);
      nw.insert(nw.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      nw.push_back(direct_step(p, x, m));
      nw.push_back(direct_step(p, m, y));
      nw.insert(nw.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
      out.push_back(std::move(nw));
    }
    // Trivial insertions on both sides of the step.
    for (int side = 0; side < 2; ++side) {
      Word nw;
      nw.reserve(w.size() + 1);
      nw.insert(nw.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      if (side == 0) {
        nw.push_back(step_trivial(x));
        nw.push_back(s);
      } else {
        nw.push_back(s);
        nw.push_back(step_trivial(y));
      }
      nw.insert(nw.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
      out.push_back(std::move(nw));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Confluence certification of the reducing rules by exhaustive peak analysis.
// All rules span two adjacent steps, so overlapping redexes live inside
// three-step windows; non-overlapping redexes always commute.
// ---------------------------------------------------------------------------

struct ConfluenceReport {
  bool terminating = true;  // every rule strictly shortens the word
  struct CriticalPair {
    PathSeq peak;
    PathSeq left_nf;
    PathSeq right_nf;
    bool joinable;
  };
  std::vector<CriticalPair> critical_pairs;
  bool certified = false;
  int max_len = 0;
  int peaks_checked = 0;
};

namespace detail {

inline void enumerate_words(const Poset& p, const std::vector<std::vector<Step>>& steps_from,
                            Word& cur, int remaining, const std::function<void(const Word&)>& fn) {
  if (!cur.empty()) fn(cur);
  if (remaining == 0) return;
  int at = cur.empty() ? -1 : cur.back().end();
  if (cur.empty()) {
    for (int s = 0; s < p.size(); ++s) {
      for (const Step& st : steps_from[static_cast<std::size_t>(s)]) {
        cur.push_back(st);
        enumerate_words(p, steps_from, cur, remaining - 1, fn);
        cur.pop_back();
      }
    }
  } else {
    for (const Step& st : steps_from[static_cast<std::size_t>(at)]) {
      cur.push_back(st);
      enumerate_words(p, steps_from, cur, remaining - 1, fn);
      cur.pop_back();
    }
  }
}

inline std::vector<std::vector<Step>> step_alphabet(const Poset& p) {
  std::vector<std::vector<Step>> from(static_cast<std::size_t>(p.size()));
  for (int x = 0; x < p.size(); ++x) {
    from[static_cast<std::size_t>(x)].push_back(step_trivial(x));
    for (int y = 0; y < p.size(); ++y)
      if (y != x && p.comparable(x, y)) from[static_cast<std::size_t>(x)].push_back(direct_step(p, x, y));
  }
  return from;
}

}  // namespace detail

inline ConfluenceReport check_confluence(const Poset& p, int max_len = 3) {
  if (max_len < 3) max_len = 3;
  ConfluenceReport rep;
  rep.max_len = max_len;
  rep.certified = true;
  auto alphabet = detail::step_alphabet(p);
  Word cur;
  detail::enumerate_words(p, alphabet, cur, max_len, [&](const Word& w) {
    auto reducts = one_step_reducts(p, w);
    for (std::size_t i = 0; i < reducts.size(); ++i) {
      for (std::size_t j = i + 1; j < reducts.size(); ++j) {
        if (reducts[i].second == reducts[j].second) continue;
        ++rep.peaks_checked;
        PathSeq lnf = greedy_reduce(p, PathSeq{reducts[i].second});
        PathSeq rnf = greedy_reduce(p, PathSeq{reducts[j].second});
        bool joinable = lnf == rnf;
        rep.critical_pairs.push_back({PathSeq{w}, lnf, rnf, joinable});
        rep.certified &= joinable;
      }
    }
  });
  return rep;
}

// ---------------------------------------------------------------------------
// Canonical representatives.
//
// Three regimes, resolved per poset:
//  * certified posets: the greedy normal form is canonical (Newman);
//  * upward directed posets: every loop is equivalent to the trivial one, so
//    a class is determined by its endpoints and gets a fixed short form;
//  * otherwise: minimum over a bounded closure of sound moves. Honest but
//    possibly incomplete; equality of representatives is then syntactic.
// ---------------------------------------------------------------------------

enum class CanonStrategy { CertifiedGreedy, DirectedEndpoint, BoundedClosure };

namespace detail {

struct WordOrder {
  bool operator()(const Word& a, const Word& b) const {
    auto moving = [](const Word& w) {
      int n = 0;
      for (const auto& s : w)
        if (!s.trivial()) ++n;
      return n;
    };
    int ma = moving(a), mb = moving(b);
    if (ma != mb) return ma < mb;
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

}  // namespace detail

/// Per-poset reduction state: the confluence certificate, the canonical-form
/// regime, and a memo cache for the bounded-closure regime. The cache is not
/// synchronized; keep a context on one thread when the bounded regime is in
/// play (values themselves stay immutable).
class PathContext {
 public:
  explicit PathContext(const Poset& poset, int cert_max_len = 3, int closure_headroom = 2)
      : poset_(&poset), headroom_(closure_headroom) {
    cert_ = check_confluence(poset, cert_max_len);
    directed_ = poset.is_upward_directed();
    if (cert_.certified)
      strategy_ = CanonStrategy::CertifiedGreedy;
    else if (directed_)
      strategy_ = CanonStrategy::DirectedEndpoint;
    else
      strategy_ = CanonStrategy::BoundedClosure;
  }

  const Poset& poset() const { return *poset_; }
  const ConfluenceReport& certificate() const { return cert_; }
  bool directed() const { return directed_; }
  CanonStrategy strategy() const { return strategy_; }

  /// Canonical forms are complete (one per equivalence class) under the
  /// certified and directed regimes.
  bool canonical_complete() const { return strategy_ != CanonStrategy::BoundedClosure; }

  PathSeq canonical(const PathSeq& seq) const {
    switch (strategy_) {
      case CanonStrategy::CertifiedGreedy:
        return greedy_reduce(*poset_, seq);
      case CanonStrategy::DirectedEndpoint:
        return endpoint_canonical(seq.start(), seq.end());
      case CanonStrategy::BoundedClosure:
        return bounded_canonical(seq);
    }
    fail(ErrorCode::internal_error, "bad strategy");
  }

  PathSeq endpoint_canonical(int x, int y) const {
    const Poset& p = *poset_;
    if (x == y) return PathSeq{{step_trivial(x)}};
    if (p.comparable(x, y)) return PathSeq{{direct_step(p, x, y)}};
    for (int c = 0; c < p.size(); ++c)
      if (p.leq(x, c) && p.leq(y, c))
        return PathSeq{{direct_step(p, x, c), direct_step(p, c, y)}};
    fail(ErrorCode::not_directed, "no common upper bound for " + p.label(x) + ", " + p.label(y));
  }

  /// Closure of sound moves capped at |w| + headroom; picks the least word.
  PathSeq bounded_canonical(const PathSeq& seq) const {
    auto it = nf_cache_.find(seq.steps);
    if (it != nf_cache_.end()) return PathSeq{it->second};
    std::size_t cap = seq.steps.size() + static_cast<std::size_t>(headroom_);
    std::set<Word> seen;
    std::deque<Word> queue;
    seen.insert(seq.steps);
    queue.push_back(seq.steps);
    Word best = seq.steps;
    detail::WordOrder less;
    while (!queue.empty()) {
      Word w = std::move(queue.front());
      queue.pop_front();
      if (less(w, best)) best = w;
      for (auto& [pos, r] : one_step_reducts(*poset_, w))
        if (seen.insert(r).second) queue.push_back(r);
      for (auto& e : one_step_expansions(*poset_, w, cap))
        if (seen.insert(e).second) queue.push_back(e);
    }
    nf_cache_.emplace(seq.steps, best);
    return PathSeq{std::move(best)};
  }

 private:
  const Poset* poset_;
  ConfluenceReport cert_;
  bool directed_ = false;
  CanonStrategy strategy_ = CanonStrategy::BoundedClosure;
  int headroom_;
  mutable std::map<Word, Word> nf_cache_;
};

/// Standalone form; builds a transient context per call.
inline PathSeq reduce(const Poset& p, const PathSeq& seq) {
  return PathContext(p).canonical(seq);
}

// ---------------------------------------------------------------------------
// Path classes and the semigroup product with zero
// ---------------------------------------------------------------------------

/// An equivalence class of step sequences, held by its canonical
/// representative, together with the absorbing zero.
struct PathClass {
  bool zero = false;
  PathSeq repr;  // meaningful iff !zero

  static PathClass zero_class() { return PathClass{true, PathSeq{}}; }

  bool is_trivial() const { return !zero && repr.steps.size() == 1 && repr.steps[0].trivial(); }
  int start() const { return repr.start(); }
  int end() const { return repr.end(); }
  int word_len() const { return zero ? 0 : repr.word_len(); }

  friend bool operator==(const PathClass&, const PathClass&) = default;
  friend auto operator<=>(const PathClass&, const PathClass&) = default;
};

inline PathClass make_class(const PathContext& ctx, const PathSeq& seq) {
  return PathClass{false, ctx.canonical(seq)};
}

inline PathClass trivial_class(int a) { return PathClass{false, PathSeq{{step_trivial(a)}}}; }

/// Product p * q: q is traversed first. Mismatched endpoints give zero.
inline PathClass concat(const PathContext& ctx, const PathClass& p, const PathClass& q) {
  if (p.zero || q.zero) return PathClass::zero_class();
  if (p.start() != q.end()) return PathClass::zero_class();
  Word w = q.repr.steps;
  w.insert(w.end(), p.repr.steps.begin(), p.repr.steps.end());
  return make_class(ctx, PathSeq{std::move(w)});
}

inline PathClass inverse_class(const PathContext& ctx, const PathClass& p) {
  if (p.zero) return p;
  return make_class(ctx, reverse_path(p.repr));
}

// ---------------------------------------------------------------------------
// Equivalence decision
// ---------------------------------------------------------------------------

enum class EquivResult { Yes, No, Unknown };

inline const char* to_string(EquivResult r) {
  switch (r) {
    case EquivResult::Yes: return "Yes";
    case EquivResult::No: return "No";
    case EquivResult::Unknown: return "Unknown";
  }
  return "?";
}

/// Optional hook proving two same-endpoint sequences inequivalent (e.g. by an
/// abelianized invariant). Returns true only on a sound separation.
using Separator = std::function<bool(const PathSeq&, const PathSeq&)>;

/// Decides p ~ q. On posets with complete canonical forms the answer is
/// exact; otherwise a bounded closure search runs (at most `budget` visited
/// words) and Unknown is a possible honest outcome.
inline EquivResult equivalent(const PathContext& ctx, const PathSeq& p, const PathSeq& q,
                              int budget = 100000, const Separator& separator = {}) {
  if (p.start() != q.start() || p.end() != q.end()) return EquivResult::No;
  if (ctx.canonical(p) == ctx.canonical(q)) return EquivResult::Yes;
  if (ctx.canonical_complete()) return EquivResult::No;
  if (separator && separator(p, q)) return EquivResult::No;
  // Bidirectional closure search over the sound moves.
  std::size_t cap = std::max(p.steps.size(), q.steps.size()) + 2;
  std::map<Word, int> side;  // 1 = from p, 2 = from q
  std::deque<Word> queue;
  side[p.steps] = 1;
  side[q.steps] = 2;
  queue.push_back(p.steps);
  queue.push_back(q.steps);
  int visited = 0;
  while (!queue.empty() && visited < budget) {
    Word w = std::move(queue.front());
    queue.pop_front();
    ++visited;
    int s = side[w];
    std::vector<Word> nexts;
    for (auto& [pos, r] : one_step_reducts(ctx.poset(), w)) nexts.push_back(r);
    for (auto& e : one_step_expansions(ctx.poset(), w, cap)) nexts.push_back(e);
    for (auto& nw : nexts) {
      auto [it, fresh] = side.emplace(nw, s);
      if (!fresh && it->second != s) return EquivResult::Yes;
      if (fresh) queue.push_back(nw);
    }
  }
  return EquivResult::Unknown;
}

}  // namespace posetnet
