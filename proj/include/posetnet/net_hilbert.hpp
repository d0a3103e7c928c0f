#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "posetnet/error.hpp"
#include "posetnet/homotopy.hpp"
#include "posetnet/paths.hpp"
#include "posetnet/poset.hpp"
#include "posetnet/rational.hpp"
#include "posetnet/report.hpp"

namespace posetnet {

// ---------------------------------------------------------------------------
// Partial injections between basis index ranges
// ---------------------------------------------------------------------------

/// Partial injection {0..from_dim-1} -> {0..to_dim-1}; img[i] == -1 means
/// undefined. The embeddings, their adjoints, and all products act on basis
/// indices through these.
struct IndexMap {
  int from_dim = 0;
  int to_dim = 0;
  std::vector<int> img;

  static IndexMap identity(int n) {
    IndexMap m{n, n, std::vector<int>(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) m.img[static_cast<std::size_t>(i)] = i;
    return m;
  }

  static IndexMap undefined(int from, int to) {
    return IndexMap{from, to, std::vector<int>(static_cast<std::size_t>(from), -1)};
  }

  bool defined(int i) const { return img[static_cast<std::size_t>(i)] >= 0; }
  int operator()(int i) const { return img[static_cast<std::size_t>(i)]; }

  bool injective() const {
    std::set<int> seen;
    for (int v : img) {
      if (v < 0) continue;
      if (v >= to_dim || !seen.insert(v).second) return false;
    }
    return true;
  }

  bool total() const {
    return std::all_of(img.begin(), img.end(), [](int v) { return v >= 0; });
  }

  std::vector<int> domain() const {
    std::vector<int> out;
    for (int i = 0; i < from_dim; ++i)
      if (defined(i)) out.push_back(i);
    return out;
  }

  std::vector<int> range() const {
    std::vector<int> out;
    for (int v : img)
      if (v >= 0) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  }

  int domain_size() const { return static_cast<int>(domain().size()); }
  bool empty() const { return domain_size() == 0; }

  IndexMap inverse() const {
    IndexMap m = undefined(to_dim, from_dim);
    for (int i = 0; i < from_dim; ++i)
      if (defined(i)) m.img[static_cast<std::size_t>(img[static_cast<std::size_t>(i)])] = i;
    return m;
  }

  /// this after g
  IndexMap after(const IndexMap& g) const {
    IndexMap m = undefined(g.from_dim, to_dim);
    for (int i = 0; i < g.from_dim; ++i) {
      int mid = g.img[static_cast<std::size_t>(i)];
      if (mid >= 0 && defined(mid)) m.img[static_cast<std::size_t>(i)] = img[static_cast<std::size_t>(mid)];
    }
    return m;
  }

  IndexMap restricted(const std::set<int>& keep) const {
    IndexMap m = *this;
    for (int i = 0; i < from_dim; ++i)
      if (!keep.count(i)) m.img[static_cast<std::size_t>(i)] = -1;
    return m;
  }

  /// True when img[i] is i or undefined everywhere: a diagonal projection.
  bool sub_identity() const {
    for (int i = 0; i < from_dim; ++i)
      if (defined(i) && img[static_cast<std::size_t>(i)] != i) return false;
    return from_dim == to_dim;
  }

  friend bool operator==(const IndexMap&, const IndexMap&) = default;
  friend auto operator<=>(const IndexMap&, const IndexMap&) = default;
};

// ---------------------------------------------------------------------------
// Truncated net of Hilbert spaces
// ---------------------------------------------------------------------------

/// Finite stand-in for a net (K, H_a, gamma_ba): per-site dimensions, one
/// injective basis embedding per comparable pair, and a path-length budget L
/// for the path factor of each site space. Immutable and cheap to copy.
class TruncatedNet {
 public:
  using GammaSpec = std::map<std::pair<std::string, std::string>, std::vector<int>>;

  TruncatedNet(Poset poset, const std::map<std::string, int>& dims, const GammaSpec& gamma_in,
               int path_budget, int cert_max_len = 3) {
    auto core = std::make_shared<Core>(std::move(poset), cert_max_len);
    const Poset& p = core->poset;
    core->L = path_budget;
    if (path_budget < 0) fail(ErrorCode::input_error, "path budget must be nonnegative");
    core->dims.assign(static_cast<std::size_t>(p.size()), 0);
    for (const auto& [label, d] : dims) {
      if (d <= 0) fail(ErrorCode::input_error, "dimension at " + label + " must be positive");
      core->dims[static_cast<std::size_t>(p.id_of(label))] = d;
    }
    for (int i = 0; i < p.size(); ++i)
      if (core->dims[static_cast<std::size_t>(i)] == 0)
        fail(ErrorCode::input_error, "missing dimension for element " + p.label(i));
    resolve_gammas(*core, gamma_in);
    validate_gammas(*core);
    build_bases(*core);
    core_ = std::move(core);
  }

  const Poset& poset() const { return core_->poset; }
  const PathContext& ctx() const { return core_->ctx; }
  const EquivalenceDecider& decider() const { return core_->decider; }
  int L() const { return core_->L; }
  int dim(int site) const { return core_->dims[static_cast<std::size_t>(site)]; }
  bool canonical_complete() const { return core_->ctx.canonical_complete(); }

  const IndexMap& gamma(int a, int b) const {
    auto it = core_->gamma.find({a, b});
    if (it == core_->gamma.end())
      fail(ErrorCode::not_comparable,
           poset().label(a) + " <= " + poset().label(b) + " does not hold");
    return it->second;
  }

  /// Canonical path classes ending at the site, representative length <= L.
  const std::vector<PathClass>& site_paths(int site) const {
    return core_->site_paths[static_cast<std::size_t>(site)];
  }

  std::vector<std::pair<int, int>> strict_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < poset().size(); ++a)
      for (int b = 0; b < poset().size(); ++b)
        if (a != b && poset().leq(a, b)) out.emplace_back(a, b);
    return out;
  }

 private:
  struct Core {
    Poset poset;
    PathContext ctx;
    EquivalenceDecider decider;
    std::vector<int> dims;
    std::map<std::pair<int, int>, IndexMap> gamma;
    int L = 0;
    std::vector<std::vector<PathClass>> site_paths;

    Core(Poset p, int cert_max_len)
        : poset(std::move(p)), ctx(poset, cert_max_len), decider(ctx) {}
  };

  static void resolve_gammas(Core& core, const GammaSpec& given) {
    const Poset& p = core.poset;
    for (int a = 0; a < p.size(); ++a)
      core.gamma[{a, a}] = IndexMap::identity(core.dims[static_cast<std::size_t>(a)]);
    std::vector<std::pair<int, int>> pending;
    for (int a = 0; a < p.size(); ++a)
      for (int b = 0; b < p.size(); ++b) {
        if (a == b || !p.leq(a, b)) continue;
        auto it = given.find({p.label(a), p.label(b)});
        if (it != given.end()) {
          const auto& image = it->second;
          IndexMap m{core.dims[static_cast<std::size_t>(a)], core.dims[static_cast<std::size_t>(b)], image};
          if (static_cast<int>(image.size()) != m.from_dim)
            fail(ErrorCode::input_error, "gamma image size mismatch at " + p.label(a) + "<=" + p.label(b));
          if (!m.total() || !m.injective())
            fail(ErrorCode::input_error, "gamma must be a total injection at " + p.label(a) + "<=" + p.label(b));
          core.gamma[{a, b}] = std::move(m);
        } else {
          pending.emplace_back(a, b);
        }
      }
    for (const auto& [key, image] : given) {
      (void)image;
      int a = p.id_of(key.first), b = p.id_of(key.second);
      if (a == b || !p.leq(a, b))
        fail(ErrorCode::input_error,
             "gamma given for non-comparable pair " + key.first + "<=" + key.second);
    }
    // Derive what composition determines; default to identity on equal dims.
    bool progress = true;
    while (progress && !pending.empty()) {
      progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        auto [a, b] = *it;
        std::optional<IndexMap> derived;
        for (int m = 0; m < p.size(); ++m) {
          if (m == a || m == b || !p.leq(a, m) || !p.leq(m, b)) continue;
          auto lo = core.gamma.find({a, m});
          auto hi = core.gamma.find({m, b});
          if (lo == core.gamma.end() || hi == core.gamma.end()) continue;
          IndexMap comp = hi->second.after(lo->second);
          if (derived && !(*derived == comp))
            fail(ErrorCode::input_error, "inconsistent derived gamma at " + p.label(a) + "<=" + p.label(b));
          derived = std::move(comp);
        }
        if (derived) {
          core.gamma[{a, b}] = std::move(*derived);
          it = pending.erase(it);
          progress = true;
        } else {
          ++it;
        }
      }
    }
    for (auto [a, b] : pending) {
      if (core.dims[static_cast<std::size_t>(a)] == core.dims[static_cast<std::size_t>(b)])
        core.gamma[{a, b}] = IndexMap::identity(core.dims[static_cast<std::size_t>(a)]);
      else
        fail(ErrorCode::input_error,
             "gamma missing for " + p.label(a) + "<=" + p.label(b) + " and not derivable");
    }
  }

  static void validate_gammas(Core& core) {
    const Poset& p = core.poset;
    for (int a = 0; a < p.size(); ++a)
      for (int b = 0; b < p.size(); ++b) {
        if (!p.leq(a, b)) continue;
        for (int c = 0; c < p.size(); ++c) {
          if (!p.leq(b, c)) continue;
          const IndexMap& direct = core.gamma.at({a, c});
          IndexMap composed = core.gamma.at({b, c}).after(core.gamma.at({a, b}));
          if (!(direct == composed))
            fail(ErrorCode::input_error,
                 "gamma composition law fails along " + p.label(a) + "<=" + p.label(b) + "<=" + p.label(c));
        }
      }
  }

  static void build_bases(Core& core) {
    const Poset& p = core.poset;
    core.site_paths.resize(static_cast<std::size_t>(p.size()));
    for (int site = 0; site < p.size(); ++site) {
      std::set<PathClass> classes;
      classes.insert(make_class(core.ctx, PathSeq{{step_trivial(site)}}));
      if (core.ctx.strategy() == CanonStrategy::DirectedEndpoint) {
        for (int x = 0; x < p.size(); ++x) {
          if (x == site) continue;
          PathClass c{false, core.ctx.endpoint_canonical(x, site)};
          if (c.word_len() <= core.L) classes.insert(c);
        }
      } else {
        // Irreducible moving words ending at the site, front-extended.
        Word word;
        collect_irreducible(core, site, site, core.L, word, classes);
      }
      auto& out = core.site_paths[static_cast<std::size_t>(site)];
      out.assign(classes.begin(), classes.end());
      std::sort(out.begin(), out.end(), [](const PathClass& a, const PathClass& b) {
        if (a.word_len() != b.word_len()) return a.word_len() < b.word_len();
        return a < b;
      });
    }
  }

  static void collect_irreducible(Core& core, int site, int front, int remaining, Word& word,
                                  std::set<PathClass>& classes) {
    if (remaining == 0) return;
    const Poset& p = core.poset;
    for (int x = 0; x < p.size(); ++x) {
      if (x == front || !p.comparable(x, front)) continue;
      Step s = direct_step(p, x, front);
      if (!word.empty() && detail::combine(p, s, word.front())) continue;  // keep words irreducible
      word.insert(word.begin(), s);
      PathClass c = make_class(core.ctx, PathSeq{word});
      if (c.word_len() <= core.L) classes.insert(c);
      collect_irreducible(core, site, x, remaining - 1, word, classes);
      word.erase(word.begin());
    }
  }

  std::shared_ptr<const Core> core_;
};

// ---------------------------------------------------------------------------
// Basis vectors and the chi calculus
// ---------------------------------------------------------------------------

/// One basis line of the truncated total space: site, H_a index, path index.
struct BasisVector {
  int site = 0;
  int h = 0;
  PathClass path;

  friend bool operator==(const BasisVector&, const BasisVector&) = default;
  friend auto operator<=>(const BasisVector&, const BasisVector&) = default;
};

/// All basis vectors of one site slice.
inline std::vector<BasisVector> site_basis(const TruncatedNet& net, int site) {
  std::vector<BasisVector> out;
  for (const PathClass& c : net.site_paths(site))
    for (int h = 0; h < net.dim(site); ++h) out.push_back({site, h, c});
  return out;
}

inline std::vector<BasisVector> full_basis(const TruncatedNet& net) {
  std::vector<BasisVector> out;
  for (int site = 0; site < net.poset().size(); ++site) {
    auto s = site_basis(net, site);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

/// A scaled-basis-to-basis partial map: the operator chi_w restricted on the
/// H-factor. `word` is the canonical class of the generating sequence, `hmap`
/// the index action (a restriction of the full transport of the sequence).
struct ChiTerm {
  PathClass word;
  IndexMap hmap;

  int start_site() const { return word.start(); }
  int end_site() const { return word.end(); }

  friend bool operator==(const ChiTerm&, const ChiTerm&) = default;
  friend auto operator<=>(const ChiTerm&, const ChiTerm&) = default;
};

enum class OutcomeKind { Hit, Zero, OutOfRange };

/// Applying a term to a basis vector: a basis image, a genuine kill, or an
/// image beyond the truncation budget. The last is not zero; identities are
/// only asserted where no operand runs out of range.
struct Outcome {
  OutcomeKind kind = OutcomeKind::Zero;
  BasisVector vec;
};

inline Outcome apply_term(const TruncatedNet& net, const ChiTerm& t, const BasisVector& v) {
  if (t.word.zero) return {OutcomeKind::Zero, {}};
  if (v.site != t.start_site()) return {OutcomeKind::Zero, {}};
  if (!t.hmap.defined(v.h)) return {OutcomeKind::Zero, {}};
  PathClass moved = concat(net.ctx(), t.word, v.path);
  if (moved.zero) fail(ErrorCode::internal_error, "non-composable path transport");
  if (moved.word_len() > net.L()) return {OutcomeKind::OutOfRange, {}};
  return {OutcomeKind::Hit, BasisVector{t.end_site(), t.hmap(v.h), std::move(moved)}};
}

/// chi for a single comparable pair; starred gives the adjoint step.
inline ChiTerm chi_step(const TruncatedNet& net, int a, int b, bool starred = false) {
  const Poset& p = net.poset();
  if (!p.leq(a, b))
    fail(ErrorCode::not_comparable, p.label(a) + " <= " + p.label(b) + " does not hold");
  if (a == b) return {trivial_class(a), IndexMap::identity(net.dim(a))};
  if (!starred) return {make_class(net.ctx(), PathSeq{{step_up(p, a, b)}}), net.gamma(a, b)};
  return {make_class(net.ctx(), PathSeq{{step_down(p, a, b)}}), net.gamma(a, b).inverse()};
}

/// Index transport along a raw sequence: embeddings forward on ascents,
/// partial inverses on descents. Depends on the sequence, not its class.
inline IndexMap sequence_hmap(const TruncatedNet& net, const PathSeq& seq) {
  IndexMap cur = IndexMap::identity(net.dim(seq.start()));
  for (const Step& s : seq.steps) {
    if (s.trivial()) continue;
    if (s.kind == StepKind::Up)
      cur = net.gamma(s.lo, s.hi).after(cur);
    else
      cur = net.gamma(s.lo, s.hi).inverse().after(cur);
  }
  return cur;
}

inline ChiTerm chi_seq(const TruncatedNet& net, const PathSeq& seq) {
  validate_word(net.poset(), seq.steps);
  return {make_class(net.ctx(), seq), sequence_hmap(net, seq)};
}

inline ChiTerm adjoint_term(const TruncatedNet& net, const ChiTerm& t) {
  return {inverse_class(net.ctx(), t.word), t.hmap.inverse()};
}

/// f after g, or nothing when the product is zero.
inline std::optional<ChiTerm> compose_terms(const TruncatedNet& net, const ChiTerm& f,
                                            const ChiTerm& g) {
  if (f.word.zero || g.word.zero) return std::nullopt;
  if (f.start_site() != g.end_site()) return std::nullopt;
  PathClass word = concat(net.ctx(), f.word, g.word);
  IndexMap hmap = f.hmap.after(g.hmap);
  if (hmap.empty()) return std::nullopt;
  return ChiTerm{std::move(word), std::move(hmap)};
}

/// Subspace of one site on which a sequence acts without killing.
struct DomainSubspace {
  int site = 0;
  std::vector<int> indices;

  friend bool operator==(const DomainSubspace&, const DomainSubspace&) = default;
};

inline DomainSubspace domain_of(const TruncatedNet& net, const PathSeq& seq) {
  return {seq.start(), sequence_hmap(net, seq).domain()};
}

// ---------------------------------------------------------------------------
// Exact finite sums of terms
// ---------------------------------------------------------------------------

class OperatorSum {
 public:
  OperatorSum() = default;

  static OperatorSum of(const ChiTerm& t, const Rat& coeff = Rat(1)) {
    OperatorSum s;
    s.add(t, coeff);
    return s;
  }

  void add(const ChiTerm& t, const Rat& coeff) {
    if (coeff == Rat(0) || t.hmap.empty() || t.word.zero) return;
    auto it = terms_.find(t);
    if (it == terms_.end()) {
      terms_.emplace(t, coeff);
    } else {
      it->second += coeff;
      if (it->second == Rat(0)) terms_.erase(it);
    }
  }

  void add(const OperatorSum& other, const Rat& scale = Rat(1)) {
    for (const auto& [t, c] : other.terms_) add(t, c * scale);
  }

  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<ChiTerm, Rat>& terms() const { return terms_; }

  friend bool operator==(const OperatorSum&, const OperatorSum&) = default;

 private:
  std::map<ChiTerm, Rat> terms_;
};

inline OperatorSum operator+(const OperatorSum& a, const OperatorSum& b) {
  OperatorSum out = a;
  out.add(b);
  return out;
}

inline OperatorSum scaled(const OperatorSum& a, const Rat& c) {
  OperatorSum out;
  out.add(a, c);
  return out;
}

inline OperatorSum multiply(const TruncatedNet& net, const OperatorSum& x, const OperatorSum& y) {
  OperatorSum out;
  for (const auto& [tx, cx] : x.terms())
    for (const auto& [ty, cy] : y.terms())
      if (auto t = compose_terms(net, tx, ty)) out.add(*t, cx * cy);
  return out;
}

inline OperatorSum adjoint(const TruncatedNet& net, const OperatorSum& x) {
  OperatorSum out;
  for (const auto& [t, c] : x.terms()) out.add(adjoint_term(net, t), c);
  return out;
}

/// Value of a sum on one basis vector: a finite combination, or tainted when
/// any term runs beyond the truncation.
struct ApplyResult {
  bool tainted = false;
  std::map<BasisVector, Rat> out;
};

inline ApplyResult apply_sum(const TruncatedNet& net, const OperatorSum& x, const BasisVector& v) {
  ApplyResult r;
  for (const auto& [t, c] : x.terms()) {
    Outcome o = apply_term(net, t, v);
    switch (o.kind) {
      case OutcomeKind::Zero:
        break;
      case OutcomeKind::OutOfRange:
        r.tainted = true;
        return r;
      case OutcomeKind::Hit: {
        auto it = r.out.find(o.vec);
        if (it == r.out.end()) {
          r.out.emplace(o.vec, c);
        } else {
          it->second += c;
          if (it->second == Rat(0)) r.out.erase(it);
        }
        break;
      }
    }
  }
  return r;
}

/// Exact action comparison over every basis vector on which both sides are
/// fully inside the truncation; out-of-range inputs are skipped and counted.
struct ActionComparison {
  bool equal = true;
  long checked = 0;
  long skipped = 0;
  std::string witness;
};

inline ActionComparison compare_actions(const TruncatedNet& net, const OperatorSum& x,
                                        const OperatorSum& y) {
  ActionComparison cmp;
  for (const BasisVector& v : full_basis(net)) {
    ApplyResult rx = apply_sum(net, x, v);
    ApplyResult ry = apply_sum(net, y, v);
    if (rx.tainted || ry.tainted) {
      ++cmp.skipped;
      continue;
    }
    ++cmp.checked;
    if (rx.out != ry.out && cmp.equal) {
      cmp.equal = false;
      cmp.witness = "site " + net.poset().label(v.site) + ", h=" + std::to_string(v.h) +
                    ", path " + print_path(net.poset(), v.path.repr);
    }
  }
  return cmp;
}

inline bool action_is_zero(const TruncatedNet& net, const OperatorSum& x) {
  return compare_actions(net, x, OperatorSum()).equal;
}

// ---------------------------------------------------------------------------
// Structure verification sweeps
// ---------------------------------------------------------------------------

/// The four composition and isometry laws of the step operators, exact over
/// all in-budget basis vectors.
inline Report verify_chi_laws(const TruncatedNet& net) {
  Report rep;
  rep.title = "chi_laws";
  const Poset& p = net.poset();
  auto name = [&](const std::string& what, int a, int b, int c = -1) {
    std::string s = what + "[" + p.label(a) + "<=" + p.label(b);
    if (c >= 0) s += "<=" + p.label(c);
    return s + "]";
  };
  for (auto [a, b] : net.strict_pairs()) {
    OperatorSum chi = OperatorSum::of(chi_step(net, a, b));
    OperatorSum chi_star = OperatorSum::of(chi_step(net, a, b, true));
    {
      // star(chi) chi is the identity on the lower slice
      OperatorSum lhs = multiply(net, chi_star, chi);
      OperatorSum rhs = OperatorSum::of({trivial_class(a), IndexMap::identity(net.dim(a))});
      auto cmp = compare_actions(net, lhs, rhs);
      rep.add(name("isometry", a, b), cmp.equal, cmp.witness);
    }
    {
      // chi star(chi) projects onto the embedded image inside the upper slice
      OperatorSum lhs = multiply(net, chi, chi_star);
      IndexMap proj = net.gamma(a, b).after(net.gamma(a, b).inverse());
      OperatorSum rhs = OperatorSum::of({trivial_class(b), proj});
      auto cmp = compare_actions(net, lhs, rhs);
      rep.add(name("range_projection", a, b), cmp.equal, cmp.witness);
    }
    for (int c = 0; c < p.size(); ++c) {
      if (c == b || !p.leq(b, c)) continue;
      {
        OperatorSum lhs = OperatorSum::of(chi_step(net, a, c));
        OperatorSum rhs =
            multiply(net, OperatorSum::of(chi_step(net, b, c)), OperatorSum::of(chi_step(net, a, b)));
        auto cmp = compare_actions(net, lhs, rhs);
        rep.add(name("compose", a, b, c), cmp.equal, cmp.witness);
      }
      {
        OperatorSum lhs = OperatorSum::of(chi_step(net, a, c, true));
        OperatorSum rhs = multiply(net, OperatorSum::of(chi_step(net, a, b, true)),
                                   OperatorSum::of(chi_step(net, b, c, true)));
        auto cmp = compare_actions(net, lhs, rhs);
        rep.add(name("compose_star", a, b, c), cmp.equal, cmp.witness);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cycles: loops acting as partial isometries
// ---------------------------------------------------------------------------

struct CycleClassification {
  EquivResult trivial_decision = EquivResult::Unknown;
  bool trivial = false;
  bool projection_form = false;  // verified Q (x) I shape, when trivial
  int domain_dim = 0;            // always finite at this truncation
  bool nilpotent = false;
  int nilpotency_power = 0;  // least m with the m-th power zero, when nilpotent
};

inline CycleClassification cycle_classify(const TruncatedNet& net, const PathSeq& loop,
                                          int budget = 100000) {
  if (!loop.is_loop()) fail(ErrorCode::not_a_loop, "cycle classification needs a loop");
  CycleClassification out;
  ChiTerm t = chi_seq(net, loop);
  int base = loop.start();
  out.trivial_decision =
      net.decider().decide(t.word, trivial_class(base), budget);
  out.trivial = out.trivial_decision == EquivResult::Yes;
  out.domain_dim = t.hmap.domain_size();
  if (out.trivial) {
    bool diag = t.hmap.sub_identity();
    if (diag) {
      OperatorSum proj = OperatorSum::of({trivial_class(base), t.hmap});
      diag = compare_actions(net, OperatorSum::of(t), proj).equal;
    }
    out.projection_form = diag;
  }
  IndexMap power = t.hmap;
  int prev = power.domain_size();
  for (int m = 1; m <= net.dim(base) + 1; ++m) {
    if (power.empty()) {
      out.nilpotent = true;
      out.nilpotency_power = m;
      break;
    }
    power = t.hmap.after(power);
    int cur = power.domain_size();
    if (m > 1 && cur == prev) break;  // stabilized nonempty: never nilpotent
    prev = cur;
  }
  return out;
}

namespace detail {

inline void require_equivalent_loops(const TruncatedNet& net, const ChiTerm& x, const ChiTerm& y,
                                     int budget) {
  if (x.word.zero || y.word.zero || !x.word.repr.is_loop() || !y.word.repr.is_loop())
    fail(ErrorCode::not_a_loop, "cycle operations need loops");
  EquivResult r = net.decider().decide(x.word, y.word, budget);
  if (r != EquivResult::Yes)
    fail(ErrorCode::not_comparable_cycles,
         std::string("underlying loops not known equivalent (") + posetnet::to_string(r) + ")");
}

}  // namespace detail

/// Domain order on cycles over equivalent loops.
inline bool cycle_order_leq(const TruncatedNet& net, const ChiTerm& x, const ChiTerm& y,
                            int budget = 100000) {
  detail::require_equivalent_loops(net, x, y, budget);
  for (int i : x.hmap.domain())
    if (!y.hmap.defined(i)) return false;
  return true;
}

/// Join of two cycles over equivalent loops: the second contributes only the
/// part of its domain the first does not cover.
inline OperatorSum cycle_join(const TruncatedNet& net, const ChiTerm& x, const ChiTerm& y,
                              int budget = 100000) {
  detail::require_equivalent_loops(net, x, y, budget);
  OperatorSum out = OperatorSum::of(x);
  std::set<int> fresh;
  for (int i : y.hmap.domain())
    if (!x.hmap.defined(i)) fresh.insert(i);
  if (!fresh.empty()) out.add({y.word, y.hmap.restricted(fresh)}, Rat(1));
  return out;
}

/// Join over every representative of the loop class with representative
/// length within the budget. Requires complete canonical forms so that class
/// membership is decidable.
inline OperatorSum p_cycle(const TruncatedNet& net, const PathClass& p, int len_budget,
                           int equiv_budget = 100000) {
  if (p.zero || !p.repr.is_loop()) fail(ErrorCode::not_a_loop, "p-cycles are indexed by loop classes");
  if (!net.canonical_complete())
    fail(ErrorCode::not_certified,
         "class membership is only enumerable with complete canonical forms");
  int base = p.start();
  // Members with trivial steps transport indices identically to the same
  // member with the trivial steps dropped, so moving-step words suffice.
  std::vector<PathSeq> members;
  PathSeq triv{{step_trivial(base)}};
  if (net.decider().decide(triv, p.repr, equiv_budget) == EquivResult::Yes) members.push_back(triv);
  std::vector<Word> frontier{{}};
  for (int len = 1; len <= len_budget; ++len) {
    std::vector<Word> next;
    for (const auto& w : frontier) {
      int at = w.empty() ? base : w.back().end();
      for (int y = 0; y < net.poset().size(); ++y) {
        if (y == at || !net.poset().comparable(at, y)) continue;
        Word nw = w;
        nw.push_back(direct_step(net.poset(), at, y));
        if (y == base &&
            net.decider().decide(PathSeq{nw}, p.repr, equiv_budget) == EquivResult::Yes)
          members.push_back(PathSeq{nw});
        next.push_back(std::move(nw));
      }
    }
    frontier = std::move(next);
  }
  OperatorSum out;
  std::set<int> covered;
  for (const PathSeq& m : members) {
    ChiTerm t = chi_seq(net, m);
    std::set<int> fresh;
    for (int i : t.hmap.domain())
      if (!covered.count(i)) fresh.insert(i);
    if (fresh.empty()) continue;
    covered.insert(fresh.begin(), fresh.end());
    out.add({t.word, t.hmap.restricted(fresh)}, Rat(1));
  }
  return out;
}

/// Domain projection indicator of a p-cycle or single cycle sum (the
/// diagonal of star(x) x).
inline std::set<int> cycle_domain(const TruncatedNet& net, const OperatorSum& x) {
  std::set<int> dom;
  for (const auto& [t, c] : x.terms())
    for (int i : t.hmap.domain()) dom.insert(i);
  (void)net;
  return dom;
}

}  // namespace posetnet
