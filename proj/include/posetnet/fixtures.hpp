#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "posetnet/net_hilbert.hpp"
#include "posetnet/poset.hpp"

namespace posetnet::fixtures {

// Bundled desk-scale posets. The crowns carry the interesting loops; the
// cone over the crown and the diamond are directed; the tree is the stock
// witness for a non-certifiable rewriting system.

inline Poset chain3() { return build_poset({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}); }

inline Poset antichain2() { return build_poset({"x", "y"}, {}); }

inline Poset crown2() {
  return build_poset({"a1", "a2", "b1", "b2"},
                     {{"a1", "b1"}, {"a1", "b2"}, {"a2", "b1"}, {"a2", "b2"}});
}

inline Poset crown3() {
  return build_poset({"a1", "a2", "a3", "b1", "b2", "b3"},
                     {{"a1", "b1"}, {"a2", "b1"}, {"a2", "b2"}, {"a3", "b2"},
                      {"a3", "b3"}, {"a1", "b3"}});
}

inline Poset crown2_top() {
  return build_poset({"a1", "a2", "b1", "b2", "top"},
                     {{"a1", "b1"}, {"a1", "b2"}, {"a2", "b1"}, {"a2", "b2"},
                      {"b1", "top"}, {"b2", "top"}});
}

inline Poset diamond_chain() {
  return build_poset({"a", "b", "c", "m"}, {{"a", "b"}, {"b", "c"}, {"a", "m"}, {"m", "c"}});
}

inline Poset tree4() {
  return build_poset({"m", "n", "x", "y"}, {{"y", "m"}, {"m", "x"}, {"m", "n"}});
}

// Bundled truncated nets.

/// Chain with growing fibers; the top embedding misses an index.
inline TruncatedNet net_chain3() {
  return TruncatedNet(chain3(), {{"a", 1}, {"b", 2}, {"c", 3}},
                      {{{"a", "b"}, {0}}, {{"b", "c"}, {0, 2}}}, 3);
}

/// Crown with two-dimensional lower fibers embedded non-surjectively into
/// three-dimensional upper fibers.
inline TruncatedNet net_crown2() {
  return TruncatedNet(crown2(), {{"a1", 2}, {"a2", 2}, {"b1", 3}, {"b2", 3}},
                      {{{"a1", "b1"}, {0, 1}},
                       {{"a1", "b2"}, {1, 2}},
                       {{"a2", "b1"}, {1, 2}},
                       {{"a2", "b2"}, {1, 2}}},
                      4);
}

/// Crown with unit fibers and identity embeddings; path budget generous
/// enough to host squared generator words.
inline TruncatedNet net_crown2_unit(int path_budget = 8) {
  return TruncatedNet(crown2(), {{"a1", 1}, {"a2", 1}, {"b1", 1}, {"b2", 1}}, {}, path_budget);
}

inline TruncatedNet net_crown3_unit(int path_budget = 6) {
  return TruncatedNet(crown3(),
                      {{"a1", 1}, {"a2", 1}, {"a3", 1}, {"b1", 1}, {"b2", 1}, {"b3", 1}}, {},
                      path_budget);
}

/// Cone over the crown, unit fibers; upward directed, so canonical forms are
/// endpoint-determined.
inline TruncatedNet net_cone_unit(int path_budget = 8) {
  return TruncatedNet(crown2_top(),
                      {{"a1", 1}, {"a2", 1}, {"b1", 1}, {"b2", 1}, {"top", 1}}, {}, path_budget);
}

/// Every embedding bijective; equivalent sequences then act identically.
inline TruncatedNet net_crown2_bijective(int path_budget = 6) {
  return TruncatedNet(crown2(), {{"a1", 2}, {"a2", 2}, {"b1", 2}, {"b2", 2}}, {}, path_budget);
}

inline std::vector<TruncatedNet> bundled_nets() {
  return {net_chain3(), net_crown2(), net_crown2_unit(), net_cone_unit()};
}

}  // namespace posetnet::fixtures
