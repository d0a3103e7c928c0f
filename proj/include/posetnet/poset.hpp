#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "posetnet/error.hpp"

namespace posetnet {

using Mask = std::uint64_t;

/// Finite partially ordered set over string labels.
///
/// Elements get dense ids in sorted-label order; the relation is kept as the
/// reflexive-transitive closure of the supplied pairs, as bitmask rows.
/// Construction rejects closures that violate antisymmetry.
class Poset {
 public:
  Poset(std::vector<std::string> elements,
        const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::sort(elements.begin(), elements.end());
    for (std::size_t i = 0; i + 1 < elements.size(); ++i)
      if (elements[i] == elements[i + 1])
        fail(ErrorCode::duplicate_label, "element '" + elements[i] + "' listed twice");
    if (elements.size() > 64)
      fail(ErrorCode::size_bound, "at most 64 elements supported");
    labels_ = std::move(elements);
    const int n = size();
    up_.assign(n, 0);
    for (int i = 0; i < n; ++i) up_[i] |= bit(i);
    for (const auto& [a, b] : pairs) up_[id_of(a)] |= bit(id_of(b));
    // Warshall closure on the bitmask rows.
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        if (up_[i] & bit(k)) up_[i] |= up_[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && leq(i, j) && leq(j, i))
          fail(ErrorCode::antisymmetry_violation,
               labels_[i] + " <= " + labels_[j] + " and " + labels_[j] + " <= " + labels_[i]);
    down_.assign(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (leq(j, i)) down_[i] |= bit(j);
  }

  int size() const { return static_cast<int>(labels_.size()); }

  const std::string& label(int id) const { return labels_[static_cast<std::size_t>(id)]; }
  const std::vector<std::string>& labels() const { return labels_; }

  int id_of(const std::string& label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label)
      fail(ErrorCode::unknown_element, "no element '" + label + "'");
    return static_cast<int>(it - labels_.begin());
  }

  bool contains(const std::string& label) const {
    return std::binary_search(labels_.begin(), labels_.end(), label);
  }

  bool leq(int a, int b) const { return (up_[a] & bit(b)) != 0; }
  bool comparable(int a, int b) const { return leq(a, b) || leq(b, a); }

  Mask up_mask(int a) const { return up_[a]; }
  Mask down_mask(int a) const { return down_[a]; }
  Mask comp_mask(int a) const { return (up_[a] | down_[a]) & ~bit(a); }
  Mask all_mask() const { return size() == 64 ? ~Mask(0) : (bit(size()) - 1); }

  static Mask bit(int i) { return Mask(1) << i; }

  Mask mask_of(const std::vector<std::string>& subset) const {
    Mask m = 0;
    for (const auto& s : subset) m |= bit(id_of(s));
    return m;
  }

  std::vector<std::string> labels_of(Mask m) const {
    std::vector<std::string> out;
    for (int i = 0; i < size(); ++i)
      if (m & bit(i)) out.push_back(labels_[i]);
    return out;
  }

  /// True iff every pair in `sub` has an upper bound inside `sub`.
  /// The empty set is vacuously directed.
  bool is_upward_directed(Mask sub) const {
    for (int i = 0; i < size(); ++i) {
      if (!(sub & bit(i))) continue;
      for (int j = i; j < size(); ++j) {
        if (!(sub & bit(j))) continue;
        if ((up_[i] & up_[j] & sub) == 0) return false;
      }
    }
    return true;
  }

  bool is_upward_directed(const std::vector<std::string>& sub) const {
    return is_upward_directed(mask_of(sub));
  }

  bool is_upward_directed() const { return is_upward_directed(all_mask()); }

  /// Connectivity of the comparability graph.
  bool is_path_connected() const {
    const int n = size();
    if (n <= 1) return true;
    Mask seen = bit(0);
    Mask frontier = bit(0);
    while (frontier) {
      Mask next = 0;
      for (int i = 0; i < n; ++i)
        if (frontier & bit(i)) next |= comp_mask(i);
      frontier = next & ~seen;
      seen |= next;
    }
    return seen == all_mask();
  }

  /// All unordered pairs {a,b}, a != b, with a and b comparable.
  std::vector<std::pair<std::string, std::string>> comparability_edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (comparable(i, j)) out.emplace_back(labels_[i], labels_[j]);
    return out;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Mask> up_;
  std::vector<Mask> down_;
};

inline Poset build_poset(std::vector<std::string> elements,
                         const std::vector<std::pair<std::string, std::string>>& pairs) {
  return Poset(std::move(elements), pairs);
}

/// The maximal upward directed subsets of the ground set, order-normalized.
struct DirectedDecomposition {
  std::vector<std::vector<std::string>> blocks;
};

/// Every finite upward directed subset has a greatest element, so the maximal
/// directed subsets are exactly the maximal principal downsets. The size
/// bound is kept as a contract guard for callers that configure one.
inline DirectedDecomposition maximal_directed_subsets(const Poset& p, int size_bound = 20) {
  if (p.size() > size_bound)
    fail(ErrorCode::size_bound,
         "poset has " + std::to_string(p.size()) + " elements, bound is " + std::to_string(size_bound));
  std::vector<Mask> candidates;
  for (int m = 0; m < p.size(); ++m) candidates.push_back(p.down_mask(m));
  std::vector<Mask> maximal;
  for (Mask c : candidates) {
    bool dominated = false;
    for (Mask d : candidates)
      if (c != d && (c & d) == c) { dominated = true; break; }
    if (!dominated && std::find(maximal.begin(), maximal.end(), c) == maximal.end())
      maximal.push_back(c);
  }
  DirectedDecomposition dec;
  for (Mask m : maximal) dec.blocks.push_back(p.labels_of(m));
  std::sort(dec.blocks.begin(), dec.blocks.end());
  return dec;
}

}  // namespace posetnet
