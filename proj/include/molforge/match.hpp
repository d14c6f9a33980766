//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "molforge/smarts.hpp"

namespace molforge {

// Injective map from pattern atoms to molecule atoms; every pattern bond
// maps onto a molecule bond satisfying its predicate.
struct Match {
  std::vector<int> mapping;  // pattern atom index -> molecule atom index
};

struct MatchOptions {
  size_t limit = std::numeric_limits<size_t>::max();
  // Deduplicate by mapped atom set (a nitro group fires once per site).
  // Disable to retain every automorphic mapping.
  bool unique_atom_sets = true;
};

namespace detail {

struct Matcher {
  const Pattern& p;
  const Molecule& m;

  std::vector<int> order;        // pattern atoms in match order
  std::vector<int> mapping;      // pattern atom -> molecule atom or -1
  std::vector<char> used;        // molecule atom in use
  std::vector<Match> results;
  size_t enumeration_cap;

  Matcher(const Pattern& pat, const Molecule& mol, size_t cap)
      : p(pat), m(mol), enumeration_cap(cap) {
    mapping.assign(p.atom_count(), -1);
    used.assign(m.atom_count(), 0);
    build_order();
  }

  // Match order: rarest predicate first, then grow through adjacency so
  // every later atom has at least one already-ordered neighbor.
  void build_order() {
    const size_t n = p.atom_count();
    std::vector<int> frequency(n, 0);
    for (size_t pi = 0; pi < n; ++pi)
      for (size_t i = 0; i < m.atom_count(); ++i)
        if (atom_matches(p.atoms[pi], m, static_cast<int>(i))) ++frequency[pi];

    std::vector<char> placed(n, 0);
    int start = 0;
    for (size_t pi = 1; pi < n; ++pi)
      if (frequency[pi] < frequency[static_cast<size_t>(start)]) start = static_cast<int>(pi);
    order.push_back(start);
    placed[static_cast<size_t>(start)] = 1;
    while (order.size() < n) {
      int best = -1;
      for (size_t pi = 0; pi < n; ++pi) {
        if (placed[pi]) continue;
        bool adjacent = false;
        for (int bi : p.adj[pi]) {
          const auto& b = p.bonds[static_cast<size_t>(bi)];
          int other = (b.a == static_cast<int>(pi)) ? b.b : b.a;
          if (placed[static_cast<size_t>(other)]) adjacent = true;
        }
        if (!adjacent) continue;
        if (best < 0 || frequency[pi] < frequency[static_cast<size_t>(best)] ||
            (frequency[pi] == frequency[static_cast<size_t>(best)] && static_cast<int>(pi) < best))
          best = static_cast<int>(pi);
      }
      order.push_back(best);
      placed[static_cast<size_t>(best)] = 1;
    }
  }

  bool feasible(int pa, int ma) const {
    if (used[static_cast<size_t>(ma)]) return false;
    if (!atom_matches(p.atoms[static_cast<size_t>(pa)], m, ma)) return false;
    for (int bi : p.adj[static_cast<size_t>(pa)]) {
      const auto& pb = p.bonds[static_cast<size_t>(bi)];
      int other = (pb.a == pa) ? pb.b : pb.a;
      int mapped = mapping[static_cast<size_t>(other)];
      if (mapped < 0) continue;
      int mb = m.bond_between(ma, mapped);
      if (mb < 0 || !bond_matches(pb.expr, m, mb)) return false;
    }
    return true;
  }

  bool search(size_t depth) {
    if (results.size() >= enumeration_cap) return true;
    if (depth == order.size()) {
      results.push_back({mapping});
      return results.size() >= enumeration_cap;
    }
    int pa = order[depth];

    // candidates: neighbors of an already-mapped pattern neighbor, or
    // every molecule atom for the first position
    std::vector<int> candidates;
    int anchor = -1;
    for (int bi : p.adj[static_cast<size_t>(pa)]) {
      const auto& pb = p.bonds[static_cast<size_t>(bi)];
      int other = (pb.a == pa) ? pb.b : pb.a;
      if (mapping[static_cast<size_t>(other)] >= 0) {
        anchor = mapping[static_cast<size_t>(other)];
        break;
      }
    }
    if (anchor >= 0) {
      candidates = m.neighbors(anchor);
      std::sort(candidates.begin(), candidates.end());
    } else {
      candidates.resize(m.atom_count());
      for (size_t i = 0; i < m.atom_count(); ++i) candidates[i] = static_cast<int>(i);
    }

    for (int ma : candidates) {
      if (!feasible(pa, ma)) continue;
      mapping[static_cast<size_t>(pa)] = ma;
      used[static_cast<size_t>(ma)] = 1;
      bool stop = search(depth + 1);
      mapping[static_cast<size_t>(pa)] = -1;
      used[static_cast<size_t>(ma)] = 0;
      if (stop) return true;
    }
    return false;
  }
};

}  // namespace detail

// All matches of `p` in `m`, deduplicated by mapped atom set by default,
// sorted lexicographically by mapping, truncated to `limit`.
inline std::vector<Match> find_matches(const Pattern& p, const Molecule& m,
                                       const MatchOptions& opts = {}) {
  if (m.empty()) return {};
  // Full enumeration keeps ordering deterministic; has_match uses a cap.
  detail::Matcher matcher(p, m, std::numeric_limits<size_t>::max());
  matcher.search(0);

  auto& all = matcher.results;
  std::sort(all.begin(), all.end(),
            [](const Match& x, const Match& y) { return x.mapping < y.mapping; });

  std::vector<Match> out;
  if (opts.unique_atom_sets) {
    std::set<std::vector<int>> seen;
    for (auto& match : all) {
      std::vector<int> key = match.mapping;
      std::sort(key.begin(), key.end());
      if (seen.insert(std::move(key)).second) out.push_back(std::move(match));
    }
  } else {
    out = std::move(all);
  }
  if (out.size() > opts.limit) out.resize(opts.limit);
  return out;
}

inline bool has_match(const Pattern& p, const Molecule& m) {
  if (m.empty()) return false;
  detail::Matcher matcher(p, m, 1);
  matcher.search(0);
  return !matcher.results.empty();
}

}  // namespace molforge
