//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "molforge/mol.hpp"

namespace molforge {

namespace detail {

// Bond token for canonical invariants. Aromatic bonds keep their own
// token so canonical forms do not depend on the (arbitrary) kekule
// assignment chosen for an aromatic ring.
inline int canon_bond_token(const Bond& b) {
  return static_cast<int>(b.order);
}

inline std::vector<int> initial_ranks(const Molecule& m) {
  const size_t n = m.atom_count();
  // Invariant tuple: element, charge, degree, hydrogen count, ring flag.
  std::vector<std::array<int, 5>> keys(n);
  for (size_t i = 0; i < n; ++i) {
    const Atom& a = m.atom(static_cast<int>(i));
    keys[i] = {a.element, a.formal_charge, m.degree(static_cast<int>(i)), a.hydrogens,
               a.in_ring ? 1 : 0};
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return keys[static_cast<size_t>(x)] < keys[static_cast<size_t>(y)];
  });
  std::vector<int> out(n);
  int rank = 0;
  for (size_t k = 0; k < n; ++k) {
    if (k > 0 && keys[static_cast<size_t>(order[k])] != keys[static_cast<size_t>(order[k - 1])])
      ++rank;
    out[static_cast<size_t>(order[k])] = rank;
  }
  return out;
}

// Iterative neighborhood refinement: re-key each atom by its own rank
// plus the sorted multiset of (neighbor rank, bond token) until the
// partition stabilizes.
inline void refine_ranks(const Molecule& m, std::vector<int>& ranks) {
  const size_t n = m.atom_count();
  if (n == 0) return;
  using Key = std::pair<int, std::vector<std::pair<int, int>>>;
  std::vector<Key> keys(n);
  std::vector<int> order(n);
  while (true) {
    for (size_t i = 0; i < n; ++i) {
      keys[i].first = ranks[i];
      keys[i].second.clear();
      for (int bi : m.incident_bonds(static_cast<int>(i))) {
        const Bond& b = m.bond(bi);
        keys[i].second.push_back({ranks[static_cast<size_t>(b.other(static_cast<int>(i)))],
                                  canon_bond_token(b)});
      }
      std::sort(keys[i].second.begin(), keys[i].second.end());
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return keys[static_cast<size_t>(x)] < keys[static_cast<size_t>(y)];
    });
    std::vector<int> next(n);
    int rank = 0;
    for (size_t k = 0; k < n; ++k) {
      if (k > 0 && keys[static_cast<size_t>(order[k])] != keys[static_cast<size_t>(order[k - 1])])
        ++rank;
      next[static_cast<size_t>(order[k])] = rank;
    }
    if (next == ranks) return;
    ranks = std::move(next);
  }
}

// Chirality token in the rank frame: the stored parity re-expressed
// against neighbors ordered by rank instead of by atom index.
inline int parity_token(const Molecule& m, int atom, const std::vector<int>& ranks) {
  const Atom& a = m.atom(atom);
  if (a.chirality == Chirality::None) return 0;
  auto nbrs = m.neighbors(atom);
  std::vector<int> by_index = nbrs;
  std::sort(by_index.begin(), by_index.end());
  std::vector<int> by_rank = nbrs;
  std::sort(by_rank.begin(), by_rank.end(), [&](int x, int y) {
    return ranks[static_cast<size_t>(x)] < ranks[static_cast<size_t>(y)];
  });
  std::vector<int> rel(by_index.size());
  for (size_t k = 0; k < by_index.size(); ++k) {
    auto it = std::find(by_rank.begin(), by_rank.end(), by_index[k]);
    rel[k] = static_cast<int>(it - by_rank.begin());
  }
  int swaps = 0;
  for (size_t i = 0; i < rel.size(); ++i) {
    while (rel[i] != static_cast<int>(i)) {
      std::swap(rel[i], rel[static_cast<size_t>(rel[i])]);
      ++swaps;
    }
  }
  Chirality c = (swaps % 2 == 1) ? flip(a.chirality) : a.chirality;
  return c == Chirality::CW ? 1 : 2;
}

// Canonical trace of a complete (bijective) ranking: a flat integer
// sequence whose lexicographic order is used to settle symmetry ties.
inline std::vector<int64_t> canon_trace(const Molecule& m, const std::vector<int>& ranks) {
  const size_t n = m.atom_count();
  std::vector<int> atom_at(n);
  for (size_t i = 0; i < n; ++i) atom_at[static_cast<size_t>(ranks[i])] = static_cast<int>(i);
  std::vector<int64_t> trace;
  trace.reserve(n * 10);
  for (size_t r = 0; r < n; ++r) {
    int i = atom_at[r];
    const Atom& a = m.atom(i);
    trace.push_back(a.element);
    trace.push_back(a.formal_charge);
    trace.push_back(a.hydrogens);
    trace.push_back(a.aromatic ? 1 : 0);
    trace.push_back(a.isotope.value_or(0));
    trace.push_back(parity_token(m, i, ranks));
    std::vector<std::pair<int, int>> nb;
    for (int bi : m.incident_bonds(i)) {
      const Bond& b = m.bond(bi);
      nb.push_back({ranks[static_cast<size_t>(b.other(i))], canon_bond_token(b)});
    }
    std::sort(nb.begin(), nb.end());
    trace.push_back(static_cast<int64_t>(nb.size()));
    for (auto [nr, bt] : nb) {
      trace.push_back(nr);
      trace.push_back(bt);
    }
  }
  return trace;
}

struct CanonResult {
  std::vector<int> ranks;
  std::vector<int64_t> trace;
};

// Individualization-refinement: branch over every member of the first
// tied cell and keep the branch with the smallest trace. Complete ties
// within a refined cell are almost always automorphic for chemical
// graphs, so the branching factor stays small.
inline CanonResult resolve_ties(const Molecule& m, std::vector<int> ranks) {
  const size_t n = m.atom_count();
  // Locate the lowest tied rank.
  std::vector<int> count(n, 0);
  for (int r : ranks) ++count[static_cast<size_t>(r)];
  int tied_rank = -1;
  for (size_t r = 0; r < n; ++r) {
    if (count[r] > 1) {
      tied_rank = static_cast<int>(r);
      break;
    }
  }
  if (tied_rank < 0) return {ranks, canon_trace(m, ranks)};

  std::optional<CanonResult> best;
  for (size_t i = 0; i < n; ++i) {
    if (ranks[i] != tied_rank) continue;
    std::vector<int> split = ranks;
    for (size_t j = 0; j < n; ++j) {
      if (split[j] > tied_rank || (split[j] == tied_rank && j != i)) ++split[j];
    }
    refine_ranks(m, split);
    CanonResult cand = resolve_ties(m, std::move(split));
    if (!best || cand.trace < best->trace) best = std::move(cand);
  }
  return *best;
}

}  // namespace detail

// Canonical atom ranks: a permutation of 0..n-1 invariant under any
// relabeling of the input atoms. Ties after neighborhood refinement are
// broken by exploring each candidate individualization and keeping the
// lexicographically smallest canonical trace.
inline std::vector<int> canonical_ranks(const Molecule& m) {
  if (m.empty()) return {};
  std::vector<int> ranks = detail::initial_ranks(m);
  detail::refine_ranks(m, ranks);
  return detail::resolve_ties(m, std::move(ranks)).ranks;
}

}  // namespace molforge
