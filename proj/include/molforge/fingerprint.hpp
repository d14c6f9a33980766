//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "molforge/mol.hpp"

namespace molforge {

struct WidthMismatch : Error {
  using Error::Error;
};
struct EmptyReferenceSet : Error {
  using Error::Error;
};

// Fixed-width circular-environment bit vector.
class Fingerprint {
 public:
  Fingerprint() = default;
  explicit Fingerprint(size_t width) : width_(width), words_((width + 63) / 64, 0) {}

  size_t width() const { return width_; }
  int popcount() const { return popcount_; }

  void set(size_t bit) {
    uint64_t& w = words_[bit / 64];
    uint64_t mask = uint64_t{1} << (bit % 64);
    if (!(w & mask)) {
      w |= mask;
      ++popcount_;
    }
  }

  bool test(size_t bit) const { return (words_[bit / 64] >> (bit % 64)) & 1; }

  const std::vector<uint64_t>& words() const { return words_; }

  bool operator==(const Fingerprint& o) const {
    return width_ == o.width_ && words_ == o.words_;
  }

  // Hex dump, most-significant word first, fixed width.
  std::string to_hex() const {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(width_ / 4);
    for (size_t w = words_.size(); w-- > 0;) {
      for (int shift = 60; shift >= 0; shift -= 4)
        out += digits[(words_[w] >> shift) & 0xf];
    }
    return out;
  }

  static Fingerprint from_hex(const std::string& hex) {
    Fingerprint fp(hex.size() * 4);
    for (size_t i = 0; i < hex.size(); ++i) {
      char c = hex[hex.size() - 1 - i];
      int v = (c >= '0' && c <= '9')   ? c - '0'
              : (c >= 'a' && c <= 'f') ? c - 'a' + 10
              : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                       : -1;
      if (v < 0) throw Error("bad hex digit in fingerprint");
      for (int b = 0; b < 4; ++b)
        if (v & (1 << b)) fp.set(i * 4 + static_cast<size_t>(b));
    }
    return fp;
  }

 private:
  size_t width_ = 0;
  std::vector<uint64_t> words_;
  int popcount_ = 0;
};

namespace detail {

// splitmix64: stable across platforms and runs.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t value) {
  return mix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

}  // namespace detail

// Raw 64-bit environment hashes for every (atom, level) pair with
// level <= radius. Initial invariant: element, charge, degree, hydrogen
// count, ring flag.
inline std::vector<uint64_t> morgan_environments(const Molecule& m, int radius) {
  const size_t n = m.atom_count();
  std::vector<uint64_t> current(n);
  for (size_t i = 0; i < n; ++i) {
    const Atom& a = m.atom(static_cast<int>(i));
    uint64_t h = detail::mix64(static_cast<uint64_t>(a.element));
    h = detail::hash_combine(h, static_cast<uint64_t>(a.formal_charge + 16));
    h = detail::hash_combine(h, static_cast<uint64_t>(m.degree(static_cast<int>(i))));
    h = detail::hash_combine(h, static_cast<uint64_t>(a.hydrogens));
    h = detail::hash_combine(h, a.in_ring ? 1 : 0);
    current[i] = h;
  }

  std::vector<uint64_t> out = current;
  std::vector<uint64_t> next(n);
  for (int level = 1; level <= radius; ++level) {
    for (size_t i = 0; i < n; ++i) {
      std::vector<std::pair<uint64_t, uint64_t>> env;
      for (int bi : m.incident_bonds(static_cast<int>(i))) {
        const Bond& b = m.bond(bi);
        env.push_back({static_cast<uint64_t>(b.order),
                       current[static_cast<size_t>(b.other(static_cast<int>(i)))]});
      }
      std::sort(env.begin(), env.end());
      uint64_t h = detail::hash_combine(current[i], static_cast<uint64_t>(level));
      for (auto [order, nbr] : env) {
        h = detail::hash_combine(h, order);
        h = detail::hash_combine(h, nbr);
      }
      next[i] = h;
    }
    current = next;
    out.insert(out.end(), current.begin(), current.end());
  }
  return out;
}

inline Fingerprint morgan_fingerprint(const Molecule& m, int radius = 2, size_t width = 2048) {
  if (radius < 0) throw Error("negative fingerprint radius");
  if (width == 0 || (width & (width - 1)) != 0) throw Error("fingerprint width must be a power of two");
  Fingerprint fp(width);
  for (uint64_t h : morgan_environments(m, radius)) fp.set(h % width);
  return fp;
}

// |a AND b| / |a OR b|; two empty fingerprints compare as identical.
inline double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.width() != b.width()) throw WidthMismatch("fingerprint widths differ");
  int inter = 0, uni = 0;
  for (size_t w = 0; w < a.words().size(); ++w) {
    inter += std::popcount(a.words()[w] & b.words()[w]);
    uni += std::popcount(a.words()[w] | b.words()[w]);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// Exact maximum similarity over a non-empty reference set; first index
// wins ties.
inline std::pair<double, size_t> max_similarity(const Fingerprint& query,
                                                const std::vector<Fingerprint>& refs) {
  if (refs.empty()) throw EmptyReferenceSet("no reference fingerprints");
  double best = -1.0;
  size_t best_idx = 0;
  for (size_t i = 0; i < refs.size(); ++i) {
    double t = tanimoto(query, refs[i]);
    if (t > best) {
      best = t;
      best_idx = i;
    }
  }
  return {best, best_idx};
}

}  // namespace molforge
