//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "molforge/mol.hpp"

namespace molforge {

struct FullMask : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};
struct DecodeExhausted : Error {
  using Error::Error;
};
struct EmptyCorpus : Error {
  using Error::Error;
};

// Atom vocabulary entry: element, formal charge, aromatic hint. The hint
// feeds context signatures; aromaticity of decoded products is always
// re-perceived from the final kekule structure.
struct AtomLabel {
  int element = element::C;
  int formal_charge = 0;
  bool aromatic = false;

  auto operator<=>(const AtomLabel&) const = default;
};

enum class Provenance { Manual, FragmentMask, ScaffoldDecorate, LinkFragments, GraphEdit };

// A molecular graph with masked positions: atom identities and bond
// orders to regenerate. Fixed topology; decoding fills labels only.
struct MaskedGraph {
  struct MaskedAtom {
    std::optional<AtomLabel> label;  // nullopt while masked
    bool originally_masked = false;
    int fixed_hydrogens = -1;  // kept only for interior fixed atoms
    std::optional<int> isotope;
    Chirality chirality = Chirality::None;
  };
  struct MaskedBond {
    int a = 0;
    int b = 0;
    std::optional<int> order;  // kekule order; nullopt while masked
    bool originally_masked = false;
  };

  std::vector<MaskedAtom> atoms;
  std::vector<MaskedBond> bonds;
  std::vector<std::vector<int>> adj;  // atom -> bond indices
  Provenance provenance = Provenance::Manual;

  size_t masked_atom_count() const {
    size_t n = 0;
    for (const auto& a : atoms) n += !a.label;
    return n;
  }
  size_t masked_bond_count() const {
    size_t n = 0;
    for (const auto& b : bonds) n += !b.order;
    return n;
  }
  bool complete() const { return masked_atom_count() == 0 && masked_bond_count() == 0; }

  void rebuild_adjacency() {
    adj.assign(atoms.size(), {});
    for (size_t bi = 0; bi < bonds.size(); ++bi) {
      adj[static_cast<size_t>(bonds[bi].a)].push_back(static_cast<int>(bi));
      adj[static_cast<size_t>(bonds[bi].b)].push_back(static_cast<int>(bi));
    }
  }

  // Assemble the completed graph. Boundary atoms (incident to an
  // originally-masked bond) and decoded atoms re-derive hydrogens.
  Molecule to_molecule(ValencePolicy policy = ValencePolicy::Strict) const {
    std::vector<AtomSpec> specs(atoms.size());
    for (size_t i = 0; i < atoms.size(); ++i) {
      const auto& a = atoms[i];
      if (!a.label) throw Error("masked graph is not fully decoded");
      AtomSpec s;
      s.element = a.label->element;
      s.formal_charge = a.label->formal_charge;
      s.aromatic = false;  // perception decides
      s.isotope = a.isotope;
      s.chirality = a.chirality;
      if (a.fixed_hydrogens >= 0) s.explicit_h = a.fixed_hydrogens;
      specs[i] = std::move(s);
    }
    std::vector<BondSpec> bspecs;
    bspecs.reserve(bonds.size());
    for (const auto& b : bonds) {
      if (!b.order) throw Error("masked graph is not fully decoded");
      BondOrder o = *b.order == 2   ? BondOrder::Double
                    : *b.order == 3 ? BondOrder::Triple
                                    : BondOrder::Single;
      bspecs.push_back({b.a, b.b, o});
    }
    return build_molecule(std::move(specs), std::move(bspecs), {}, policy);
  }
};

namespace detail {

inline AtomLabel label_of(const Atom& a) {
  return {a.element, a.formal_charge, a.aromatic};
}

// Molecule -> MaskedGraph with everything fixed.
inline MaskedGraph to_masked_graph(const Molecule& m) {
  MaskedGraph g;
  g.atoms.resize(m.atom_count());
  for (size_t i = 0; i < m.atom_count(); ++i) {
    const Atom& a = m.atom(static_cast<int>(i));
    g.atoms[i].label = label_of(a);
    g.atoms[i].fixed_hydrogens = a.hydrogens;
    g.atoms[i].isotope = a.isotope;
    g.atoms[i].chirality = a.chirality;
  }
  for (const auto& b : m.bonds()) g.bonds.push_back({b.a, b.b, b.kekule, false});
  g.rebuild_adjacency();
  return g;
}

// Atoms incident to a masked bond have their hydrogen counts re-derived.
inline void release_boundary_hydrogens(MaskedGraph& g) {
  for (const auto& b : g.bonds) {
    if (!b.originally_masked) continue;
    g.atoms[static_cast<size_t>(b.a)].fixed_hydrogens = -1;
    g.atoms[static_cast<size_t>(b.b)].fixed_hydrogens = -1;
  }
}

}  // namespace detail

// --- Generation primitives ---------------------------------------------------

// Mask the listed atoms (and their incident bonds) for in-place
// regeneration; the remainder of the graph stays fixed.
inline MaskedGraph fragment_mask(const Molecule& m, const std::vector<int>& atom_set,
                                 bool allow_full_mask = false) {
  if (atom_set.empty()) throw IndexError("fragment_mask: empty atom set");
  std::set<int> mask;
  for (int i : atom_set) {
    if (i < 0 || static_cast<size_t>(i) >= m.atom_count())
      throw IndexError("fragment_mask: atom index " + std::to_string(i) + " out of range");
    mask.insert(i);
  }
  if (mask.size() == m.atom_count() && !allow_full_mask)
    throw FullMask("fragment_mask: masking every atom; use de-novo mode");

  MaskedGraph g = detail::to_masked_graph(m);
  g.provenance = Provenance::FragmentMask;
  for (int i : mask) {
    g.atoms[static_cast<size_t>(i)].label.reset();
    g.atoms[static_cast<size_t>(i)].originally_masked = true;
    g.atoms[static_cast<size_t>(i)].fixed_hydrogens = -1;
    g.atoms[static_cast<size_t>(i)].chirality = Chirality::None;
    g.atoms[static_cast<size_t>(i)].isotope.reset();
  }
  for (auto& b : g.bonds) {
    if (mask.count(b.a) || mask.count(b.b)) {
      b.order.reset();
      b.originally_masked = true;
    }
  }
  detail::release_boundary_hydrogens(g);
  return g;
}

// Grow a chain of `growth_budget` masked atoms from each attachment
// point; the core stays fixed.
inline MaskedGraph scaffold_decorate(const Molecule& core, const std::vector<int>& attachment_points,
                                     int growth_budget, bool zero_budget_identity = false) {
  for (int p : attachment_points) {
    if (p < 0 || static_cast<size_t>(p) >= core.atom_count())
      throw IndexError("scaffold_decorate: attachment point out of range");
  }
  if (growth_budget < 0) throw RangeError("scaffold_decorate: negative growth budget");
  if (growth_budget == 0 && !zero_budget_identity)
    throw RangeError("scaffold_decorate: zero growth budget");

  MaskedGraph g = detail::to_masked_graph(core);
  g.provenance = Provenance::ScaffoldDecorate;
  for (int p : attachment_points) {
    int prev = p;
    for (int k = 0; k < growth_budget; ++k) {
      MaskedGraph::MaskedAtom fresh;
      fresh.originally_masked = true;
      g.atoms.push_back(fresh);
      int cur = static_cast<int>(g.atoms.size() - 1);
      g.bonds.push_back({prev, cur, std::nullopt, true});
      prev = cur;
    }
  }
  g.rebuild_adjacency();
  detail::release_boundary_hydrogens(g);
  return g;
}

// One masked graph per linker length in [min, max]; length 0 joins the
// two sites with a single masked bond.
inline std::vector<MaskedGraph> link_fragments(const Molecule& a, int a_site, const Molecule& b,
                                               int b_site, std::pair<int, int> linker_len_range) {
  if (a_site < 0 || static_cast<size_t>(a_site) >= a.atom_count())
    throw IndexError("link_fragments: site out of range on first fragment");
  if (b_site < 0 || static_cast<size_t>(b_site) >= b.atom_count())
    throw IndexError("link_fragments: site out of range on second fragment");
  auto [lo, hi] = linker_len_range;
  if (lo < 0 || hi < lo) throw RangeError("link_fragments: bad linker length range");

  MaskedGraph base = detail::to_masked_graph(a);
  {
    MaskedGraph gb = detail::to_masked_graph(b);
    int offset = static_cast<int>(base.atoms.size());
    for (auto& at : gb.atoms) base.atoms.push_back(std::move(at));
    for (auto& bd : gb.bonds) base.bonds.push_back({bd.a + offset, bd.b + offset, bd.order, false});
  }
  int site_b = b_site + static_cast<int>(a.atom_count());

  std::vector<MaskedGraph> out;
  for (int len = lo; len <= hi; ++len) {
    MaskedGraph g = base;
    g.provenance = Provenance::LinkFragments;
    int prev = a_site;
    for (int k = 0; k < len; ++k) {
      MaskedGraph::MaskedAtom fresh;
      fresh.originally_masked = true;
      g.atoms.push_back(fresh);
      int cur = static_cast<int>(g.atoms.size() - 1);
      g.bonds.push_back({prev, cur, std::nullopt, true});
      prev = cur;
    }
    g.bonds.push_back({prev, site_b, std::nullopt, true});
    g.rebuild_adjacency();
    detail::release_boundary_hydrogens(g);
    out.push_back(std::move(g));
  }
  return out;
}

// --- Graph editing -----------------------------------------------------------

struct EditOp {
  enum class Kind { AddAtom, RemoveAtom, AddBond, RemoveBond, SetElement, SetOrder };
  Kind kind;
  int a = 0;        // atom index (AddBond/RemoveBond/SetOrder use a,b)
  int b = 0;
  int element = element::C;  // AddAtom/SetElement
  int charge = 0;            // AddAtom
  BondOrder order = BondOrder::Single;
};

namespace detail {

inline std::pair<std::vector<AtomSpec>, std::vector<BondSpec>> to_specs(const Molecule& m,
                                                                        bool derive_hydrogens) {
  std::vector<AtomSpec> atoms(m.atom_count());
  for (size_t i = 0; i < m.atom_count(); ++i) {
    const Atom& a = m.atom(static_cast<int>(i));
    atoms[i].element = a.element;
    atoms[i].formal_charge = a.formal_charge;
    atoms[i].isotope = a.isotope;
    atoms[i].aromatic = false;
    atoms[i].chirality = a.chirality;
    if (!derive_hydrogens) atoms[i].explicit_h = a.hydrogens;
  }
  std::vector<BondSpec> bonds;
  for (const auto& b : m.bonds()) {
    BondOrder o = b.order == BondOrder::Aromatic
                      ? (b.kekule == 2 ? BondOrder::Double : BondOrder::Single)
                      : b.order;
    bonds.push_back({b.a, b.b, o});
  }
  return {std::move(atoms), std::move(bonds)};
}

}  // namespace detail

// Sequential atom/bond-level editing with revalidation after every step.
// RemoveAtom compacts indices immediately: later steps address the
// post-removal numbering. Hydrogens are re-derived throughout.
inline Molecule graph_edit(const Molecule& m, const std::vector<EditOp>& script) {
  auto [atoms, bonds] = detail::to_specs(m, /*derive_hydrogens=*/true);

  auto rebuild = [&](size_t step) -> Molecule {
    try {
      return build_molecule(atoms, bonds);
    } catch (const ValenceError& e) {
      throw ValenceError(std::string(e.what()) + " at edit step " + std::to_string(step));
    } catch (const GraphError& e) {
      throw GraphError(std::string(e.what()) + " at edit step " + std::to_string(step));
    }
  };

  Molecule current = m;
  for (size_t step = 0; step < script.size(); ++step) {
    const EditOp& op = script[step];
    auto check_atom = [&](int idx) {
      if (idx < 0 || static_cast<size_t>(idx) >= atoms.size())
        throw IndexError("atom index " + std::to_string(idx) + " out of range at edit step " +
                         std::to_string(step));
    };
    switch (op.kind) {
      case EditOp::Kind::AddAtom: {
        AtomSpec s;
        s.element = op.element;
        s.formal_charge = op.charge;
        atoms.push_back(std::move(s));
        break;
      }
      case EditOp::Kind::RemoveAtom: {
        check_atom(op.a);
        // former neighbors lose a substituent: stereo no longer defined
        for (const auto& b : bonds) {
          if (b.a == op.a) atoms[static_cast<size_t>(b.b)].chirality = Chirality::None;
          if (b.b == op.a) atoms[static_cast<size_t>(b.a)].chirality = Chirality::None;
        }
        atoms.erase(atoms.begin() + op.a);
        std::vector<BondSpec> kept;
        for (const auto& b : bonds) {
          if (b.a == op.a || b.b == op.a) continue;
          BondSpec nb = b;
          if (nb.a > op.a) --nb.a;
          if (nb.b > op.a) --nb.b;
          kept.push_back(nb);
        }
        bonds = std::move(kept);
        break;
      }
      case EditOp::Kind::AddBond: {
        check_atom(op.a);
        check_atom(op.b);
        bonds.push_back({op.a, op.b, op.order});
        break;
      }
      case EditOp::Kind::RemoveBond: {
        check_atom(op.a);
        check_atom(op.b);
        bool found = false;
        for (size_t bi = 0; bi < bonds.size(); ++bi) {
          if ((bonds[bi].a == op.a && bonds[bi].b == op.b) ||
              (bonds[bi].a == op.b && bonds[bi].b == op.a)) {
            bonds.erase(bonds.begin() + static_cast<long>(bi));
            found = true;
            break;
          }
        }
        if (!found)
          throw IndexError("no bond " + std::to_string(op.a) + "-" + std::to_string(op.b) +
                           " at edit step " + std::to_string(step));
        break;
      }
      case EditOp::Kind::SetElement: {
        check_atom(op.a);
        atoms[static_cast<size_t>(op.a)].element = op.element;
        atoms[static_cast<size_t>(op.a)].chirality = Chirality::None;
        break;
      }
      case EditOp::Kind::SetOrder: {
        check_atom(op.a);
        check_atom(op.b);
        bool found = false;
        for (auto& b : bonds) {
          if ((b.a == op.a && b.b == op.b) || (b.a == op.b && b.b == op.a)) {
            b.order = op.order;
            found = true;
            break;
          }
        }
        if (!found)
          throw IndexError("no bond " + std::to_string(op.a) + "-" + std::to_string(op.b) +
                           " at edit step " + std::to_string(step));
        break;
      }
    }
    // atoms touched by structural edits lose stereo annotations
    if (op.kind == EditOp::Kind::AddBond || op.kind == EditOp::Kind::RemoveBond ||
        op.kind == EditOp::Kind::SetOrder) {
      atoms[static_cast<size_t>(op.a)].chirality = Chirality::None;
      atoms[static_cast<size_t>(op.b)].chirality = Chirality::None;
    }
    current = rebuild(step);
  }
  return current;
}

// --- Proposal models ----------------------------------------------------------

struct Vocabulary {
  std::vector<AtomLabel> atom_labels;
  std::vector<int> bond_orders;  // kekule orders
};

// Scores masked positions in context. Distributions are normalized over
// the vocabulary; implementations must be immutable once built.
class ProposalModel {
 public:
  virtual ~ProposalModel() = default;
  virtual const Vocabulary& vocabulary() const = 0;
  virtual std::vector<double> atom_distribution(const MaskedGraph& g, int atom) const = 0;
  virtual std::vector<double> bond_distribution(const MaskedGraph& g, int bond) const = 0;
};

class UniformModel final : public ProposalModel {
 public:
  explicit UniformModel(Vocabulary vocab) : vocab_(std::move(vocab)) {}
  const Vocabulary& vocabulary() const override { return vocab_; }
  std::vector<double> atom_distribution(const MaskedGraph&, int) const override {
    return std::vector<double>(vocab_.atom_labels.size(), 1.0 / vocab_.atom_labels.size());
  }
  std::vector<double> bond_distribution(const MaskedGraph&, int) const override {
    return std::vector<double>(vocab_.bond_orders.size(), 1.0 / vocab_.bond_orders.size());
  }

 private:
  Vocabulary vocab_;
};

// Corpus-statistics model: conditional label frequencies keyed by the
// sorted multiset of known (neighbor element, bond order) pairs at depth
// one, Laplace-smoothed. Training enumerates every distinct sub-multiset
// of each atom's neighborhood so partially-decoded contexts resolve to
// observed statistics.
class FrequencyModel final : public ProposalModel {
 public:
  using AtomContext = std::vector<std::pair<int, int>>;  // sorted (element, order)
  using BondContext = std::pair<int, int>;               // sorted endpoint elements

  const Vocabulary& vocabulary() const override { return vocab_; }

  std::vector<double> atom_distribution(const MaskedGraph& g, int atom) const override {
    AtomContext ctx;
    for (int bi : g.adj[static_cast<size_t>(atom)]) {
      const auto& b = g.bonds[static_cast<size_t>(bi)];
      int other = (b.a == atom) ? b.b : b.a;
      if (!b.order || !g.atoms[static_cast<size_t>(other)].label) continue;
      ctx.push_back({g.atoms[static_cast<size_t>(other)].label->element, *b.order});
    }
    std::sort(ctx.begin(), ctx.end());
    const std::vector<int>* counts = nullptr;
    auto it = atom_counts_.find(ctx);
    if (it != atom_counts_.end()) counts = &it->second;
    return smoothed(counts, vocab_.atom_labels.size());
  }

  std::vector<double> bond_distribution(const MaskedGraph& g, int bond) const override {
    const auto& b = g.bonds[static_cast<size_t>(bond)];
    const auto& la = g.atoms[static_cast<size_t>(b.a)].label;
    const auto& lb = g.atoms[static_cast<size_t>(b.b)].label;
    if (!la || !lb) return smoothed(nullptr, vocab_.bond_orders.size());
    BondContext ctx{std::min(la->element, lb->element), std::max(la->element, lb->element)};
    const std::vector<int>* counts = nullptr;
    auto it = bond_counts_.find(ctx);
    if (it != bond_counts_.end()) counts = &it->second;
    return smoothed(counts, vocab_.bond_orders.size());
  }

 private:
  friend FrequencyModel train_frequency_model(const std::vector<Molecule>&, double);

  std::vector<double> smoothed(const std::vector<int>* counts, size_t size) const {
    std::vector<double> out(size, 0.0);
    double total = 0.0;
    for (size_t k = 0; k < size; ++k) {
      double c = counts ? static_cast<double>((*counts)[k]) : 0.0;
      out[k] = c + alpha_;
      total += out[k];
    }
    for (auto& p : out) p /= total;
    return out;
  }

  Vocabulary vocab_;
  double alpha_ = 1.0;
  std::map<AtomContext, std::vector<int>> atom_counts_;
  std::map<BondContext, std::vector<int>> bond_counts_;
};

inline FrequencyModel train_frequency_model(const std::vector<Molecule>& corpus,
                                            double alpha = 1.0) {
  if (corpus.empty()) throw EmptyCorpus("frequency model needs a non-empty corpus");
  FrequencyModel model;
  model.alpha_ = alpha;

  std::set<AtomLabel> labels;
  std::set<int> orders;
  for (const auto& m : corpus) {
    for (const auto& a : m.atoms()) labels.insert(detail::label_of(a));
    for (const auto& b : m.bonds()) orders.insert(b.kekule);
  }
  model.vocab_.atom_labels.assign(labels.begin(), labels.end());
  model.vocab_.bond_orders.assign(orders.begin(), orders.end());

  auto label_index = [&](const AtomLabel& l) {
    return static_cast<size_t>(std::lower_bound(model.vocab_.atom_labels.begin(),
                                                model.vocab_.atom_labels.end(), l) -
                               model.vocab_.atom_labels.begin());
  };
  auto order_index = [&](int o) {
    return static_cast<size_t>(std::lower_bound(model.vocab_.bond_orders.begin(),
                                                model.vocab_.bond_orders.end(), o) -
                               model.vocab_.bond_orders.begin());
  };

  for (const auto& m : corpus) {
    for (size_t i = 0; i < m.atom_count(); ++i) {
      const Atom& a = m.atom(static_cast<int>(i));
      FrequencyModel::AtomContext full;
      for (int bi : m.incident_bonds(static_cast<int>(i))) {
        const Bond& b = m.bond(bi);
        full.push_back({m.atom(b.other(static_cast<int>(i))).element, b.kekule});
      }
      std::sort(full.begin(), full.end());

      // distinct sub-multisets of the neighborhood, each counted once
      std::set<FrequencyModel::AtomContext> subsets;
      const size_t k = full.size();
      for (size_t bits = 0; bits < (size_t{1} << k); ++bits) {
        FrequencyModel::AtomContext sub;
        for (size_t j = 0; j < k; ++j)
          if (bits & (size_t{1} << j)) sub.push_back(full[j]);
        subsets.insert(std::move(sub));
      }
      size_t li = label_index(detail::label_of(a));
      for (const auto& ctx : subsets) {
        auto& row = model.atom_counts_[ctx];
        if (row.empty()) row.assign(model.vocab_.atom_labels.size(), 0);
        ++row[li];
      }
    }
    for (const auto& b : m.bonds()) {
      int ea = m.atom(b.a).element, eb = m.atom(b.b).element;
      FrequencyModel::BondContext ctx{std::min(ea, eb), std::max(ea, eb)};
      auto& row = model.bond_counts_[ctx];
      if (row.empty()) row.assign(model.vocab_.bond_orders.size(), 0);
      ++row[order_index(b.kekule)];
    }
  }
  return model;
}

// --- Semi-autoregressive beam decoding ----------------------------------------

struct DecodeParams {
  int beam_width = 8;
  double temperature = 1.0;
  double nucleus_p = 1.0;  // (0,1]
  int max_outputs = 32;
  uint64_t seed = 0;
  enum class Expansion { Enumerate, Sample } expansion = Expansion::Enumerate;
};

// A decode position: an atom index or a bond index of the masked graph.
struct DecodePosition {
  bool is_atom = true;
  int index = 0;

  auto operator<=>(const DecodePosition&) const = default;
};

struct DecodedCandidate {
  Molecule molecule;
  double cum_logprob = 0.0;
  std::vector<std::pair<DecodePosition, int>> unmask_trace;  // (position, vocab index)
};

namespace detail {

// Temperature-scale in log space, sort descending (stable in vocab
// order), truncate to the smallest prefix reaching nucleus_p (p = 1
// keeps everything), renormalize. Returns (vocab index, adjusted
// probability) pairs.
inline std::vector<std::pair<int, double>> adjust_distribution(const std::vector<double>& dist,
                                                               double temperature,
                                                               double nucleus_p) {
  const double t = std::max(temperature, 1e-9);
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(dist.size());
  for (size_t k = 0; k < dist.size(); ++k) {
    logs[k] = std::log(std::max(dist[k], 1e-300));
    max_log = std::max(max_log, logs[k]);
  }
  std::vector<std::pair<int, double>> scaled;
  scaled.reserve(dist.size());
  double total = 0.0;
  for (size_t k = 0; k < dist.size(); ++k) {
    double p = std::exp((logs[k] - max_log) / t);
    scaled.push_back({static_cast<int>(k), p});
    total += p;
  }
  for (auto& [k, p] : scaled) p /= total;
  std::stable_sort(scaled.begin(), scaled.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  if (nucleus_p < 1.0) {
    double cum = 0.0;
    size_t cut = scaled.size();
    for (size_t k = 0; k < scaled.size(); ++k) {
      cum += scaled[k].second;
      if (cum >= nucleus_p) {
        cut = k + 1;
        break;
      }
    }
    scaled.resize(cut);
    double kept = 0.0;
    for (auto& [k, p] : scaled) kept += p;
    for (auto& [k, p] : scaled) p /= kept;
  }
  return scaled;
}

inline double entropy(const std::vector<double>& dist) {
  double h = 0.0;
  for (double p : dist)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

struct Beam {
  MaskedGraph graph;
  double cum_logprob = 0.0;
  std::vector<std::pair<DecodePosition, int>> trace;
};

// Feasibility: committed kekule orders plus one per still-masked incident
// bond must fit under the maximum allowed valence.
inline bool valence_feasible(const MaskedGraph& g, int atom) {
  const auto& a = g.atoms[static_cast<size_t>(atom)];
  if (!a.label) return true;  // checked when labeled
  auto allowed = allowed_valences(a.label->element, a.label->formal_charge);
  if (allowed.empty()) return true;
  int committed = 0, pending = 0;
  for (int bi : g.adj[static_cast<size_t>(atom)]) {
    const auto& b = g.bonds[static_cast<size_t>(bi)];
    if (b.order)
      committed += *b.order;
    else
      ++pending;
  }
  int max_allowed = *std::max_element(allowed.begin(), allowed.end());
  if (committed + pending > max_allowed) return false;
  // fixed interior atoms must keep their hydrogen count exactly
  if (a.fixed_hydrogens >= 0 && pending == 0) {
    int total = committed + a.fixed_hydrogens;
    return std::find(allowed.begin(), allowed.end(), total) != allowed.end();
  }
  return true;
}

// Next position for a beam: any fully-anchored masked bond first (lowest
// index), otherwise the masked atom with the lowest model entropy.
inline std::optional<DecodePosition> next_position(const MaskedGraph& g,
                                                   const ProposalModel& model) {
  for (size_t bi = 0; bi < g.bonds.size(); ++bi) {
    const auto& b = g.bonds[bi];
    if (b.order) continue;
    if (g.atoms[static_cast<size_t>(b.a)].label && g.atoms[static_cast<size_t>(b.b)].label)
      return DecodePosition{false, static_cast<int>(bi)};
  }
  double best_entropy = 0.0;
  int best_atom = -1;
  for (size_t i = 0; i < g.atoms.size(); ++i) {
    if (g.atoms[i].label) continue;
    double h = entropy(model.atom_distribution(g, static_cast<int>(i)));
    if (best_atom < 0 || h < best_entropy - 1e-15) {
      best_entropy = h;
      best_atom = static_cast<int>(i);
    }
  }
  if (best_atom >= 0) return DecodePosition{true, best_atom};
  return std::nullopt;
}

}  // namespace detail

// Semi-autoregressive beam search over the masked positions: atoms are
// unmasked lowest-entropy-first, bonds as soon as both endpoints are
// known; labels expand over the temperature/nucleus-adjusted proposal
// distribution; beams are pruned by cumulative log-probability. Outputs
// are valence-valid molecules, best first. Deterministic for a fixed
// seed.
inline std::vector<DecodedCandidate> decode(const MaskedGraph& g, const ProposalModel& model,
                                            const DecodeParams& params = {}) {
  if (params.beam_width < 1) throw RangeError("decode: beam width must be >= 1");
  if (params.temperature <= 0.0) throw RangeError("decode: temperature must be positive");
  if (params.nucleus_p <= 0.0 || params.nucleus_p > 1.0)
    throw RangeError("decode: nucleus_p must lie in (0, 1]");
  if (model.vocabulary().atom_labels.empty() && g.masked_atom_count() > 0)
    throw DecodeExhausted("decode: empty atom vocabulary");

  if (g.complete()) {
    DecodedCandidate identity;
    identity.molecule = g.to_molecule();
    identity.cum_logprob = 0.0;
    return {std::move(identity)};
  }

  std::mt19937_64 rng(params.seed);
  std::vector<detail::Beam> active;
  active.push_back({g, 0.0, {}});
  std::vector<detail::Beam> finished;

  while (!active.empty()) {
    std::vector<detail::Beam> children;
    for (auto& beam : active) {
      auto pos = detail::next_position(beam.graph, model);
      if (!pos) {
        finished.push_back(std::move(beam));
        continue;
      }

      std::vector<double> dist = pos->is_atom
                                     ? model.atom_distribution(beam.graph, pos->index)
                                     : model.bond_distribution(beam.graph, pos->index);
      auto adjusted = detail::adjust_distribution(dist, params.temperature, params.nucleus_p);

      std::vector<std::pair<int, double>> chosen;
      if (params.expansion == DecodeParams::Expansion::Enumerate) {
        chosen = adjusted;
      } else {
        // sampled expansion: beam_width draws via inverse CDF (portable
        // and bit-reproducible for a fixed seed), deduplicated
        std::set<size_t> drawn;
        for (int s = 0; s < params.beam_width; ++s) {
          double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          double cum = 0.0;
          size_t picked = adjusted.size() - 1;
          for (size_t d = 0; d < adjusted.size(); ++d) {
            cum += adjusted[d].second;
            if (u < cum) {
              picked = d;
              break;
            }
          }
          drawn.insert(picked);
        }
        for (size_t d : drawn) chosen.push_back(adjusted[d]);
      }

      for (auto [vocab_idx, prob] : chosen) {
        detail::Beam child = beam;
        if (pos->is_atom) {
          child.graph.atoms[static_cast<size_t>(pos->index)].label =
              model.vocabulary().atom_labels[static_cast<size_t>(vocab_idx)];
        } else {
          child.graph.bonds[static_cast<size_t>(pos->index)].order =
              model.vocabulary().bond_orders[static_cast<size_t>(vocab_idx)];
        }
        // incremental valence pruning around the changed position
        bool ok;
        if (pos->is_atom) {
          ok = detail::valence_feasible(child.graph, pos->index);
        } else {
          const auto& b = child.graph.bonds[static_cast<size_t>(pos->index)];
          ok = detail::valence_feasible(child.graph, b.a) &&
               detail::valence_feasible(child.graph, b.b);
        }
        if (!ok) continue;
        child.cum_logprob += std::log(prob);
        child.trace.push_back({*pos, vocab_idx});
        children.push_back(std::move(child));
      }
    }
    if (children.empty()) break;
    std::sort(children.begin(), children.end(), [](const detail::Beam& x, const detail::Beam& y) {
      if (x.cum_logprob != y.cum_logprob) return x.cum_logprob > y.cum_logprob;
      return x.trace < y.trace;
    });
    if (static_cast<int>(children.size()) > params.beam_width)
      children.resize(static_cast<size_t>(params.beam_width));
    active = std::move(children);
  }

  std::vector<DecodedCandidate> out;
  for (auto& beam : finished) {
    try {
      DecodedCandidate cand;
      cand.molecule = beam.graph.to_molecule();
      cand.cum_logprob = beam.cum_logprob;
      cand.unmask_trace = std::move(beam.trace);
      out.push_back(std::move(cand));
    } catch (const Error&) {
      // pruned: completed assignment failed full revalidation
    }
  }
  if (out.empty()) throw DecodeExhausted("decode: no valence-valid completion survives");

  // rank by score; ties by position-indexed assignment for reproducibility
  auto assignment_key = [](const DecodedCandidate& c) {
    std::vector<std::pair<DecodePosition, int>> key = c.unmask_trace;
    std::sort(key.begin(), key.end());
    return key;
  };
  std::sort(out.begin(), out.end(), [&](const DecodedCandidate& x, const DecodedCandidate& y) {
    if (x.cum_logprob != y.cum_logprob) return x.cum_logprob > y.cum_logprob;
    return assignment_key(x) < assignment_key(y);
  });
  if (static_cast<int>(out.size()) > params.max_outputs)
    out.resize(static_cast<size_t>(params.max_outputs));
  return out;
}

// Fixed subgraph of a masked graph (original labels, fixed bonds only),
// for scaffold-preservation checks against decoded products.
inline std::vector<char> fixed_atom_mask(const MaskedGraph& g) {
  std::vector<char> keep(g.atoms.size(), 0);
  for (size_t i = 0; i < g.atoms.size(); ++i)
    keep[i] = !g.atoms[i].originally_masked && g.atoms[i].label.has_value();
  return keep;
}

}  // namespace molforge
