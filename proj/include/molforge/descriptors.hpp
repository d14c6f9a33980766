//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "molforge/mol.hpp"

namespace molforge {

struct DescriptorSet {
  double mw = 0.0;                // average atomic weights, g/mol
  double monoisotopic_mw = 0.0;   // principal-isotope mass
  double clogp = 0.0;
  int hbd = 0;
  int hba = 0;
  int rotatable_bonds = 0;
  double tpsa = 0.0;
  double fsp3 = 0.0;
  int stereocenters = 0;
  int ring_count = 0;
  int largest_ring = 0;
  int formal_charge_total = 0;
};

namespace detail {

inline bool has_kekule_double(const Molecule& m, int i) {
  for (int bi : m.incident_bonds(i))
    if (m.bond(bi).kekule == 2) return true;
  return false;
}

inline bool has_triple(const Molecule& m, int i) {
  for (int bi : m.incident_bonds(i))
    if (m.bond(bi).kekule == 3) return true;
  return false;
}

inline bool is_sp3_carbon(const Molecule& m, int i) {
  const Atom& a = m.atom(i);
  if (a.element != element::C || a.aromatic) return false;
  for (int bi : m.incident_bonds(i))
    if (m.bond(bi).kekule != 1) return false;
  return true;
}

// Carbonyl-type atom: a true (non-aromatic) double bond to O/N/S.
inline bool is_hetero_sp2_carbon(const Molecule& m, int i) {
  for (int bi : m.incident_bonds(i)) {
    const Bond& b = m.bond(bi);
    if (b.order == BondOrder::Aromatic || b.kekule != 2) continue;
    int e = m.atom(b.other(i)).element;
    if (e == element::O || e == element::N || e == element::S) return true;
  }
  return false;
}

inline bool is_amide_bond(const Molecule& m, const Bond& b) {
  auto check = [&](int c, int n) {
    if (m.atom(c).element != element::C || m.atom(n).element != element::N) return false;
    for (int bi : m.incident_bonds(c)) {
      const Bond& cb = m.bond(bi);
      if (cb.kekule == 2 && m.atom(cb.other(c)).element == element::O) return true;
    }
    return false;
  };
  return check(b.a, b.b) || check(b.b, b.a);
}

// ---- Crippen-style additive cLogP ---------------------------------------
//
// Simplified Wildman-Crippen typing (~35 atom classes); hydrogens
// contribute per attached heavy atom. Exact parity with any external
// toolkit is out of scope; the scheme is table-driven and tuned on
// drug-like chemistry.

inline double crippen_atom(const Molecule& m, int i) {
  const Atom& a = m.atom(i);
  auto nbrs = m.neighbors(i);

  auto neighbor_has = [&](auto pred) {
    for (int nb : nbrs)
      if (pred(m.atom(nb))) return true;
    return false;
  };

  switch (a.element) {
    case element::C: {
      if (has_triple(m, i)) return 0.0017;
      if (a.aromatic) {
        // exocyclic double bond (pyridinone-type carbon)
        for (int bi : m.incident_bonds(i)) {
          const Bond& b = m.bond(bi);
          if (b.order != BondOrder::Aromatic && b.kekule == 2) return -0.8186;
        }
        int aromatic_bonds = 0;
        for (int bi : m.incident_bonds(i))
          if (m.bond(bi).order == BondOrder::Aromatic) ++aromatic_bonds;
        if (aromatic_bonds >= 3) return 0.2955;
        for (int nb : nbrs) {
          const Atom& x = m.atom(nb);
          if (x.element == element::F) return 0.0;
          if (x.element == element::Cl) return 0.2450;
          if (x.element == element::Br) return 0.1980;
          if (x.element == element::I) return 0.0;
        }
        if (neighbor_has([](const Atom& x) { return x.element == element::N && !x.aromatic; }))
          return 0.4619;
        if (neighbor_has([](const Atom& x) { return x.element == element::O && !x.aromatic; }))
          return 0.2653;
        if (neighbor_has([](const Atom& x) { return x.element == element::S && !x.aromatic; }))
          return 0.2175;
        if (neighbor_has([&](const Atom& x) { return x.aromatic; })) {
          // distinguish ring bond from biaryl single bond
          for (int bi : m.incident_bonds(i)) {
            const Bond& b = m.bond(bi);
            if (b.order == BondOrder::Single && m.atom(b.other(i)).aromatic) return 0.2713;
          }
        }
        if (neighbor_has([](const Atom& x) { return x.element == element::C && !x.aromatic; }))
          return 0.1360;
        return 0.1581;  // aromatic CH
      }
      if (is_hetero_sp2_carbon(m, i)) return -0.2783;
      if (has_kekule_double(m, i)) return 0.1551;  // C=C carbon
      bool hetero_nbr = neighbor_has([](const Atom& x) {
        return x.element != element::C && x.element != element::H;
      });
      if (hetero_nbr) return -0.2035;
      bool aromatic_nbr = neighbor_has([](const Atom& x) { return x.aromatic; });
      if (aromatic_nbr) return 0.0846;
      return m.degree(i) + a.hydrogens > 0 && m.degree(i) <= 2 ? 0.1441 : 0.0000;
    }
    case element::N: {
      if (a.aromatic) return a.formal_charge > 0 ? -1.1190 : -0.3239;
      if (a.formal_charge > 0) return a.hydrogens > 0 ? -1.9500 : -0.3396;
      if (a.formal_charge < 0) return -0.4806;
      if (has_triple(m, i)) return 0.01508;
      if (has_kekule_double(m, i)) return a.hydrogens > 0 ? 0.08387 : 0.1836;
      // amide/urea/sulfonamide nitrogen: much milder than an amine
      for (int nb : nbrs) {
        const Atom& x = m.atom(nb);
        if ((x.element == element::C || x.element == element::S) &&
            is_hetero_sp2_carbon(m, nb))
          return -0.2500;
      }
      bool aryl = neighbor_has([](const Atom& x) { return x.aromatic; });
      if (a.hydrogens >= 2) return aryl ? -1.0270 : -1.0190;
      if (a.hydrogens == 1) return aryl ? -0.5188 : -0.7096;
      return aryl ? -0.4458 : -0.3187;
    }
    case element::O: {
      if (a.aromatic) return 0.1552;
      if (a.formal_charge < 0) {
        bool on_np = neighbor_has([](const Atom& x) { return x.formal_charge > 0; });
        return on_np ? 0.0335 : -1.3260;  // oxide vs alkoxide/carboxylate
      }
      if (a.hydrogens > 0) return -0.2893;
      if (has_kekule_double(m, i)) {
        int partner = -1;
        for (int bi : m.incident_bonds(i))
          if (m.bond(bi).kekule == 2) partner = m.bond(bi).other(i);
        const Atom& p = m.atom(partner);
        if (p.element == element::C) {
          if (p.aromatic) return 0.1788;
          for (int nb : m.neighbors(partner))
            if (m.atom(nb).aromatic) return 0.1129;
          return -0.1526;
        }
        return 0.0335;  // N/S/P oxide
      }
      bool aryl = neighbor_has([](const Atom& x) { return x.aromatic; });
      return aryl ? 0.2638 : -0.0684;
    }
    case element::F: return 0.4202;
    case element::Cl: return 0.6895;
    case element::Br: return 0.8456;
    case element::I: return 0.8857;
    case element::S: {
      if (a.aromatic) return 0.6237;
      if (has_kekule_double(m, i)) return -0.0024;  // S=O / sulfone sulfur
      return 0.6482;
    }
    case element::Se: return 0.6482;
    case element::P: return 0.8612;
    case element::B: return 0.1000;
    case element::H: return 0.1230;
    default: return 0.08129;
  }
}

inline double crippen_hydrogens(const Molecule& m, int i) {
  const Atom& a = m.atom(i);
  if (a.hydrogens == 0) return 0.0;
  double per;
  switch (a.element) {
    case element::C: per = 0.1230; break;
    case element::N: per = 0.2142; break;
    case element::O: per = -0.2677; break;
    default: per = 0.1125; break;
  }
  return per * a.hydrogens;
}

// ---- Ertl-style fragment TPSA over N/O/S/P -------------------------------

inline double tpsa_atom(const Molecule& m, int i) {
  const Atom& a = m.atom(i);
  const int h = a.hydrogens;
  int singles = 0, doubles = 0, triples = 0, aromatics = 0;
  for (int bi : m.incident_bonds(i)) {
    const Bond& b = m.bond(bi);
    if (b.order == BondOrder::Aromatic)
      ++aromatics;
    else if (b.kekule == 1)
      ++singles;
    else if (b.kekule == 2)
      ++doubles;
    else
      ++triples;
  }

  switch (a.element) {
    case element::N: {
      if (a.formal_charge > 0) {
        if (a.aromatic) return h > 0 ? 14.14 : 4.10;
        // nitro-type and quaternary nitrogen
        if (doubles >= 1 && h == 0) return 11.68;
        if (h == 0) return 0.0;
        if (h == 1) return 4.44;
        if (h == 2) return 16.61;
        return 27.64;
      }
      if (a.aromatic) {
        if (h > 0) return 15.79;
        if (doubles >= 1) return 8.39;  // exocyclic =O on ring N
        if (aromatics >= 3) return 4.41;
        if (singles >= 1) return 4.93;  // substituted pyrrole-type
        return 12.89;                   // pyridine-type
      }
      if (triples >= 1) return 23.79;
      if (doubles >= 2) return 11.68;  // neutral nitro form
      if (doubles == 1) {
        if (triples >= 1) return 13.60;
        return h > 0 ? 23.85 : 12.36;
      }
      if (h == 0) return 3.24;
      if (h == 1) return 12.03;
      return 26.02;
    }
    case element::O: {
      if (a.formal_charge < 0) {
        for (int nb : m.neighbors(i))
          if (m.atom(nb).formal_charge > 0) return 17.07;  // N-oxide / nitro oxygen
        return 23.06;
      }
      if (a.aromatic) return 13.14;
      if (doubles >= 1) return 17.07;
      if (h > 0) return 20.23;
      return 9.23;
    }
    case element::S: {
      if (a.aromatic) return 28.24;
      if (doubles >= 2) return 8.38;   // sulfone
      if (doubles == 1) return singles >= 2 ? 19.21 : 32.09;
      if (h > 0) return 38.80;
      return 25.30;
    }
    case element::P: {
      if (doubles >= 1) return 9.81;
      return 13.59;
    }
    default: return 0.0;
  }
}

// Substituent environment signature to bounded depth, used for the
// four-distinct-neighbors stereocenter test. Paths may revisit ring atoms;
// truncation keeps the signature finite and deterministic.
inline std::string env_signature(const Molecule& m, int atom, int came_from, int depth) {
  const Atom& a = m.atom(atom);
  std::string sig = std::to_string(a.element) + "," + std::to_string(a.formal_charge) + "," +
                    (a.aromatic ? "1" : "0") + "," + std::to_string(a.hydrogens);
  if (depth == 0) return sig;
  std::vector<std::string> parts;
  for (int bi : m.incident_bonds(atom)) {
    const Bond& b = m.bond(bi);
    int nb = b.other(atom);
    if (nb == came_from) continue;
    parts.push_back(std::to_string(static_cast<int>(b.order)) + ":" +
                    env_signature(m, nb, atom, depth - 1));
  }
  std::sort(parts.begin(), parts.end());
  sig += "(";
  for (const auto& p : parts) sig += p + ";";
  sig += ")";
  return sig;
}

inline int count_stereocenters(const Molecule& m) {
  constexpr int kDepth = 4;
  int count = 0;
  for (size_t i = 0; i < m.atom_count(); ++i) {
    const Atom& a = m.atom(static_cast<int>(i));
    if (a.chirality != Chirality::None) {
      ++count;
      continue;
    }
    if (!is_sp3_carbon(m, static_cast<int>(i))) continue;
    int deg = m.degree(static_cast<int>(i));
    if (deg + a.hydrogens != 4 || a.hydrogens > 1) continue;
    std::vector<std::string> sigs;
    for (int nb : m.neighbors(static_cast<int>(i)))
      sigs.push_back(env_signature(m, nb, static_cast<int>(i), kDepth));
    if (a.hydrogens == 1) sigs.push_back("H");
    std::sort(sigs.begin(), sigs.end());
    if (std::adjacent_find(sigs.begin(), sigs.end()) == sigs.end()) ++count;
  }
  return count;
}

}  // namespace detail

// Rotatable bond: non-ring single bond between heavy atoms of degree >= 2,
// excluding amide C-N and bonds to triple-bonded (linear) atoms. This
// definition is frozen against the portfolio reference counts.
inline int rotatable_bond_count(const Molecule& m) {
  int count = 0;
  for (const auto& b : m.bonds()) {
    if (b.in_ring || b.order != BondOrder::Single) continue;
    if (m.degree(b.a) < 2 || m.degree(b.b) < 2) continue;
    if (detail::has_triple(m, b.a) || detail::has_triple(m, b.b)) continue;
    if (detail::is_amide_bond(m, b)) continue;
    ++count;
  }
  return count;
}

inline DescriptorSet descriptors(const Molecule& m) {
  DescriptorSet d;

  int carbons = 0, sp3_carbons = 0;
  for (size_t i = 0; i < m.atom_count(); ++i) {
    const Atom& a = m.atom(static_cast<int>(i));
    double aw = a.isotope ? static_cast<double>(*a.isotope) : average_weight(a.element);
    double mono = a.isotope ? static_cast<double>(*a.isotope) : monoisotopic_mass(a.element);
    d.mw += aw + a.hydrogens * average_weight(element::H);
    d.monoisotopic_mw += mono + a.hydrogens * monoisotopic_mass(element::H);
    d.formal_charge_total += a.formal_charge;
    d.clogp += detail::crippen_atom(m, static_cast<int>(i)) +
               detail::crippen_hydrogens(m, static_cast<int>(i));
    d.tpsa += detail::tpsa_atom(m, static_cast<int>(i));

    if (a.element == element::C) {
      ++carbons;
      if (detail::is_sp3_carbon(m, static_cast<int>(i))) ++sp3_carbons;
    }
    if (a.element == element::N || a.element == element::O) {
      if (a.hydrogens > 0) ++d.hbd;
      bool acceptor = a.formal_charge <= 0;
      if (a.element == element::N) {
        // pyrrole-type aromatic N and amide N do not accept
        if (a.aromatic && (a.hydrogens > 0 || m.degree(static_cast<int>(i)) >= 3))
          acceptor = false;
        if (!a.aromatic) {
          for (int nb : m.neighbors(static_cast<int>(i))) {
            if (m.atom(nb).element == element::C && detail::is_hetero_sp2_carbon(m, nb))
              acceptor = false;
          }
        }
        if (a.formal_charge > 0) acceptor = false;
      }
      if (acceptor) ++d.hba;
    }
  }

  d.fsp3 = carbons > 0 ? static_cast<double>(sp3_carbons) / carbons : 0.0;
  d.rotatable_bonds = rotatable_bond_count(m);
  d.stereocenters = detail::count_stereocenters(m);
  d.ring_count = static_cast<int>(m.rings().count());
  d.largest_ring = m.rings().largest();
  return d;
}

}  // namespace molforge
