//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace molforge {

// Per-element reference data. Average weights follow the IUPAC 2021
// conventional values; monoisotopic masses are those of the principal
// isotope. Elements with no stable isotope carry the mass number of the
// longest-lived isotope in both columns.
struct ElementInfo {
  std::string_view symbol;
  double average_weight;
  double monoisotopic_mass;
};

namespace detail {

inline constexpr int kMaxElement = 103;

inline const std::array<ElementInfo, kMaxElement + 1>& element_table() {
  static const std::array<ElementInfo, kMaxElement + 1> table = {{
      {"*", 0.0, 0.0},
      {"H", 1.008, 1.007825},
      {"He", 4.0026, 4.002603},
      {"Li", 6.94, 7.016003},
      {"Be", 9.0122, 9.012183},
      {"B", 10.81, 11.009305},
      {"C", 12.011, 12.0},
      {"N", 14.007, 14.003074},
      {"O", 15.999, 15.994915},
      {"F", 18.998, 18.998403},
      {"Ne", 20.180, 19.992440},
      {"Na", 22.990, 22.989769},
      {"Mg", 24.305, 23.985042},
      {"Al", 26.982, 26.981538},
      {"Si", 28.085, 27.976927},
      {"P", 30.974, 30.973762},
      {"S", 32.06, 31.972071},
      {"Cl", 35.45, 34.968853},
      {"Ar", 39.948, 39.962383},
      {"K", 39.098, 38.963706},
      {"Ca", 40.078, 39.962591},
      {"Sc", 44.956, 44.955908},
      {"Ti", 47.867, 47.947942},
      {"V", 50.942, 50.943957},
      {"Cr", 51.996, 51.940506},
      {"Mn", 54.938, 54.938044},
      {"Fe", 55.845, 55.934936},
      {"Co", 58.933, 58.933194},
      {"Ni", 58.693, 57.935342},
      {"Cu", 63.546, 62.929598},
      {"Zn", 65.38, 63.929142},
      {"Ga", 69.723, 68.925574},
      {"Ge", 72.630, 73.921178},
      {"As", 74.922, 74.921595},
      {"Se", 78.971, 79.916522},
      {"Br", 79.904, 78.918338},
      {"Kr", 83.798, 83.911498},
      {"Rb", 85.468, 84.911790},
      {"Sr", 87.62, 87.905613},
      {"Y", 88.906, 88.905840},
      {"Zr", 91.224, 89.904698},
      {"Nb", 92.906, 92.906373},
      {"Mo", 95.95, 97.905405},
      {"Tc", 97.0, 96.906367},
      {"Ru", 101.07, 101.904344},
      {"Rh", 102.91, 102.905498},
      {"Pd", 106.42, 105.903480},
      {"Ag", 107.87, 106.905092},
      {"Cd", 112.41, 113.903365},
      {"In", 114.82, 114.903879},
      {"Sn", 118.71, 119.902202},
      {"Sb", 121.76, 120.903810},
      {"Te", 127.60, 129.906223},
      {"I", 126.90, 126.904472},
      {"Xe", 131.29, 131.904155},
      {"Cs", 132.91, 132.905452},
      {"Ba", 137.33, 137.905247},
      {"La", 138.91, 138.906356},
      {"Ce", 140.12, 139.905443},
      {"Pr", 140.91, 140.907658},
      {"Nd", 144.24, 141.907729},
      {"Pm", 145.0, 144.912756},
      {"Sm", 150.36, 151.919739},
      {"Eu", 151.96, 152.921238},
      {"Gd", 157.25, 157.924112},
      {"Tb", 158.93, 158.925354},
      {"Dy", 162.50, 163.929181},
      {"Ho", 164.93, 164.930328},
      {"Er", 167.26, 165.930299},
      {"Tm", 168.93, 168.934218},
      {"Yb", 173.05, 173.938866},
      {"Lu", 174.97, 174.940775},
      {"Hf", 178.49, 179.946557},
      {"Ta", 180.95, 180.947996},
      {"W", 183.84, 183.950931},
      {"Re", 186.21, 186.955750},
      {"Os", 190.23, 191.961477},
      {"Ir", 192.22, 192.962921},
      {"Pt", 195.08, 194.964792},
      {"Au", 196.97, 196.966569},
      {"Hg", 200.59, 201.970643},
      {"Tl", 204.38, 204.974427},
      {"Pb", 207.2, 207.976652},
      {"Bi", 208.98, 208.980399},
      {"Po", 209.0, 208.982430},
      {"At", 210.0, 209.987148},
      {"Rn", 222.0, 222.017577},
      {"Fr", 223.0, 223.019736},
      {"Ra", 226.0, 226.025410},
      {"Ac", 227.0, 227.027752},
      {"Th", 232.04, 232.038055},
      {"Pa", 231.04, 231.035884},
      {"U", 238.03, 238.050788},
      {"Np", 237.0, 237.048174},
      {"Pu", 244.0, 244.064205},
      {"Am", 243.0, 243.061381},
      {"Cm", 247.0, 247.070354},
      {"Bk", 247.0, 247.070307},
      {"Cf", 251.0, 251.079589},
      {"Es", 252.0, 252.082980},
      {"Fm", 257.0, 257.095106},
      {"Md", 258.0, 258.098431},
      {"No", 259.0, 259.101030},
      {"Lr", 262.0, 262.109610},
  }};
  return table;
}

}  // namespace detail

inline bool valid_element(int z) {
  return z >= 1 && z <= detail::kMaxElement;
}

inline std::string_view element_symbol(int z) {
  return valid_element(z) ? detail::element_table()[static_cast<size_t>(z)].symbol
                          : std::string_view{"?"};
}

inline double average_weight(int z) {
  return valid_element(z) ? detail::element_table()[static_cast<size_t>(z)].average_weight : 0.0;
}

inline double monoisotopic_mass(int z) {
  return valid_element(z) ? detail::element_table()[static_cast<size_t>(z)].monoisotopic_mass
                          : 0.0;
}

// Symbol lookup; case-sensitive, longest match wins at the call site.
inline std::optional<int> element_from_symbol(std::string_view sym) {
  for (int z = 1; z <= detail::kMaxElement; ++z) {
    if (detail::element_table()[static_cast<size_t>(z)].symbol == sym) return z;
  }
  return std::nullopt;
}

namespace element {
inline constexpr int H = 1, B = 5, C = 6, N = 7, O = 8, F = 9, Si = 14, P = 15, S = 16, Cl = 17,
                     Se = 34, Br = 35, I = 53;
}

// Allowed-valence model: fixed per-element lists for the neutral atom;
// a formal charge shifts every entry by the charge itself (N+ -> 4,
// O- -> 1). Elements without an entry are not valence-checked.
inline std::vector<int> allowed_valences(int z, int formal_charge) {
  std::vector<int> base;
  switch (z) {
    case element::H: base = {1}; break;
    case element::B: base = {3}; break;
    case element::C: base = {4}; break;
    case element::N: base = {3}; break;
    case element::O: base = {2}; break;
    case element::F:
    case element::Cl:
    case element::Br:
    case element::I: base = {1}; break;
    case element::Si: base = {4}; break;
    case element::P: base = {3, 5}; break;
    case element::S:
    case element::Se: base = {2, 4, 6}; break;
    default: return {};
  }
  std::vector<int> shifted;
  for (int v : base) {
    int s = v + formal_charge;
    if (s >= 0) shifted.push_back(s);
  }
  return shifted;
}

// Atoms the SMILES organic subset may write without brackets.
inline bool organic_subset_element(int z) {
  switch (z) {
    case element::B:
    case element::C:
    case element::N:
    case element::O:
    case element::P:
    case element::S:
    case element::F:
    case element::Cl:
    case element::Br:
    case element::I: return true;
    default: return false;
  }
}

// Elements with a defined aromatic (lowercase) SMILES form.
inline bool aromatic_subset_element(int z) {
  switch (z) {
    case element::B:
    case element::C:
    case element::N:
    case element::O:
    case element::P:
    case element::S:
    case element::Se: return true;
    default: return false;
  }
}

}  // namespace molforge
