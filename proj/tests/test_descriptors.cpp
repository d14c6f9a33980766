//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "corpus.hpp"
#include "molforge/descriptors.hpp"
#include "molforge/smiles.hpp"

using namespace molforge;

namespace {
DescriptorSet desc(const char* smi) { return descriptors(parse_smiles(smi)); }
}  // namespace

TEST_CASE("ethane basics") {
  auto d = desc("CC");
  CHECK(d.rotatable_bonds == 0);
  CHECK(d.fsp3 == 1.0);
  CHECK_THAT(d.mw, Catch::Matchers::WithinAbs(30.07, 0.01));
  CHECK(d.hbd == 0);
  CHECK(d.hba == 0);
}

TEST_CASE("molecular weight against hand table") {
  // hand sums over the element weight table, implicit hydrogens included
  const std::map<std::string, double> expected = {
      {"C", 16.043},        // CH4
      {"O", 18.015},        // H2O
      {"CO", 32.042},       // methanol CH4O
      {"C(=O)O", 46.025},   // formic acid CH2O2
      {"c1ccccc1", 78.114}, // benzene C6H6
      {"CC(=O)C", 58.080},  // acetone C3H6O
      {"N", 17.031},        // ammonia NH3
      {"ClCCl", 84.93},     // DCM CH2Cl2
      {"CS", 48.107},       // methanethiol CH4S
      {"FC(F)(F)F", 88.004} // CF4
  };
  for (const auto& [smi, mw] : expected) {
    CHECK_THAT(desc(smi.c_str()).mw, Catch::Matchers::WithinAbs(mw, 0.02));
  }
}

TEST_CASE("n-pentane has two rotatable bonds") {
  CHECK(desc("CCCCC").rotatable_bonds == 2);
}

TEST_CASE("amide bonds are not rotatable") {
  // N-methylacetamide: only the C-N amide bond is a candidate, excluded
  CHECK(desc("CC(=O)NC").rotatable_bonds == 0);
  // ester counterpart rotates
  CHECK(desc("CC(=O)OC").rotatable_bonds == 1);
}

TEST_CASE("nitrile-adjacent bonds are not rotatable") {
  CHECK(desc("N#Cc1ccccc1").rotatable_bonds == 0);
}

TEST_CASE("fsp3 bounds and values") {
  CHECK(desc("c1ccccc1").fsp3 == 0.0);
  CHECK(desc("C1CCCCC1").fsp3 == 1.0);
  auto d = desc("Cc1ccccc1");  // toluene: 1 of 7
  CHECK_THAT(d.fsp3, Catch::Matchers::WithinAbs(1.0 / 7.0, 1e-12));
}

TEST_CASE("stereocenter detection") {
  CHECK(desc("C[C@H](N)C(=O)O").stereocenters == 1);  // explicit
  CHECK(desc("CC(N)C(=O)O").stereocenters == 1);      // four distinct environments
  CHECK(desc("CC(C)O").stereocenters == 0);           // two methyls identical
  CHECK(desc("c1ccccc1C2CCCCC2").stereocenters == 0); // symmetric ring arms
}

TEST_CASE("ring descriptors") {
  auto d = desc("c1ccc2ccccc2c1");
  CHECK(d.ring_count == 2);
  CHECK(d.largest_ring == 6);
  CHECK(desc("C1CCCCCCC1").largest_ring == 8);
}

TEST_CASE("tpsa reference fragments") {
  CHECK(desc("CCCC").tpsa == 0.0);
  CHECK_THAT(desc("CO").tpsa, Catch::Matchers::WithinAbs(20.23, 0.01));
  CHECK_THAT(desc("COC").tpsa, Catch::Matchers::WithinAbs(9.23, 0.01));
  CHECK_THAT(desc("CC(=O)O").tpsa, Catch::Matchers::WithinAbs(37.30, 0.01));
  CHECK_THAT(desc("c1ccncc1").tpsa, Catch::Matchers::WithinAbs(12.89, 0.01));
  CHECK_THAT(desc("CC(=O)NC").tpsa, Catch::Matchers::WithinAbs(29.10, 0.01));
  CHECK(desc("O=[N+]([O-])c1ccccc1").tpsa > 40.0);
}

TEST_CASE("hbd and hba") {
  auto d = desc("CC(=O)Nc1ccc(O)cc1");  // paracetamol
  CHECK(d.hbd == 2);                    // amide NH + phenol OH
  CHECK(d.hba == 2);                    // carbonyl O + phenol O (amide N excluded)
  CHECK(desc("c1cc[nH]c1").hbd == 1);
  CHECK(desc("c1cc[nH]c1").hba == 0);   // pyrrole N donates its lone pair to the ring
}

TEST_CASE("portfolio masses match the published tables") {
  for (const auto& entry : testdata::portfolio()) {
    auto d = descriptors(parse_smiles(entry.smiles));
    double got = entry.mass_kind == testdata::MassKind::Average ? d.mw : d.monoisotopic_mw;
    INFO(entry.id);
    CHECK_THAT(got, Catch::Matchers::WithinAbs(entry.expected_mass, 1.0));
  }
}

TEST_CASE("portfolio descriptor spot checks") {
  std::map<std::string, DescriptorSet> by_id;
  for (const auto& entry : testdata::portfolio())
    by_id[entry.id] = descriptors(parse_smiles(entry.smiles));

  CHECK(by_id["SP1_YJJ_oxaazaspiro_fm_0599"].rotatable_bonds == 8);
  CHECK(by_id["3c_piperazinone_mol353"].rotatable_bonds == 4);
  CHECK(by_id["1b_4azaindole_mol16"].rotatable_bonds == 11);

  const auto& tr1 = by_id["TR1_YJJ_piperazine_fm_0648"];
  CHECK(tr1.stereocenters == 0);
  CHECK_THAT(tr1.fsp3, Catch::Matchers::WithinAbs(0.32, 0.02));
}

TEST_CASE("portfolio clogp within published tolerance") {
  const std::map<std::string, double> ref = {
      {"SP1_YJJ_oxaazaspiro_fm_0599", 4.8}, {"div_BM_5_sd6_1782", 4.0},
      {"ben_BM_1_ge_sd6_1122", 5.9},        {"LR6_BM5_urea_fm_0306", 3.4},
      {"div_BM_5_sd6_1773", 3.9},           {"chi8_YJJ_morph_TWI_fm_1296", 6.0},
      {"RC1_TWI_oxazinone_fm_0313", 4.3},   {"chimera_B_bcp_mol828", 5.2},
      {"2c_cyclopentane_mol1428", 5.6},     {"6e_pyrrole_mol804", 4.7},
      {"3c_piperazinone_mol353", 3.7},
  };
  for (const auto& entry : testdata::portfolio()) {
    auto it = ref.find(entry.id);
    if (it == ref.end()) continue;
    INFO(entry.id);
    CHECK_THAT(descriptors(parse_smiles(entry.smiles)).clogp,
               Catch::Matchers::WithinAbs(it->second, 1.0));
  }
}

TEST_CASE("descriptor invariance under permutation") {
  Molecule m = parse_smiles(testdata::portfolio()[2].smiles);
  auto d0 = descriptors(m);
  std::vector<int> perm(m.atom_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  auto d1 = descriptors(permute_molecule(m, perm));
  CHECK_THAT(d1.mw, Catch::Matchers::WithinAbs(d0.mw, 1e-9));
  CHECK_THAT(d1.clogp, Catch::Matchers::WithinAbs(d0.clogp, 1e-9));
  CHECK_THAT(d1.tpsa, Catch::Matchers::WithinAbs(d0.tpsa, 1e-9));
  CHECK(d0.rotatable_bonds == d1.rotatable_bonds);
  CHECK(d0.stereocenters == d1.stereocenters);
  CHECK(d0.fsp3 == d1.fsp3);
}
