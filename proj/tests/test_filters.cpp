//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "corpus.hpp"
#include "molforge/filters.hpp"
#include "molforge/smiles.hpp"

using namespace molforge;

namespace {

const FilterPolicy& default_policy() {
  static const FilterPolicy p = FilterPolicy::with_default_alerts();
  return p;
}

FilterReport run(const char* smi, const Molecule* parent = nullptr) {
  FilterPolicy p = default_policy();
  if (!parent) p.stereocenter_cap_delta.reset();
  return apply_filters(parse_smiles(smi), parent, p);
}

}  // namespace

TEST_CASE("hard alert positive and negative controls") {
  struct Control {
    const char* alert;
    const char* positive;
    const char* negative;
  };
  const Control controls[] = {
      {"nitro", "O=[N+]([O-])c1ccccc1", "Nc1ccccc1"},
      {"aldehyde", "CC=O", "CC(=O)C"},
      {"epoxide", "CC1OC1", "C1COC1"},
      {"azide", "CN=[N+]=[N-]", "CC#N"},
      {"acyl_halide", "CC(=O)Cl", "CC(=O)O"},
      {"hydrazine", "CNN", "CN(C)C"},
      {"tropane", "CN1C2CCC1CC(O)C2", "C1CCNCC1"},
      {"terminal_alkyne", "C#CCCO", "CC#CC"},
  };
  const auto& policy = default_policy();
  for (const auto& c : controls) {
    const AlertEntry* entry = nullptr;
    for (const auto& e : policy.hard_alerts)
      if (e.name == c.alert) entry = &e;
    REQUIRE(entry != nullptr);
    INFO(c.alert);
    CHECK(has_match(entry->pattern, parse_smiles(c.positive)));
    CHECK_FALSE(has_match(entry->pattern, parse_smiles(c.negative)));
  }
}

TEST_CASE("nitrobenzene rejects with a nitro hit") {
  auto rep = run("O=[N+]([O-])c1ccccc1");
  CHECK(rep.verdict == FilterVerdict::Reject);
  bool found = false;
  for (const auto& [name, count] : rep.hard_hits)
    if (name == "nitro" && count == 1) found = true;
  CHECK(found);
}

TEST_CASE("cyclooctane rejects on ring size") {
  auto rep = run("C1CCCCCCC1");
  CHECK(rep.verdict == FilterVerdict::Reject);
  bool found = false;
  for (const auto& [name, count] : rep.hard_hits)
    if (name == "large_ring") found = true;
  CHECK(found);
}

TEST_CASE("cycloheptane passes the ring gate") {
  CHECK_FALSE(run("C1CCCCCC1").rejected());
}

TEST_CASE("aniline passes flagged") {
  auto rep = run("Nc1ccccc1");
  CHECK(rep.verdict == FilterVerdict::PassFlagged);
  REQUIRE(rep.soft_flags.size() == 1);
  CHECK(rep.soft_flags[0] == "aniline");
}

TEST_CASE("disallowed element and charge rules") {
  auto rep = run("[SnH4]");  // tin outside the allowed set
  CHECK(rep.rejected());

  auto charged = run("[O-]S(=O)(=O)[O-]");  // net -2
  CHECK(charged.rejected());

  auto zwitterion = run("[NH3+]CC(=O)[O-]");  // net 0, |atom| = 1
  CHECK_FALSE(zwitterion.rejected());
}

TEST_CASE("descriptor threshold violations are reported") {
  // a long lipophilic chain overshoots both clogp and rotatable bonds
  auto rep = run("CCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCC");
  CHECK(rep.rejected());
  bool saw_clogp = false, saw_rotb = false;
  for (const auto& v : rep.threshold_violations) {
    if (v.descriptor == "clogp") saw_clogp = true;
    if (v.descriptor == "rotatable_bonds") saw_rotb = true;
  }
  CHECK(saw_clogp);
  CHECK(saw_rotb);
}

TEST_CASE("stereocenter cap relative to parent") {
  Molecule parent = parse_smiles("CC(N)C(=O)O");  // 1 stereocenter
  FilterPolicy policy = default_policy();        // cap delta 2

  // child with 4 stereocenters exceeds parent+2
  Molecule child = parse_smiles("C[C@H](N)[C@@H](O)[C@H](F)[C@@H](Cl)C");
  auto rep = apply_filters(child, &parent, policy);
  CHECK(rep.rejected());
  bool found = false;
  for (const auto& v : rep.threshold_violations)
    if (v.descriptor == "stereocenters") found = true;
  CHECK(found);

  // same child within cap when the parent is itself stereo-rich
  auto rep2 = apply_filters(child, &child, policy);
  CHECK_FALSE(rep2.rejected());

  CHECK_THROWS_AS(apply_filters(child, nullptr, policy), MissingParent);
}

TEST_CASE("every hard hit is reproducible by has_match") {
  auto rep = run("O=CN=[N+]=[N-]");  // aldehyde plus azide
  CHECK(rep.rejected());
  const auto& policy = default_policy();
  for (const auto& [name, count] : rep.hard_hits) {
    const AlertEntry* entry = nullptr;
    for (const auto& e : policy.hard_alerts)
      if (e.name == name) entry = &e;
    REQUIRE(entry != nullptr);
    CHECK(has_match(entry->pattern, parse_smiles("O=CN=[N+]=[N-]")));
  }
}

TEST_CASE("catalog monotonicity: dropping an alert never rejects more") {
  FilterPolicy full = default_policy();
  full.stereocenter_cap_delta.reset();
  FilterPolicy reduced = full;
  reduced.hard_alerts.erase(reduced.hard_alerts.begin());  // drop nitro

  for (const char* smi : {"O=[N+]([O-])c1ccccc1", "CCO", "Nc1ccccc1", "CC=O"}) {
    Molecule m = parse_smiles(smi);
    auto with = apply_filters(m, nullptr, full);
    auto without = apply_filters(m, nullptr, reduced);
    if (!with.rejected()) CHECK_FALSE(without.rejected());
  }
}

TEST_CASE("determinism: identical inputs give identical reports") {
  for (int trial = 0; trial < 3; ++trial) {
    auto a = run("O=[N+]([O-])c1ccc(O)cc1");
    auto b = run("O=[N+]([O-])c1ccc(O)cc1");
    CHECK(a.verdict == b.verdict);
    CHECK(a.hard_hits == b.hard_hits);
    CHECK(a.soft_flags == b.soft_flags);
  }
}

TEST_CASE("batch filter attrition accounting") {
  std::vector<Molecule> batch;
  for (const char* smi :
       {"CCO", "O=[N+]([O-])C", "CCC", "O=[N+]([O-])CC", "c1ccccc1", "CC(C)C",
        "O=[N+]([O-])CCC", "CCN", "CCOC", "CCS"})
    batch.push_back(parse_smiles(smi));
  auto result = batch_filter(batch, default_policy());
  CHECK(result.stats.n_input == 10);
  CHECK(result.stats.n_rejected == 3);
  CHECK_THAT(result.stats.attrition(), Catch::Matchers::WithinAbs(0.3, 1e-12));
  CHECK(result.stats.reject_reasons.at("nitro") == 3);
  // order preserved
  for (size_t k = 1; k < result.retained_indices.size(); ++k)
    CHECK(result.retained_indices[k - 1] < result.retained_indices[k]);
}

TEST_CASE("batch filter on clean and empty input") {
  std::vector<Molecule> clean;
  for (const char* smi : {"CCO", "CCC"}) clean.push_back(parse_smiles(smi));
  auto r = batch_filter(clean, default_policy());
  CHECK(r.stats.attrition() == 0.0);
  CHECK(r.stats.n_retained == 2);

  auto empty = batch_filter({}, default_policy());
  CHECK(empty.stats.n_input == 0);
  CHECK(empty.stats.attrition() == 0.0);
  CHECK(empty.retained_indices.empty());
}

TEST_CASE("every portfolio molecule passes the default policy") {
  const auto& policy = default_policy();
  for (const auto& entry : testdata::portfolio()) {
    Molecule m = parse_smiles(entry.smiles);
    FilterPolicy p = policy;
    p.stereocenter_cap_delta.reset();
    auto rep = apply_filters(m, nullptr, p);
    INFO(entry.id);
    CHECK_FALSE(rep.rejected());
  }
}

TEST_CASE("catalog json round trip matches the embedded defaults") {
  auto catalog = default_alert_catalog();
  auto json = alert_catalog_to_json(catalog);
  std::stringstream buf;
  buf << json.dump(2);
  auto loaded = load_alert_catalog(buf);
  REQUIRE(loaded.size() == catalog.size());
  for (size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].name == catalog[i].name);
    CHECK(loaded[i].smarts == catalog[i].smarts);
    CHECK((loaded[i].severity == catalog[i].severity));
  }

  // the shipped file stays in sync with the embedded table
  std::ifstream shipped(std::string(MOLFORGE_SOURCE_DIR) + "/data/alerts_default.json");
  REQUIRE(shipped.good());
  auto from_file = load_alert_catalog(shipped);
  REQUIRE(from_file.size() == catalog.size());
  for (size_t i = 0; i < from_file.size(); ++i) CHECK(from_file[i].smarts == catalog[i].smarts);
}

TEST_CASE("malformed catalogs are rejected at load") {
  std::stringstream bad1("{\"not\": \"an array\"}");
  CHECK_THROWS_AS(load_alert_catalog(bad1), SchemaError);
  std::stringstream bad2(R"([{"name":"x","smarts":"[$(cc)]","severity":"hard"}])");
  CHECK_THROWS_AS(load_alert_catalog(bad2), UnsupportedFeature);
  std::stringstream bad3(R"([{"name":"x","smarts":"CC","severity":"medium"}])");
  CHECK_THROWS_AS(load_alert_catalog(bad3), SchemaError);
}
