//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "corpus.hpp"
#include "molforge/analytics.hpp"

using namespace molforge;

namespace {

// Independent Spearman oracle: counting ranks (no sorting) then Pearson.
double spearman_oracle(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto count_ranks = [](const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (size_t j = 0; j < v.size(); ++j) {
        if (v[j] < v[i]) ++less;
        if (v[j] == v[i]) ++equal;
      }
      ranks[i] = less + (equal + 1) / 2.0;
    }
    return ranks;
  };
  auto rx = count_ranks(xs);
  auto ry = count_ranks(ys);
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += rx[i];
    sy += ry[i];
    sxy += rx[i] * ry[i];
    sxx += rx[i] * rx[i];
    syy += ry[i] * ry[i];
  }
  double cov = sxy - sx * sy / n;
  double vx = sxx - sx * sx / n;
  double vy = syy - sy * sy / n;
  return cov / std::sqrt(vx * vy);
}

// O(n^2) pairwise-comparison AUC oracle.
double auc_oracle(const std::vector<double>& scores, const std::vector<char>& labels) {
  double wins = 0;
  size_t n_pos = 0, n_neg = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    ++n_pos;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  for (char l : labels)
    if (!l) ++n_neg;
  return wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace

TEST_CASE("spearman endpoints") {
  std::vector<double> xs{1, 2, 3, 4, 5};
  std::vector<double> ys{2, 4, 6, 8, 10};
  CHECK_THAT(spearman(xs, ys), Catch::Matchers::WithinAbs(1.0, 1e-15));
  std::vector<double> neg{10, 8, 6, 4, 2};
  CHECK_THAT(spearman(xs, neg), Catch::Matchers::WithinAbs(-1.0, 1e-15));
}

TEST_CASE("spearman errors") {
  CHECK_THROWS_AS(spearman({1, 2}, {1, 2, 3}), LengthMismatch);
  CHECK_THROWS_AS(spearman({1}, {1}), LengthMismatch);
  CHECK_THROWS_AS(spearman({3, 3, 3}, {1, 2, 3}), DegenerateInput);
}

TEST_CASE("spearman matches the counting oracle with ties") {
  std::mt19937 rng(8912);
  std::uniform_int_distribution<int> n_dist(2, 200);
  std::uniform_int_distribution<int> value(0, 20);  // heavy ties
  for (int trial = 0; trial < 300; ++trial) {
    int n = n_dist(rng);
    std::vector<double> xs(static_cast<size_t>(n)), ys(static_cast<size_t>(n));
    for (auto& x : xs) x = value(rng);
    for (auto& y : ys) y = value(rng);
    bool cx = std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs[0]; });
    bool cy = std::all_of(ys.begin(), ys.end(), [&](double v) { return v == ys[0]; });
    if (cx || cy) continue;
    CHECK_THAT(spearman(xs, ys), Catch::Matchers::WithinAbs(spearman_oracle(xs, ys), 1e-12));
  }
}

TEST_CASE("roc auc basics") {
  // perfectly separated
  CHECK(roc_auc({1, 2, 3, 10, 11}, {0, 0, 0, 1, 1}) == 1.0);
  CHECK(roc_auc({10, 11, 1, 2, 3}, {0, 0, 1, 1, 1}) == 0.0);
  CHECK_THROWS_AS(roc_auc({1, 2}, {1, 1}), SingleClass);
  CHECK_THROWS_AS(roc_auc({1, 2}, {1}), LengthMismatch);
  // all-tied scores give exactly one half
  CHECK(roc_auc({5, 5, 5, 5}, {0, 1, 0, 1}) == 0.5);
}

TEST_CASE("roc auc matches the pairwise oracle and antisymmetry holds") {
  std::mt19937 rng(120657);
  std::uniform_int_distribution<int> n_dist(4, 200);
  std::uniform_int_distribution<int> value(0, 15);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 300; ++trial) {
    int n = n_dist(rng);
    std::vector<double> scores(static_cast<size_t>(n));
    std::vector<char> labels(static_cast<size_t>(n));
    for (auto& s : scores) s = value(rng);
    bool any_pos = false, any_neg = false;
    for (auto& l : labels) {
      l = coin(rng);
      (l ? any_pos : any_neg) = true;
    }
    if (!any_pos || !any_neg) continue;
    double auc = roc_auc(scores, labels);
    CHECK_THAT(auc, Catch::Matchers::WithinAbs(auc_oracle(scores, labels), 1e-12));
    // negation maps AUC -> 1 - AUC exactly
    std::vector<double> negated(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) negated[i] = -scores[i];
    CHECK(roc_auc(negated, labels) == 1.0 - auc);
  }
}

TEST_CASE("benchmark ingestion") {
  std::istringstream csv(
      "id,smiles,pchembl,pchembl_stddev\n"
      "a,CCO,6.1,0.4\n"
      "b,c1ccccc1,7.2,1.2\n"
      "c,C1CC,5.0,\n"
      "d,CCN,5.5,\n");
  auto result = ingest_benchmark(csv);
  REQUIRE(result.records.size() == 3);
  CHECK(result.skipped_parse_failures == 1);
  CHECK_FALSE(result.records[0].high_variance);
  CHECK(result.records[1].high_variance);
  CHECK_FALSE(result.records[2].pchembl_stddev.has_value());

  std::istringstream missing("id,smiles\na,CCO\n");
  CHECK_THROWS_AS(ingest_benchmark(missing), SchemaError);

  std::istringstream no_stddev("id,smiles,pchembl\na,CCO,6.1\n");
  CHECK(ingest_benchmark(no_stddev).records.size() == 1);
}

TEST_CASE("calibrate on a synthetic monotone score set") {
  std::vector<BenchmarkRecord> bench;
  std::vector<ScoredRecord> scores;
  for (int i = 0; i < 40; ++i) {
    BenchmarkRecord b;
    b.id = "m" + std::to_string(i);
    b.pchembl = 4.0 + i * 0.1;
    bench.push_back(b);
    ScoredRecord s;
    s.id = b.id;
    s.affinity_score = -b.pchembl;  // perfect inverse
    s.binding_probability = (b.pchembl - 4.0) / 4.0;
    scores.push_back(s);
  }
  auto report = calibrate(bench, scores);
  CHECK_THAT(report.spearman_rho, Catch::Matchers::WithinAbs(-1.0, 1e-12));
  CHECK(report.roc_auc_affinity == 1.0);
  CHECK(report.roc_auc_probability == 1.0);
  CHECK(report.n_scored == 40);
}

TEST_CASE("calibration exclusion band") {
  std::vector<BenchmarkRecord> bench;
  std::vector<ScoredRecord> scores;
  const double pchembls[] = {5.9, 6.0, 6.49, 6.5, 7.0};
  for (int i = 0; i < 5; ++i) {
    BenchmarkRecord b;
    b.id = "x" + std::to_string(i);
    b.pchembl = pchembls[i];
    bench.push_back(b);
    ScoredRecord s;
    s.id = b.id;
    s.affinity_score = -pchembls[i];
    s.binding_probability = 0.5;
    scores.push_back(s);
  }
  auto report = calibrate(bench, scores);
  CHECK(report.excluded_band_count == 2);  // 6.0 and 6.49
  CHECK(report.n_scored == 5);
  CHECK(report.roc_auc_affinity == 1.0);  // 5.9 inactive vs {6.5, 7.0} active
}

TEST_CASE("calibrate joins by canonical smiles when ids are blank") {
  std::vector<BenchmarkRecord> bench(2);
  bench[0].smiles = "CCO";
  bench[0].pchembl = 7.0;
  bench[1].smiles = "c1ccccc1";
  bench[1].pchembl = 5.0;
  std::vector<ScoredRecord> scores(2);
  scores[0].smiles = "OCC";  // same molecule, different writing
  scores[0].affinity_score = -7.0;
  scores[1].smiles = "c1ccccc1";
  scores[1].affinity_score = -5.0;
  auto report = calibrate(bench, scores);
  CHECK(report.n_scored == 2);

  std::vector<ScoredRecord> disjoint(1);
  disjoint[0].smiles = "CCCC";
  disjoint[0].affinity_score = 1.0;
  CHECK_THROWS_AS(calibrate(bench, disjoint), JoinEmpty);
}

TEST_CASE("shuffled scores lose their signal") {
  std::mt19937 rng(5);
  std::vector<BenchmarkRecord> bench;
  std::vector<ScoredRecord> scores;
  for (int i = 0; i < 400; ++i) {
    BenchmarkRecord b;
    b.id = std::to_string(i);
    b.pchembl = 4.0 + (i % 50) * 0.1;
    bench.push_back(b);
    ScoredRecord s;
    s.id = b.id;
    s.affinity_score = -b.pchembl;
    s.binding_probability = 0.5;
    scores.push_back(s);
  }
  std::vector<double> shuffled;
  for (const auto& s : scores) shuffled.push_back(s.affinity_score);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  for (size_t i = 0; i < scores.size(); ++i) scores[i].affinity_score = shuffled[i];

  auto report = calibrate(bench, scores);
  CHECK(std::abs(report.spearman_rho) < 0.15);
  CHECK(std::abs(report.roc_auc_affinity - 0.5) < 0.1);
}

TEST_CASE("novelty on identical sets") {
  std::vector<Molecule> set;
  for (const char* smi : {"c1ccccc1O", "Cc1ccccc1", "c1ccncc1"}) set.push_back(parse_smiles(smi));
  auto report = novelty_analysis(set, set);
  CHECK(report.n_generated == 0);  // all removed as exact matches
  CHECK(report.n_benchmark_matches == 3);
  CHECK(report.novelty_pct == 0.0);
}

TEST_CASE("novelty with disjoint scaffolds") {
  std::vector<Molecule> generated;
  for (const char* smi : {"C1CCOC1C", "C1CCNCC1C"}) generated.push_back(parse_smiles(smi));
  std::vector<Molecule> bench;
  for (const char* smi : {"c1ccccc1", "c1ccc2ccccc2c1"}) bench.push_back(parse_smiles(smi));
  auto report = novelty_analysis(generated, bench);
  CHECK(report.n_generated == 2);
  CHECK(report.n_scaffolds == 2);
  CHECK(report.n_novel_scaffolds == 2);
  CHECK(report.novelty_pct == 100.0);
  for (double t : report.per_molecule_max_tanimoto) {
    CHECK(t > 0.0);
    CHECK(t < 1.0);
  }
}

TEST_CASE("novelty matches a hand-built oracle on a 20 molecule fixture") {
  const char* generated_smiles[] = {
      "Cc1ccccc1",  "CCc1ccccc1", "Cc1ccccc1",   "c1ccccc1",    "Oc1ccncc1",
      "CC1CCCCC1",  "CC(=O)CC",   "CCCCCC",      "C1CCOC1",     "CC1CCOC1",
      "c1ccc2ccccc2c1", "Cc1ccc2ccccc2c1", "OCCN", "CC(C)(C)C", "C1CC1"};
  const char* benchmark_smiles[] = {"c1ccccc1", "c1ccncc1", "CCO", "C1CCCCC1", "CCCC"};
  std::vector<Molecule> generated, bench;
  for (auto s : generated_smiles) generated.push_back(parse_smiles(s));
  for (auto s : benchmark_smiles) bench.push_back(parse_smiles(s));

  auto report = novelty_analysis(generated, bench);

  // oracle: dedup by canonical, drop exact benchmark matches
  std::set<std::string> bench_canon;
  std::vector<Fingerprint> bench_fps;
  std::set<std::string> bench_keys;
  for (const auto& m : bench) {
    bench_canon.insert(write_canonical(m));
    bench_fps.push_back(morgan_fingerprint(m));
    auto k = generic_scaffold_key(m);
    if (!k.empty()) bench_keys.insert(k);
  }
  std::set<std::string> seen;
  std::vector<const Molecule*> retained;
  size_t dups = 0, matches = 0;
  for (const auto& m : generated) {
    auto c = write_canonical(m);
    if (!seen.insert(c).second) {
      ++dups;
      continue;
    }
    if (bench_canon.count(c)) {
      ++matches;
      continue;
    }
    retained.push_back(&m);
  }
  CHECK(report.n_duplicates_removed == dups);
  CHECK(report.n_benchmark_matches == matches);
  REQUIRE(report.n_generated == retained.size());

  std::vector<double> expect_tani;
  std::set<std::string> keys;
  for (auto* m : retained) {
    double best = 0;
    for (const auto& fp : bench_fps) best = std::max(best, tanimoto(morgan_fingerprint(*m), fp));
    expect_tani.push_back(best);
    auto k = generic_scaffold_key(*m);
    if (!k.empty()) keys.insert(k);
  }
  for (size_t i = 0; i < expect_tani.size(); ++i)
    CHECK(report.per_molecule_max_tanimoto[i] == expect_tani[i]);
  CHECK(report.n_scaffolds == keys.size());
  size_t novel = 0;
  for (const auto& k : keys)
    if (!bench_keys.count(k)) ++novel;
  CHECK(report.n_novel_scaffolds == novel);

  std::sort(expect_tani.begin(), expect_tani.end());
  double median = expect_tani.size() % 2 == 1
                      ? expect_tani[expect_tani.size() / 2]
                      : (expect_tani[expect_tani.size() / 2 - 1] +
                         expect_tani[expect_tani.size() / 2]) / 2.0;
  CHECK(report.median_max_tanimoto == median);

  CHECK_THROWS_AS(novelty_analysis(generated, {}), EmptyBenchmark);
}

TEST_CASE("novelty monotonicity: growing the benchmark never raises novelty") {
  std::vector<Molecule> generated;
  for (const char* smi : {"Cc1ccccc1", "CC1CCOC1", "c1ccc2[nH]ccc2c1"})
    generated.push_back(parse_smiles(smi));
  std::vector<Molecule> small_bench{parse_smiles("c1ccncc1")};
  std::vector<Molecule> big_bench = small_bench;
  big_bench.push_back(parse_smiles("C1CCOC1"));
  big_bench.push_back(parse_smiles("c1ccc2ccccc2c1"));

  auto r_small = novelty_analysis(generated, small_bench);
  auto r_big = novelty_analysis(generated, big_bench);
  CHECK(r_big.n_novel_scaffolds <= r_small.n_novel_scaffolds);
  for (size_t i = 0; i < r_small.per_molecule_max_tanimoto.size(); ++i)
    CHECK(r_big.per_molecule_max_tanimoto[i] >= r_small.per_molecule_max_tanimoto[i]);
}

TEST_CASE("novelty dedup is idempotent") {
  std::vector<Molecule> generated;
  for (const char* smi : {"Cc1ccccc1", "Cc1ccccc1", "CC1CCOC1"})
    generated.push_back(parse_smiles(smi));
  std::vector<Molecule> bench{parse_smiles("c1ccncc1")};
  auto first = novelty_analysis(generated, bench);

  std::vector<Molecule> retained;
  for (const auto& canon : first.retained_canonical) retained.push_back(parse_smiles(canon));
  auto second = novelty_analysis(retained, bench);
  CHECK(second.n_generated == first.n_generated);
  CHECK(second.n_duplicates_removed == 0);
  CHECK(second.n_scaffolds == first.n_scaffolds);
  CHECK(second.median_max_tanimoto == first.median_max_tanimoto);
}

TEST_CASE("strategy heatmap aggregation") {
  std::vector<ScoredRecord> scores(5);
  scores[0] = {"a", "", -3.0, 0.5, "s1", "seedA", "tier1"};
  scores[1] = {"b", "", -2.0, 0.5, "s1", "seedA", "tier1"};
  scores[2] = {"c", "", -4.0, 0.5, "s2", "seedB", "tier1"};
  scores[3] = {"d", "", -1.0, 0.5, "s3", "seedA", "tier2"};
  scores[4] = {"e", "", -5.0, 0.5, "", "", ""};

  auto table = strategy_heatmap(scores);
  REQUIRE(table.size() == 4);
  auto& t1a = table.at({"tier1", "seedA"});
  CHECK(t1a.n == 2);
  CHECK_THAT(t1a.mean_affinity, Catch::Matchers::WithinAbs(-2.5, 1e-12));
  CHECK(t1a.best_affinity == -3.0);
  CHECK(table.at({"tier1", "seedB"}).best_affinity == -4.0);
  CHECK(table.at({"tier2", "seedA"}).n == 1);
  CHECK(table.at({"unassigned", "unassigned"}).n == 1);

  // single record: mean equals best
  auto single = strategy_heatmap({scores[0]});
  CHECK(single.at({"tier1", "seedA"}).mean_affinity ==
        single.at({"tier1", "seedA"}).best_affinity);
}
