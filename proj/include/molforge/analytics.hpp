//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "molforge/fingerprint.hpp"
#include "molforge/mol.hpp"
#include "molforge/scaffold.hpp"
#include "molforge/smiles.hpp"

namespace molforge {

struct LengthMismatch : Error {
  using Error::Error;
};
struct DegenerateInput : Error {
  using Error::Error;
};
struct SingleClass : Error {
  using Error::Error;
};
struct JoinEmpty : Error {
  using Error::Error;
};
struct EmptyBenchmark : Error {
  using Error::Error;
};

// --- Records -----------------------------------------------------------------

struct BenchmarkRecord {
  std::string id;
  std::string smiles;
  double pchembl = 0.0;
  std::optional<double> pchembl_stddev;
  bool high_variance = false;  // stddev > 1.0
};

struct ScoredRecord {
  std::string id;
  std::string smiles;
  double affinity_score = 0.0;     // log10 IC50 scale, lower = stronger
  double binding_probability = 0.0;
  std::string series_id;
  std::string seed_id;
  std::string strategy_tier;
};

// --- CSV ingestion -------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

inline std::map<std::string, size_t> csv_header(const std::string& line) {
  std::map<std::string, size_t> idx;
  auto fields = split_csv_line(line);
  for (size_t i = 0; i < fields.size(); ++i) idx[fields[i]] = i;
  return idx;
}

}  // namespace detail

struct BenchmarkIngest {
  std::vector<BenchmarkRecord> records;
  size_t skipped_parse_failures = 0;
};

// Benchmark CSV: id,smiles,pchembl[,pchembl_stddev]. Rows whose SMILES
// fail to parse are counted and skipped.
inline BenchmarkIngest ingest_benchmark(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("benchmark csv: empty input");
  auto header = detail::csv_header(line);
  for (const char* col : {"id", "smiles", "pchembl"})
    if (!header.count(col)) throw SchemaError(std::string("benchmark csv: missing column ") + col);
  bool has_stddev = header.count("pchembl_stddev") > 0;

  BenchmarkIngest out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    auto get = [&](const char* col) -> std::string {
      size_t i = header.at(col);
      return i < fields.size() ? fields[i] : std::string{};
    };
    BenchmarkRecord rec;
    rec.id = get("id");
    rec.smiles = get("smiles");
    try {
      parse_smiles(rec.smiles);
    } catch (const ParseError&) {
      ++out.skipped_parse_failures;
      continue;
    }
    rec.pchembl = std::stod(get("pchembl"));
    if (has_stddev) {
      std::string sd = get("pchembl_stddev");
      if (!sd.empty()) {
        rec.pchembl_stddev = std::stod(sd);
        rec.high_variance = *rec.pchembl_stddev > 1.0;
      }
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

// Scores CSV: id,smiles,affinity_score,binding_probability
// [,series_id,seed_id,strategy_tier].
inline std::vector<ScoredRecord> ingest_scores(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("scores csv: empty input");
  auto header = detail::csv_header(line);
  for (const char* col : {"id", "smiles", "affinity_score", "binding_probability"})
    if (!header.count(col)) throw SchemaError(std::string("scores csv: missing column ") + col);

  std::vector<ScoredRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    auto get = [&](const char* col) -> std::string {
      auto it = header.find(col);
      if (it == header.end() || it->second >= fields.size()) return {};
      return fields[it->second];
    };
    ScoredRecord rec;
    rec.id = get("id");
    rec.smiles = get("smiles");
    rec.affinity_score = std::stod(get("affinity_score"));
    rec.binding_probability = std::stod(get("binding_probability"));
    rec.series_id = get("series_id");
    rec.seed_id = get("seed_id");
    rec.strategy_tier = get("strategy_tier");
    out.push_back(std::move(rec));
  }
  return out;
}

// --- Rank metrics ---------------------------------------------------------------

namespace detail {

// Average ranks (1-based) with tie sharing.
inline std::vector<double> average_ranks(const std::vector<double>& xs) {
  const size_t n = xs.size();
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace detail

// Spearman rank correlation with average-rank tie handling.
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw LengthMismatch("spearman: length mismatch");
  if (xs.size() < 2) throw LengthMismatch("spearman: need at least two points");
  auto rx = detail::average_ranks(xs);
  auto ry = detail::average_ranks(ys);
  double mx = 0, my = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(rx.size());
  my /= static_cast<double>(ry.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateInput("spearman: constant input vector");
  return sxy / std::sqrt(sxx * syy);
}

// ROC AUC via the rank-sum (Mann-Whitney) statistic; ties count half.
// Callers orient scores so that higher = more likely positive.
inline double roc_auc(const std::vector<double>& scores, const std::vector<char>& labels) {
  if (scores.size() != labels.size()) throw LengthMismatch("roc_auc: length mismatch");
  size_t n_pos = 0, n_neg = 0;
  for (char l : labels) (l ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) throw SingleClass("roc_auc: both classes required");
  auto ranks = detail::average_ranks(scores);
  double rank_sum_pos = 0.0;
  for (size_t i = 0; i < scores.size(); ++i)
    if (labels[i]) rank_sum_pos += ranks[i];
  double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// --- Calibration -----------------------------------------------------------------

struct CalibrationReport {
  size_t n_scored = 0;
  double spearman_rho = 0.0;
  double roc_auc_affinity = 0.0;
  double roc_auc_probability = 0.0;
  double active_threshold = 6.5;
  size_t excluded_band_count = 0;
};

struct CalibrateOptions {
  double threshold = 6.5;
  double exclusion_halfwidth = 0.5;
  bool exclude_high_variance = false;  // sensitivity switch; default keeps them
};

// Joins benchmark and scores (by id; canonical SMILES when the id is
// blank), computes Spearman over all joined rows, and ROC AUC over rows
// outside the exclusion band [threshold - halfwidth, threshold).
// Affinity scores are negated internally so a good model reports a high
// AUC despite lower-is-stronger score orientation.
inline CalibrationReport calibrate(const std::vector<BenchmarkRecord>& benchmark,
                                   const std::vector<ScoredRecord>& scores,
                                   const CalibrateOptions& opts = {}) {
  auto key_of = [](const std::string& id, const std::string& smiles) {
    if (!id.empty()) return id;
    return canonical_smiles(smiles);
  };
  std::map<std::string, const BenchmarkRecord*> by_key;
  for (const auto& rec : benchmark) {
    if (opts.exclude_high_variance && rec.high_variance) continue;
    by_key[key_of(rec.id, rec.smiles)] = &rec;
  }

  std::vector<double> affinity, probability, pchembl;
  for (const auto& s : scores) {
    auto it = by_key.find(key_of(s.id, s.smiles));
    if (it == by_key.end()) continue;
    affinity.push_back(s.affinity_score);
    probability.push_back(s.binding_probability);
    pchembl.push_back(it->second->pchembl);
  }
  if (affinity.empty()) throw JoinEmpty("calibrate: no joinable rows");

  CalibrationReport report;
  report.n_scored = affinity.size();
  report.active_threshold = opts.threshold;
  report.spearman_rho = spearman(affinity, pchembl);

  std::vector<double> auc_affinity, auc_probability;
  std::vector<char> labels;
  const double band_lo = opts.threshold - opts.exclusion_halfwidth;
  for (size_t i = 0; i < affinity.size(); ++i) {
    if (pchembl[i] >= band_lo && pchembl[i] < opts.threshold) {
      ++report.excluded_band_count;
      continue;
    }
    auc_affinity.push_back(-affinity[i]);  // lower score = stronger binder
    auc_probability.push_back(probability[i]);
    labels.push_back(pchembl[i] >= opts.threshold ? 1 : 0);
  }
  report.roc_auc_affinity = roc_auc(auc_affinity, labels);
  report.roc_auc_probability = roc_auc(auc_probability, labels);
  return report;
}

// --- Novelty ----------------------------------------------------------------------

struct NoveltyReport {
  size_t n_generated = 0;          // deduplicated molecules entering the analysis
  size_t n_duplicates_removed = 0; // within-set canonical duplicates
  size_t n_benchmark_matches = 0;  // exact canonical matches removed
  size_t n_scaffolds = 0;
  size_t n_novel_scaffolds = 0;
  double novelty_pct = 0.0;
  double median_max_tanimoto = 0.0;
  std::vector<double> per_molecule_max_tanimoto;
  std::vector<std::string> retained_canonical;  // parallel to the tanimoto list
};

inline NoveltyReport novelty_analysis(const std::vector<Molecule>& generated,
                                      const std::vector<Molecule>& benchmark) {
  if (benchmark.empty()) throw EmptyBenchmark("novelty: benchmark set is empty");

  std::set<std::string> benchmark_canon;
  std::vector<Fingerprint> benchmark_fps;
  std::set<ScaffoldKey> benchmark_keys;
  for (const auto& m : benchmark) {
    benchmark_canon.insert(write_canonical(m));
    benchmark_fps.push_back(morgan_fingerprint(m));
    ScaffoldKey key = generic_scaffold_key(m);
    if (!key.empty()) benchmark_keys.insert(key);
  }

  NoveltyReport report;
  std::set<std::string> seen;
  std::vector<const Molecule*> retained;
  for (const auto& m : generated) {
    std::string canon = write_canonical(m);
    if (!seen.insert(canon).second) {
      ++report.n_duplicates_removed;
      continue;
    }
    if (benchmark_canon.count(canon)) {
      ++report.n_benchmark_matches;
      continue;
    }
    retained.push_back(&m);
    report.retained_canonical.push_back(std::move(canon));
  }
  report.n_generated = retained.size();

  std::set<ScaffoldKey> keys;
  for (const Molecule* m : retained) {
    auto [best, idx] = max_similarity(morgan_fingerprint(*m), benchmark_fps);
    report.per_molecule_max_tanimoto.push_back(best);
    ScaffoldKey key = generic_scaffold_key(*m);
    if (!key.empty()) keys.insert(key);
  }
  report.n_scaffolds = keys.size();
  for (const auto& key : keys)
    if (!benchmark_keys.count(key)) ++report.n_novel_scaffolds;
  report.novelty_pct = keys.empty() ? 0.0
                                    : 100.0 * static_cast<double>(report.n_novel_scaffolds) /
                                          static_cast<double>(keys.size());

  if (!report.per_molecule_max_tanimoto.empty()) {
    std::vector<double> sorted = report.per_molecule_max_tanimoto;
    std::sort(sorted.begin(), sorted.end());
    size_t n = sorted.size();
    report.median_max_tanimoto =
        n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  }
  return report;
}

// --- Strategy x seed heatmap ---------------------------------------------------------

struct HeatmapCell {
  int n = 0;
  double mean_affinity = 0.0;
  double best_affinity = 0.0;  // minimum (strongest predicted binder)
};

using Heatmap = std::map<std::pair<std::string, std::string>, HeatmapCell>;

inline Heatmap strategy_heatmap(const std::vector<ScoredRecord>& scores) {
  Heatmap table;
  std::map<std::pair<std::string, std::string>, double> sums;
  for (const auto& s : scores) {
    std::string tier = s.strategy_tier.empty() ? "unassigned" : s.strategy_tier;
    std::string seed = s.seed_id.empty() ? "unassigned" : s.seed_id;
    auto key = std::make_pair(tier, seed);
    auto& cell = table[key];
    if (cell.n == 0 || s.affinity_score < cell.best_affinity)
      cell.best_affinity = s.affinity_score;
    sums[key] += s.affinity_score;
    ++cell.n;
  }
  for (auto& [key, cell] : table) cell.mean_affinity = sums[key] / cell.n;
  return table;
}

// --- Report serialization ---------------------------------------------------------

inline nlohmann::ordered_json calibration_report_json(const CalibrationReport& r) {
  nlohmann::ordered_json j;
  j["n_scored"] = r.n_scored;
  j["spearman_rho"] = r.spearman_rho;
  j["roc_auc_affinity"] = r.roc_auc_affinity;
  j["roc_auc_probability"] = r.roc_auc_probability;
  j["active_threshold"] = r.active_threshold;
  j["excluded_band_count"] = r.excluded_band_count;
  return j;
}

inline nlohmann::ordered_json novelty_report_json(const NoveltyReport& r) {
  nlohmann::ordered_json j;
  j["n_generated"] = r.n_generated;
  j["n_duplicates_removed"] = r.n_duplicates_removed;
  j["n_benchmark_matches"] = r.n_benchmark_matches;
  j["n_scaffolds"] = r.n_scaffolds;
  j["n_novel_scaffolds"] = r.n_novel_scaffolds;
  j["novelty_pct"] = r.novelty_pct;
  j["median_max_tanimoto"] = r.median_max_tanimoto;
  return j;
}

inline void write_heatmap_csv(std::ostream& os, const Heatmap& table) {
  os << "strategy_tier,seed_id,n,mean_affinity,best_affinity\n";
  for (const auto& [key, cell] : table) {
    os << key.first << ',' << key.second << ',' << cell.n << ',' << cell.mean_affinity << ','
       << cell.best_affinity << '\n';
  }
}

}  // namespace molforge
