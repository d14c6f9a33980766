//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "molforge/descriptors.hpp"
#include "molforge/match.hpp"
#include "molforge/mol.hpp"
#include "molforge/smarts.hpp"

namespace molforge {

struct MissingParent : Error {
  using Error::Error;
};

enum class AlertSeverity { Hard, Soft };

struct AlertEntry {
  std::string name;
  std::string smarts;
  AlertSeverity severity = AlertSeverity::Hard;
  std::string description;
  Pattern pattern;  // parsed at load
};

// Built-in structural alert catalog: reactive-group hard rejects plus the
// documented visual-review stand-ins, and the soft-flag families.
inline std::vector<AlertEntry> default_alert_catalog() {
  struct Row {
    const char* name;
    const char* smarts;
    AlertSeverity severity;
    const char* description;
  };
  static const Row rows[] = {
      {"nitro", "[N+](=O)[O-]", AlertSeverity::Hard, "nitro group"},
      {"aldehyde", "[CX3H1]=O", AlertSeverity::Hard, "aldehyde carbonyl"},
      {"epoxide", "C1OC1", AlertSeverity::Hard, "strained epoxide ring"},
      {"azide", "N=[N+]=[N-]", AlertSeverity::Hard, "azide"},
      {"azide_triple", "[N-][N+]#N", AlertSeverity::Hard, "azide, triple-bond form"},
      {"acyl_halide", "C(=O)[F,Cl,Br,I]", AlertSeverity::Hard, "acyl halide"},
      {"hydrazine", "[NX3H2][NX3]", AlertSeverity::Hard, "hydrazine N-N"},
      {"tropane", "C1CC2CCC(C1)N2", AlertSeverity::Hard,
       "tropane bridgehead (undefined bridgehead chirality)"},
      {"terminal_alkyne", "[CX2H1]#C", AlertSeverity::Hard,
       "terminal alkyne (CYP mechanism-based inactivator)"},

      {"aniline", "[NX3H2]c", AlertSeverity::Soft, "primary aniline"},
      {"phenol", "[OX2H1]c", AlertSeverity::Soft, "phenol"},
      {"thiol", "[SX2H1]", AlertSeverity::Soft, "thiol"},
      {"michael_acceptor", "C=CC=O", AlertSeverity::Soft, "Michael acceptor enone"},
      {"acyl_hydrazine", "C(=O)[NX3][NX3]", AlertSeverity::Soft, "acyl hydrazine"},
      {"sulfonamide", "S(=O)(=O)[NX3]", AlertSeverity::Soft, "sulfonamide"},
      {"enol_ether", "C=CO[CX4]", AlertSeverity::Soft, "enol ether"},
      {"halopyridine", "[F,Cl,Br,I]c:n", AlertSeverity::Soft, "2-halo azine"},
      {"phosphonate", "P(=O)([OX2])[OX2]", AlertSeverity::Soft, "phosphonate"},
      {"diazo", "[N-]=[N+]=C", AlertSeverity::Soft, "diazo group"},
  };
  std::vector<AlertEntry> out;
  for (const auto& r : rows) {
    AlertEntry e;
    e.name = r.name;
    e.smarts = r.smarts;
    e.severity = r.severity;
    e.description = r.description;
    e.pattern = parse_pattern(r.smarts);
    out.push_back(std::move(e));
  }
  return out;
}

inline nlohmann::ordered_json alert_catalog_to_json(const std::vector<AlertEntry>& catalog) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : catalog) {
    arr.push_back({{"name", e.name},
                   {"smarts", e.smarts},
                   {"severity", e.severity == AlertSeverity::Hard ? "hard" : "soft"},
                   {"description", e.description}});
  }
  return arr;
}

inline std::vector<AlertEntry> load_alert_catalog(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("alert catalog: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("alert catalog must be a JSON array");
  std::vector<AlertEntry> out;
  for (const auto& item : doc) {
    AlertEntry e;
    e.name = item.at("name").get<std::string>();
    e.smarts = item.at("smarts").get<std::string>();
    std::string sev = item.at("severity").get<std::string>();
    if (sev == "hard")
      e.severity = AlertSeverity::Hard;
    else if (sev == "soft")
      e.severity = AlertSeverity::Soft;
    else
      throw SchemaError("alert severity must be 'hard' or 'soft': " + e.name);
    e.description = item.value("description", "");
    e.pattern = parse_pattern(e.smarts);  // catalogs must parse at load
    out.push_back(std::move(e));
  }
  return out;
}

// --- Policy and reports ----------------------------------------------------

struct FilterPolicy {
  std::set<int> allowed_elements = {element::H,  element::B,  element::C, element::N,
                                    element::O,  element::F,  element::Si, element::P,
                                    element::S,  element::Cl, element::Br, element::Se,
                                    element::I};
  int max_formal_charge_abs = 1;       // net and per-atom
  int max_ring_size = 7;
  double mw_max = 650.0;
  double clogp_max = 6.5;
  int rotb_max = 12;
  std::optional<int> stereocenter_cap_delta = 2;  // relative to parent
  std::vector<AlertEntry> hard_alerts;
  std::vector<AlertEntry> soft_alerts;

  static FilterPolicy with_default_alerts() {
    FilterPolicy p;
    for (auto& e : default_alert_catalog()) {
      (e.severity == AlertSeverity::Hard ? p.hard_alerts : p.soft_alerts).push_back(std::move(e));
    }
    return p;
  }
};

enum class FilterVerdict { PassClean, PassFlagged, Reject };

struct ThresholdViolation {
  std::string descriptor;
  double value;
  double limit;
};

struct FilterReport {
  FilterVerdict verdict = FilterVerdict::PassClean;
  std::vector<std::pair<std::string, int>> hard_hits;  // alert name, site count
  std::vector<std::string> soft_flags;
  std::vector<ThresholdViolation> threshold_violations;

  bool rejected() const { return verdict == FilterVerdict::Reject; }
};

enum class FilterMode {
  Full,          // evaluate every stage, complete report
  ShortCircuit,  // stop at the first rejecting stage
};

// Three-stage filter: (1) elements / charge / hard alerts / ring size,
// (2) descriptor thresholds, (3) soft flags. The stereocenter cap needs
// the parent molecule; requesting it without one is an error.
inline FilterReport apply_filters(const Molecule& m, const Molecule* parent,
                                  const FilterPolicy& policy, FilterMode mode = FilterMode::Full) {
  FilterReport report;

  // stage 1: structural hard rejects
  std::set<int> bad_elements;
  for (const auto& a : m.atoms()) {
    if (!policy.allowed_elements.count(a.element)) bad_elements.insert(a.element);
    if (std::abs(a.formal_charge) > policy.max_formal_charge_abs)
      report.hard_hits.push_back({"atomic_charge", 1});
  }
  for (int z : bad_elements)
    report.hard_hits.push_back({"element:" + std::string(element_symbol(z)), 1});
  int net = 0;
  for (const auto& a : m.atoms()) net += a.formal_charge;
  if (std::abs(net) > policy.max_formal_charge_abs)
    report.hard_hits.push_back({"net_charge", 1});
  if (m.rings().largest() > policy.max_ring_size)
    report.hard_hits.push_back({"large_ring", 1});

  for (const auto& alert : policy.hard_alerts) {
    if (mode == FilterMode::ShortCircuit && !report.hard_hits.empty()) break;
    auto matches = find_matches(alert.pattern, m);
    if (!matches.empty())
      report.hard_hits.push_back({alert.name, static_cast<int>(matches.size())});
  }

  if (mode == FilterMode::ShortCircuit && !report.hard_hits.empty()) {
    report.verdict = FilterVerdict::Reject;
    return report;
  }

  // stage 2: descriptor thresholds
  DescriptorSet d = descriptors(m);
  if (d.mw > policy.mw_max)
    report.threshold_violations.push_back({"mw", d.mw, policy.mw_max});
  if (d.clogp > policy.clogp_max)
    report.threshold_violations.push_back({"clogp", d.clogp, policy.clogp_max});
  if (d.rotatable_bonds > policy.rotb_max)
    report.threshold_violations.push_back(
        {"rotatable_bonds", static_cast<double>(d.rotatable_bonds),
         static_cast<double>(policy.rotb_max)});
  if (policy.stereocenter_cap_delta) {
    if (!parent)
      throw MissingParent("stereocenter cap requires the parent molecule");
    int cap = descriptors(*parent).stereocenters + *policy.stereocenter_cap_delta;
    if (d.stereocenters > cap)
      report.threshold_violations.push_back(
          {"stereocenters", static_cast<double>(d.stereocenters), static_cast<double>(cap)});
  }

  if (mode == FilterMode::ShortCircuit &&
      (!report.hard_hits.empty() || !report.threshold_violations.empty())) {
    report.verdict = FilterVerdict::Reject;
    return report;
  }

  // stage 3: soft flags
  for (const auto& alert : policy.soft_alerts) {
    if (has_match(alert.pattern, m)) report.soft_flags.push_back(alert.name);
  }

  if (!report.hard_hits.empty() || !report.threshold_violations.empty())
    report.verdict = FilterVerdict::Reject;
  else if (!report.soft_flags.empty())
    report.verdict = FilterVerdict::PassFlagged;
  else
    report.verdict = FilterVerdict::PassClean;
  return report;
}

// --- Batch filtering ---------------------------------------------------------

struct AttritionStats {
  size_t n_input = 0;
  size_t n_retained = 0;
  size_t n_rejected = 0;
  size_t n_flagged = 0;  // retained with soft flags
  std::map<std::string, int> reject_reasons;
  std::map<std::string, int> soft_flag_counts;

  double attrition() const {
    return n_input == 0 ? 0.0 : static_cast<double>(n_rejected) / static_cast<double>(n_input);
  }
};

struct BatchFilterResult {
  std::vector<size_t> retained_indices;  // order-preserving
  std::vector<FilterReport> reports;     // one per input molecule
  AttritionStats stats;
};

// Order-preserving batch filter. Without parent information the
// parent-relative stereocenter cap is skipped.
inline BatchFilterResult batch_filter(const std::vector<Molecule>& molecules,
                                      const FilterPolicy& policy,
                                      const std::vector<const Molecule*>* parents = nullptr) {
  FilterPolicy with_cap = policy;
  FilterPolicy no_cap = policy;
  no_cap.stereocenter_cap_delta.reset();

  BatchFilterResult out;
  out.stats.n_input = molecules.size();
  for (size_t i = 0; i < molecules.size(); ++i) {
    const Molecule* parent = parents ? (*parents)[i] : nullptr;
    const FilterPolicy& per = parent ? with_cap : no_cap;
    FilterReport rep = apply_filters(molecules[i], parent, per);
    if (rep.rejected()) {
      ++out.stats.n_rejected;
      for (const auto& [name, count] : rep.hard_hits) out.stats.reject_reasons[name] += 1;
      for (const auto& v : rep.threshold_violations) out.stats.reject_reasons[v.descriptor] += 1;
    } else {
      ++out.stats.n_retained;
      out.retained_indices.push_back(i);
      if (rep.verdict == FilterVerdict::PassFlagged) ++out.stats.n_flagged;
    }
    for (const auto& f : rep.soft_flags) out.stats.soft_flag_counts[f] += 1;
    out.reports.push_back(std::move(rep));
  }
  return out;
}

// Summary mirroring the published filtering table: scored molecules,
// hard-filter survivors, soft-flag percentage, most common flag, clean count.
inline nlohmann::ordered_json attrition_report_json(const AttritionStats& s) {
  std::string most_common;
  int most_common_n = 0;
  for (const auto& [name, n] : s.soft_flag_counts) {
    if (n > most_common_n) {
      most_common = name;
      most_common_n = n;
    }
  }
  nlohmann::ordered_json j;
  j["scored"] = s.n_input;
  j["pass_hard"] = s.n_retained;
  j["pct_soft_flags"] =
      s.n_retained == 0 ? 0.0 : 100.0 * static_cast<double>(s.n_flagged) / static_cast<double>(s.n_retained);
  j["most_common_flag"] = most_common;
  j["most_common_flag_count"] = most_common_n;
  j["clean"] = s.n_retained - s.n_flagged;
  j["attrition"] = s.attrition();
  j["reject_reasons"] = s.reject_reasons;
  return j;
}

}  // namespace molforge
