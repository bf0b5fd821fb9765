#pragma once

// JSON wire formats. Preferences are arrays of 1-based indices in rank order
// ([2,4,3,1] ranks a_2 first); probabilities are fraction strings ("7/10").
// Ballot tables key coalitions either by bitmask (all 2^n entries, voter i is
// bit i-1) or, for anonymous tables, by coalition size (n+1 entries).

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ballotcraft/audit.hpp"
#include "ballotcraft/decompose.hpp"
#include "ballotcraft/domains.hpp"
#include "ballotcraft/rules.hpp"
#include "ballotcraft/structure.hpp"

namespace ballotcraft {

using json = nlohmann::ordered_json;

// --------------------------------------------------------------------------
// primitives

inline json lottery_to_json(const Lottery& lot) {
  json a = json::array();
  for (const Rat& p : lot.probs()) a.push_back(rat_str(p));
  return a;
}

inline Lottery lottery_from_json(const json& j) {
  if (!j.is_array() || j.empty()) fail(Errc::MalformedInput, "lottery must be a nonempty array");
  std::vector<Rat> p;
  p.reserve(j.size());
  for (const auto& e : j) p.push_back(parse_rat(e.get<std::string>()));
  return Lottery(std::move(p));
}

inline json preference_to_json(const Preference& p) {
  json a = json::array();
  for (Alt x : p.order()) a.push_back(x);
  return a;
}

inline Preference preference_from_json(const json& j) {
  if (!j.is_array()) fail(Errc::MalformedInput, "preference must be an array");
  std::vector<Alt> o;
  o.reserve(j.size());
  for (const auto& e : j) o.push_back(e.get<int>());
  return Preference(std::move(o));
}

// --------------------------------------------------------------------------
// domain files: { "m": int, "prefs": [[int]] }

inline json domain_to_json(const Domain& d) {
  json j;
  j["m"] = d.m();
  json prefs = json::array();
  for (const Preference& p : d.prefs()) prefs.push_back(preference_to_json(p));
  j["prefs"] = std::move(prefs);
  return j;
}

inline Domain domain_from_json(const json& j) {
  if (!j.contains("m") || !j.contains("prefs"))
    fail(Errc::MalformedInput, "domain file needs \"m\" and \"prefs\"");
  const int m = j.at("m").get<int>();
  std::vector<Preference> prefs;
  for (const auto& e : j.at("prefs")) {
    prefs.push_back(preference_from_json(e));
    if (prefs.back().m() != m) fail(Errc::MalformedInput, "preference length != m");
  }
  return Domain::of(std::move(prefs));
}

// --------------------------------------------------------------------------
// ballot files:
// { "n": int, "m": int, "ballots": { "<bitmask or size>": [fractions] },
//   "thresholds": [klo, khi]?, "eps": [fractions]? }

inline json probabilistic_ballots_to_json(const ProbabilisticBallots& b) {
  json t;
  for (Coalition s = 0; s <= b.full_coalition(); ++s)
    t[std::to_string(s)] = lottery_to_json(b.ballot(s));
  json j;
  j["n"] = b.n();
  j["m"] = b.m();
  j["ballots"] = std::move(t);
  return j;
}

inline json pfbr_spec_to_json(const PfbrSpec& spec) {
  json j = probabilistic_ballots_to_json(spec.ballots);
  if (spec.thresholds) j["thresholds"] = {spec.thresholds->first, spec.thresholds->second};
  if (spec.eps) {
    json e = json::array();
    for (const Rat& x : *spec.eps) e.push_back(rat_str(x));
    j["eps"] = std::move(e);
  }
  return j;
}

inline PfbrSpec pfbr_spec_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("m") || !j.contains("ballots"))
    fail(Errc::MalformedInput, "ballots file needs \"n\", \"m\" and \"ballots\"");
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  const auto& t = j.at("ballots");
  if (!t.is_object()) fail(Errc::MalformedInput, "\"ballots\" must be an object");
  const std::size_t full = n >= 0 && n < 31 ? (std::size_t{1} << n) : 0;
  auto parse_table = [&](std::size_t count) {
    std::vector<Lottery> table;
    for (std::size_t k = 0; k < count; ++k) {
      const std::string key = std::to_string(k);
      if (!t.contains(key)) fail(Errc::MalformedInput, "ballots table misses key \"" + key + "\"");
      table.push_back(lottery_from_json(t.at(key)));
      if (table.back().m() != m) fail(Errc::MalformedInput, "ballot lottery length != m");
    }
    return table;
  };
  std::optional<ProbabilisticBallots> ballots;
  if (t.size() == full) {
    ballots = ProbabilisticBallots(n, m, parse_table(full));
  } else if (t.size() == static_cast<std::size_t>(n) + 1) {
    ballots = ProbabilisticBallots::from_by_size(n, m, parse_table(n + 1));
  } else {
    fail(Errc::MalformedInput, "ballots table must have 2^n (bitmask) or n+1 (by size) entries");
  }
  PfbrSpec spec{std::move(*ballots), std::nullopt, std::nullopt};
  if (j.contains("thresholds")) {
    const auto& th = j.at("thresholds");
    if (!th.is_array() || th.size() != 2) fail(Errc::MalformedInput, "thresholds must be [klo,khi]");
    const int klo = th[0].get<int>(), khi = th[1].get<int>();
    if (klo < 1 || khi > m || klo >= khi) fail(Errc::MalformedInput, "bad thresholds in ballots file");
    spec.thresholds = std::make_pair(klo, khi);
  }
  if (j.contains("eps")) {
    std::vector<Rat> eps;
    Rat sum = 0;
    for (const auto& e : j.at("eps")) {
      eps.push_back(parse_rat(e.get<std::string>()));
      if (eps.back() < 0) fail(Errc::MalformedInput, "negative coefficient in ballots file");
      sum += eps.back();
    }
    if (static_cast<int>(eps.size()) != n || sum != 1)
      fail(Errc::MalformedInput, "coefficients must be n nonnegative fractions summing to 1");
    spec.eps = std::move(eps);
  }
  return spec;
}

inline json deterministic_ballots_to_json(const DeterministicBallots& b) {
  json t;
  for (Coalition s = 0; s <= b.full_coalition(); ++s) t[std::to_string(s)] = b.ballot(s);
  json j;
  j["n"] = b.n();
  j["m"] = b.m();
  j["ballots"] = std::move(t);
  return j;
}

// --------------------------------------------------------------------------
// reports

inline json regularity_report_to_json(const RegularityReport& r) {
  json j;
  j["minimally_rich"] = r.richness.ok;
  j["missing_peaks"] = r.richness.missing_peaks;
  j["diverse"] = r.diversity.ok;
  if (r.diversity.witness) {
    j["diversity_witness"] = {preference_to_json(r.diversity.witness->first),
                              preference_to_json(r.diversity.witness->second)};
  } else {
    j["diversity_witness"] = nullptr;
  }
  j["no_restoration"] = r.no_restoration.ok;
  if (r.no_restoration.counterexample) {
    const auto& c = *r.no_restoration.counterexample;
    j["restoration_counterexample"] = {{"from", preference_to_json(c.from)},
                                       {"to", preference_to_json(c.to)},
                                       {"pair", {c.swapped.first, c.swapped.second}}};
  } else {
    j["restoration_counterexample"] = nullptr;
  }
  j["regular"] = r.regular();
  return j;
}

inline json hybrid_star_report_to_json(const HybridStarReport& r) {
  json j;
  j["ok"] = r.ok;
  j["klo"] = r.k_lo;
  j["khi"] = r.k_hi;
  j["subset_ok"] = r.subset_ok;
  if (r.offender) j["offender"] = preference_to_json(*r.offender);
  j["coverage_ok"] = r.coverage_ok;
  j["uncovered"] = r.uncovered;
  j["no_leaf_ok"] = r.no_leaf_ok;
  j["leaves"] = r.leaves;
  return j;
}

inline json threshold_report_to_json(const ThresholdReport& r) {
  json j;
  j["classification"] = ThresholdReport::kind_name(r.kind);
  if (r.kind != ThresholdReport::Kind::SinglePeaked && r.k_lo > 0) {
    j["klo"] = r.k_lo;
    j["khi"] = r.k_hi;
    j["L"] = {1, r.k_lo};
    j["M"] = {r.k_lo, r.k_hi};
    j["R"] = {r.k_hi, r.m};
  }
  j["path_count"] = r.path_count;
  j["continuations_ok"] = r.continuations_ok;
  if (r.relabeling) j["relabeling"] = *r.relabeling;
  if (r.star) j["hybrid_star"] = hybrid_star_report_to_json(*r.star);
  return j;
}

inline json sp_violation_to_json(const SpViolation& v) {
  json j;
  j["tops"] = v.tops;
  j["voter"] = v.voter;
  j["misreport_top"] = v.misreport_top;
  if (v.sincere) j["sincere"] = preference_to_json(*v.sincere);
  if (v.misreport) j["misreport"] = preference_to_json(*v.misreport);
  if (v.profile) {
    json p = json::array();
    for (const Preference& q : *v.profile) p.push_back(preference_to_json(q));
    j["profile"] = std::move(p);
  }
  j["prefix"] = v.prefix;
  j["truthful_lottery"] = lottery_to_json(v.truthful);
  j["deviation_lottery"] = lottery_to_json(v.deviated);
  return j;
}

inline json audit_report_to_json(const AuditReport& r) {
  json j;
  j["property"] = r.property;
  j["passed"] = r.passed;
  j["cases_examined"] = r.cases_examined;
  if (!r.violation) {
    j["counterexample"] = nullptr;
    return j;
  }
  j["counterexample"] = std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        json c;
        if constexpr (std::is_same_v<T, SpViolation>) {
          c = sp_violation_to_json(v);
        } else if constexpr (std::is_same_v<T, UnanimityViolation>) {
          c["top"] = v.top;
          c["lottery"] = lottery_to_json(v.got);
        } else if constexpr (std::is_same_v<T, TopsOnlyViolation>) {
          json p1 = json::array(), p2 = json::array();
          for (const Preference& q : v.first) p1.push_back(preference_to_json(q));
          for (const Preference& q : v.second) p2.push_back(preference_to_json(q));
          c["first_profile"] = std::move(p1);
          c["second_profile"] = std::move(p2);
          c["first_lottery"] = lottery_to_json(v.first_lottery);
          c["second_lottery"] = lottery_to_json(v.second_lottery);
        } else if constexpr (std::is_same_v<T, AnonymityViolation>) {
          c["tops"] = v.tops;
          c["permutation"] = v.perm;
          c["lottery"] = lottery_to_json(v.base);
          c["permuted_lottery"] = lottery_to_json(v.permuted);
        } else if constexpr (std::is_same_v<T, UncompromisingViolation>) {
          c["path"] = v.path;
          c["voter"] = v.voter;
          c["other_tops"] = v.others;
          c["off_path_alternative"] = v.off_path;
          c["prob_at_start"] = rat_str(v.at_start);
          c["prob_at_end"] = rat_str(v.at_end);
        }
        return c;
      },
      *r.violation);
  return j;
}

inline json per_capita_witness_to_json(const PerCapitaResult& r) {
  json j;
  j["coalition_size"] = r.size_small;
  j["supercoalition_size"] = r.size_large;
  j["side"] = std::string(1, r.side);
  j["alternative"] = r.alt;
  j["per_capita_small"] = rat_str(r.small_pc);
  j["per_capita_large"] = rat_str(r.large_pc);
  return j;
}

inline json decomposition_to_json(const DecomposeOutcome& out) {
  json j;
  j["status"] = out.decomposed() ? "decomposed" : "rejected";
  if (!out.decomposed()) {
    j["reason"] = decompose_status_name(out.status);
    if (out.per_capita_witness) j["witness"] = per_capita_witness_to_json(*out.per_capita_witness);
    return j;
  }
  const DecompositionResult& res = *out.result;
  json comps = json::array();
  for (const auto& [w, f] : res.components) {
    json c;
    c["weight"] = rat_str(w);
    c["ballots"] = deterministic_ballots_to_json(f)["ballots"];
    comps.push_back(std::move(c));
  }
  j["components"] = std::move(comps);
  json trace = json::array();
  for (const DecompositionRound& r : res.trace) {
    json t;
    t["alpha"] = rat_str(r.alpha);
    t["terminal"] = r.terminal;
    json ex = json::array();
    for (const DeterministicBallots& f : r.extracted)
      ex.push_back(deterministic_ballots_to_json(f)["ballots"]);
    t["extracted"] = std::move(ex);
    if (r.refined) t["refined"] = probabilistic_ballots_to_json(*r.refined)["ballots"];
    t["support_before"] = r.support_before;
    t["support_after"] = r.support_after;
    trace.push_back(std::move(t));
  }
  j["trace"] = std::move(trace);
  return j;
}

// --------------------------------------------------------------------------
// DOT rendering of the strong-connectedness graph

inline std::string graph_to_dot(const StrongConnGraph& g) {
  std::ostringstream os;
  os << "graph strong_connectedness {\n";
  for (Alt a : g.vertices()) os << "  a" << a << ";\n";
  for (auto [a, b] : g.edges()) os << "  a" << a << " -- a" << b << ";\n";
  os << "}\n";
  return os.str();
}

// --------------------------------------------------------------------------
// file helpers

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::MalformedInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(Errc::MalformedInput, "cannot parse " + path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(Errc::MalformedInput, "cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace ballotcraft
