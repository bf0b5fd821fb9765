// ballotcraft CLI: domain generation/checking/threshold recovery and rule
// evaluation/auditing/decomposition, all file I/O as JSON.
//
// Exit codes: 0 success / all checks pass; 1 property violation or rejection
// (an informative analytic outcome); 2 budget or enumeration cap exceeded;
// 3 malformed input or misuse; 4 internal inconsistency.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ballotcraft/ballotcraft.hpp"
#include "ballotcraft/json_io.hpp"

using namespace ballotcraft;

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::BudgetExceeded:
    case Errc::CapExceeded:
    case Errc::EnumerationOverflow:
      return 2;
    case Errc::NotRegular:
    case Errc::InvalidBallots:
    case Errc::PreconditionFailed:
      return 1;
    case Errc::InternalInconsistency:
      return 4;
    default:
      return 3;
  }
}

std::vector<int> parse_int_list(const std::string& s, char sep = ',') {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
    if (tok.empty()) fail(Errc::MalformedInput, "empty entry in list '" + s + "'");
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      fail(Errc::MalformedInput, "bad integer '" + tok + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

std::vector<std::vector<Alt>> parse_orders(const std::string& s) {
  std::vector<std::vector<Alt>> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(';', pos);
    out.push_back(parse_int_list(s.substr(pos, next == std::string::npos ? next : next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(',', pos);
    out.push_back(s.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

std::uint64_t budget_from_env() {
  if (const char* v = std::getenv("BALLOTCRAFT_BUDGET")) {
    char* end = nullptr;
    std::uint64_t b = std::strtoull(v, &end, 10);
    if (end && *end == '\0' && b > 0) return b;
    fail(Errc::MalformedInput, "BALLOTCRAFT_BUDGET must be a positive integer");
  }
  return AuditOptions{}.budget;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

struct GenArgs {
  std::string family, orders, out;
  int m = 0, klo = 0, khi = 0, threshold = 0;
};

int run_domain_gen(const GenArgs& a) {
  Domain d = [&] {
    if (a.family == "complete") return gen_complete(a.m);
    if (a.family == "single_peaked") return gen_single_peaked(a.m);
    if (a.family == "hybrid") return gen_hybrid(a.m, a.klo, a.khi);
    if (a.family == "semi_single_peaked") return gen_semi_single_peaked(a.m, a.threshold);
    if (a.family == "multiple_single_peaked") {
      if (a.orders.empty()) fail(Errc::MalformedInput, "--orders required for this family");
      return gen_multiple_single_peaked(parse_orders(a.orders));
    }
    fail(Errc::MalformedInput, "unknown family '" + a.family + "'");
  }();
  if (a.out.empty()) {
    emit(domain_to_json(d));
  } else {
    write_json_file(a.out, domain_to_json(d));
    emit(json{{"written", a.out}, {"m", d.m()}, {"size", d.size()}});
  }
  return 0;
}

int run_domain_check(const std::string& file) {
  Domain d = domain_from_json(read_json_file(file));
  RegularityReport rep = is_regular(d);
  emit(regularity_report_to_json(rep));
  return rep.regular() ? 0 : 1;
}

int run_domain_thresholds(const std::string& file, const std::string& dot_path) {
  Domain d = domain_from_json(read_json_file(file));
  if (!dot_path.empty()) {
    std::ofstream out(dot_path);
    if (!out) fail(Errc::MalformedInput, "cannot open " + dot_path + " for writing");
    out << graph_to_dot(strong_conn_graph(d));
  }
  ThresholdReport rep = recover_thresholds(d);
  emit(threshold_report_to_json(rep));
  return 0;
}

struct EvalArgs {
  std::string ballots, tops;
  bool decimal = false;
};

int run_rule_eval(const EvalArgs& a) {
  PfbrSpec spec = pfbr_spec_from_json(read_json_file(a.ballots));
  std::vector<int> tops = parse_int_list(a.tops);
  Lottery out = eval_pfbr(spec.ballots, TopProfile(tops.begin(), tops.end()));
  std::string line;
  for (Alt x = 1; x <= out.m(); ++x) {
    if (x > 1) line += ", ";
    line += rat_str(out.prob(x));
  }
  std::cout << line << "\n";
  if (a.decimal) {
    std::string approx = "~ ";
    for (Alt x = 1; x <= out.m(); ++x) {
      if (x > 1) approx += ", ";
      approx += std::to_string(rat_approx(out.prob(x)));
    }
    std::cout << approx << " (decimal approximation)\n";
  }
  return 0;
}

struct AuditArgs {
  std::string ballots, domain, checks = "sp,unanimity,topsonly,anon";
  int n = 0;
  int jobs = 1;
};

int run_rule_audit(const AuditArgs& a) {
  PfbrSpec spec = pfbr_spec_from_json(read_json_file(a.ballots));
  Domain d = domain_from_json(read_json_file(a.domain));
  if (d.m() != spec.ballots.m()) fail(Errc::MalformedInput, "domain and ballots disagree on m");
  const int n = a.n > 0 ? a.n : spec.ballots.n();
  if (n != spec.ballots.n()) fail(Errc::MalformedInput, "--n does not match the ballot table");
  AuditOptions opt;
  opt.budget = budget_from_env();
  opt.jobs = a.jobs;
  TopsRule rule = pfbr_rule(spec.ballots);

  json reports = json::array();
  bool violation = false;
  for (const std::string& name : split_names(a.checks)) {
    AuditReport rep;
    if (name == "sp") rep = check_strategy_proofness(rule, d, n, opt);
    else if (name == "localsp") rep = check_local_strategy_proofness(rule, d, n, opt);
    else if (name == "unanimity") rep = check_unanimity(rule, d, n, opt);
    else if (name == "topsonly") rep = check_tops_only(as_profile_rule(rule), d, n, opt);
    else if (name == "anon") rep = check_anonymity(rule, d, n, opt);
    else if (name == "uncompromising") rep = check_uncompromising(rule, d, n, opt);
    else fail(Errc::MalformedInput, "unknown check '" + name + "'");
    violation = violation || !rep.passed;
    reports.push_back(audit_report_to_json(rep));
  }
  emit(reports);
  return violation ? 1 : 0;
}

struct DecomposeArgs {
  std::string ballots, thresholds;
};

int run_rule_decompose(const DecomposeArgs& a) {
  PfbrSpec spec = pfbr_spec_from_json(read_json_file(a.ballots));
  std::pair<int, int> th;
  if (!a.thresholds.empty()) {
    std::vector<int> v = parse_int_list(a.thresholds);
    if (v.size() != 2) fail(Errc::MalformedInput, "--thresholds needs two integers");
    th = {v[0], v[1]};
  } else if (spec.thresholds) {
    th = *spec.thresholds;
  } else {
    fail(Errc::MalformedInput, "no thresholds given (flag or ballots file)");
  }
  DecomposeOutcome out = decompose_anonymous(spec.ballots, th.first, th.second);
  emit(decomposition_to_json(out));
  return out.decomposed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-rational toolkit for coalition-ballot voting rules"};
  app.require_subcommand(1);

  auto* domain = app.add_subcommand("domain", "generate and analyze preference domains");
  domain->require_subcommand(1);

  GenArgs gen_args;
  auto* gen = domain->add_subcommand("gen", "generate a domain and write it as JSON");
  gen->add_option("--family", gen_args.family,
                  "complete | single_peaked | hybrid | semi_single_peaked | "
                  "multiple_single_peaked")
      ->required();
  gen->add_option("--m", gen_args.m, "number of alternatives");
  gen->add_option("--klo", gen_args.klo, "left threshold (hybrid)");
  gen->add_option("--khi", gen_args.khi, "right threshold (hybrid)");
  gen->add_option("--threshold", gen_args.threshold, "threshold (semi_single_peaked)");
  gen->add_option("--orders", gen_args.orders,
                  "semicolon-separated reference orders, e.g. \"1,2,3,4;1,3,2,4\"");
  gen->add_option("-o,--out", gen_args.out, "output file (stdout when omitted)");

  std::string check_file;
  auto* check = domain->add_subcommand("check", "regularity report for a domain file");
  check->add_option("file", check_file, "domain JSON file")->required();

  std::string thr_file, dot_path;
  auto* thresholds = domain->add_subcommand("thresholds", "recover the threshold structure");
  thresholds->add_option("file", thr_file, "domain JSON file")->required();
  thresholds->add_option("--dot", dot_path, "also write the strong-connectedness graph as DOT");

  auto* rule = app.add_subcommand("rule", "evaluate, audit and decompose ballot rules");
  rule->require_subcommand(1);

  EvalArgs eval_args;
  auto* eval = rule->add_subcommand("eval", "evaluate ballots at a top profile");
  eval->add_option("--ballots", eval_args.ballots, "ballots JSON file")->required();
  eval->add_option("--tops", eval_args.tops, "comma-separated peaks, e.g. 2,4")->required();
  eval->add_flag("--decimal", eval_args.decimal, "also print a decimal approximation");

  AuditArgs audit_args;
  auto* audit = rule->add_subcommand("audit", "brute-force property checks");
  audit->add_option("--ballots", audit_args.ballots, "ballots JSON file")->required();
  audit->add_option("--domain", audit_args.domain, "domain JSON file")->required();
  audit->add_option("--n", audit_args.n, "voter count (defaults to the ballot table's)");
  audit->add_option("--checks", audit_args.checks,
                    "comma list: sp,localsp,unanimity,topsonly,anon,uncompromising");
  audit->add_option("--jobs", audit_args.jobs, "worker threads for the SP scan");

  DecomposeArgs dec_args;
  auto* dec = rule->add_subcommand("decompose", "decompose anonymous ballots");
  dec->add_option("--ballots", dec_args.ballots, "ballots JSON file")->required();
  dec->add_option("--thresholds", dec_args.thresholds, "klo,khi (defaults to the file's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 3;
  }

  try {
    if (gen->parsed()) return run_domain_gen(gen_args);
    if (check->parsed()) return run_domain_check(check_file);
    if (thresholds->parsed()) return run_domain_thresholds(thr_file, dot_path);
    if (eval->parsed()) return run_rule_eval(eval_args);
    if (audit->parsed()) return run_rule_audit(audit_args);
    if (dec->parsed()) return run_rule_decompose(dec_args);
  } catch (const Error& e) {
    emit(json{{"error", errc_name(e.code())}, {"detail", e.what()}});
    return exit_code_for(e);
  } catch (const std::exception& e) {
    emit(json{{"error", "Unhandled"}, {"detail", e.what()}});
    return 4;
  }
  return 3;
}
