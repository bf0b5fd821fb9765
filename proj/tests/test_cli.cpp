#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ballotcraft/ballotcraft.hpp"
#include "ballotcraft/json_io.hpp"
#include "fixtures.hpp"

using namespace ballotcraft;

namespace {

const std::string kCli = BALLOTCRAFT_CLI_PATH;
const std::string kData = BALLOTCRAFT_DATA_DIR;
const std::string kGolden = BALLOTCRAFT_GOLDEN_DIR;

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string tmp = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                          "/ballotcraft_cli_out.txt";
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += kCli + " " + args + " > " + tmp + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("eval reproduces the golden fraction line, byte for byte") {
  auto r = run("rule eval --ballots " + kData + "/table1_ballots.json --tops 2,4");
  CHECK(r.code == 0);
  CHECK(r.out == slurp(kGolden + "/eval_table1.txt"));
  // identical config, identical bytes
  auto again = run("rule eval --ballots " + kData + "/table1_ballots.json --tops 2,4");
  CHECK(again.out == r.out);
  // thin wrapper: the line is exactly the library lottery, fraction-formatted
  Lottery direct = eval_pfbr(fixtures::table1(), {2, 4});
  std::string line;
  for (Alt x = 1; x <= direct.m(); ++x)
    line += (x > 1 ? ", " : "") + rat_str(direct.prob(x));
  CHECK(r.out == line + "\n");
}

TEST_CASE("threshold recovery output is a thin wrapper over the library") {
  auto r = run("domain thresholds " + kData + "/fig2_domain.json");
  CHECK(r.code == 0);
  CHECK(r.out == slurp(kGolden + "/thresholds_fig2.json"));

  Domain d = domain_from_json(read_json_file(kData + "/fig2_domain.json"));
  CHECK(r.out == threshold_report_to_json(recover_thresholds(d)).dump(2) + "\n");
  CHECK(d == fixtures::fig2_domain());
}

TEST_CASE("decompose rejection matches the golden file and the library call") {
  auto r = run("rule decompose --ballots " + kData + "/table2_ballots.json");
  CHECK(r.code == 1);
  CHECK(r.out == slurp(kGolden + "/decompose_table2.json"));
  CHECK(r.out == decomposition_to_json(decompose_anonymous(fixtures::table2(), 2, 4)).dump(2) +
                     "\n");
}

TEST_CASE("audit output matches the golden file and flags the violation") {
  auto gen = run("domain gen --family hybrid --m 4 --klo 2 --khi 4 -o /tmp/bc_h4.json");
  REQUIRE(gen.code == 0);
  auto r = run("rule audit --ballots " + kData +
               "/table1_ballots.json --domain /tmp/bc_h4.json --checks sp,unanimity,topsonly,anon");
  CHECK(r.code == 1);
  CHECK(r.out == slurp(kGolden + "/audit_table1_hybrid.json"));

  // wrapper check against direct library calls
  Domain h4 = domain_from_json(read_json_file("/tmp/bc_h4.json"));
  CHECK(h4 == gen_hybrid(4, 2, 4));
  TopsRule rule = pfbr_rule(fixtures::table1());
  json expected = json::array();
  expected.push_back(audit_report_to_json(check_strategy_proofness(rule, h4, 2)));
  expected.push_back(audit_report_to_json(check_unanimity(rule, h4, 2)));
  expected.push_back(audit_report_to_json(check_tops_only(as_profile_rule(rule), h4, 2)));
  expected.push_back(audit_report_to_json(check_anonymity(rule, h4, 2)));
  CHECK(r.out == expected.dump(2) + "\n");
}

TEST_CASE("audit passes on the single-peaked domain with exit 0") {
  auto gen = run("domain gen --family single_peaked --m 4 -o /tmp/bc_sp4.json");
  REQUIRE(gen.code == 0);
  auto r = run("rule audit --ballots " + kData +
               "/table1_ballots.json --domain /tmp/bc_sp4.json --checks sp,unanimity,topsonly");
  CHECK(r.code == 0);
}

TEST_CASE("the three-voter table passes all audits on its hybrid domain") {
  auto gen = run("domain gen --family hybrid --m 5 --klo 2 --khi 4 -o /tmp/bc_h5.json");
  REQUIRE(gen.code == 0);
  auto r = run("rule audit --ballots " + kData +
               "/table2_ballots.json --domain /tmp/bc_h5.json --checks sp,unanimity,topsonly,anon");
  CHECK(r.code == 0);
  CHECK(r.out == slurp(kGolden + "/audit_table2_hybrid5.json"));
}

TEST_CASE("regularity check exits 1 on an irregular domain") {
  std::ofstream out("/tmp/bc_single.json");
  out << R"({"m": 4, "prefs": [[1,2,3,4]]})";
  out.close();
  auto r = run("domain check /tmp/bc_single.json");
  CHECK(r.code == 1);
  json j = json::parse(r.out);
  CHECK(j["regular"] == false);
  CHECK(j["minimally_rich"] == false);
  CHECK(j["diverse"] == false);

  auto ok = run("domain check /tmp/bc_sp4.json");
  CHECK(ok.code == 0);
}

TEST_CASE("malformed input exits 3") {
  std::ofstream out("/tmp/bc_broken.json");
  out << "{ not json";
  out.close();
  CHECK(run("domain check /tmp/bc_broken.json").code == 3);
  CHECK(run("rule eval --ballots /tmp/nonexistent.json --tops 1,2").code == 3);
  CHECK(run("rule eval --ballots " + kData + "/table1_ballots.json --tops 0,9").code == 3);
}

TEST_CASE("budget override via the environment exits 2") {
  auto r = run("rule audit --ballots " + kData +
                   "/table1_ballots.json --domain /tmp/bc_h4.json --checks sp",
               "BALLOTCRAFT_BUDGET=5");
  CHECK(r.code == 2);
  json j = json::parse(r.out);
  CHECK(j["error"] == "BudgetExceeded");
}

TEST_CASE("audit verdict and counterexample are independent of --jobs") {
  auto serial = run("rule audit --ballots " + kData +
                    "/table1_ballots.json --domain /tmp/bc_h4.json --checks sp");
  auto parallel = run("rule audit --ballots " + kData +
                      "/table1_ballots.json --domain /tmp/bc_h4.json --checks sp --jobs 4");
  CHECK(serial.code == parallel.code);
  json a = json::parse(serial.out), b = json::parse(parallel.out);
  // partitioning changes how much of the scan each worker sees before its
  // first hit, so only the examined counts may differ
  a[0].erase("cases_examined");
  b[0].erase("cases_examined");
  CHECK(a == b);
}

TEST_CASE("by-size and bitmask ballot files evaluate identically") {
  // expand the by-size table-2 file into an explicit bitmask file
  PfbrSpec spec = pfbr_spec_from_json(read_json_file(kData + "/table2_ballots.json"));
  json full = probabilistic_ballots_to_json(spec.ballots);
  full["thresholds"] = {2, 4};
  write_json_file("/tmp/bc_table2_full.json", full);
  auto a = run("rule eval --ballots " + kData + "/table2_ballots.json --tops 2,4,4");
  auto b = run("rule eval --ballots /tmp/bc_table2_full.json --tops 2,4,4");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == "0, 1/3, 0, 2/3, 0\n");
}

TEST_CASE("dot export names the strong-connection edges") {
  auto r = run("domain thresholds " + kData + "/fig2_domain.json --dot /tmp/bc_fig2.dot");
  CHECK(r.code == 0);
  std::string dot = slurp("/tmp/bc_fig2.dot");
  CHECK(dot.find("a3 -- a4") != std::string::npos);
  CHECK(dot.find("a5 -- a6") != std::string::npos);
}

TEST_CASE("serialization round trips") {
  // ballots: table -> json -> table
  ProbabilisticBallots b = fixtures::percapita_fixture();
  json j = probabilistic_ballots_to_json(b);
  CHECK(pfbr_spec_from_json(j).ballots == b);
  // domains, through the generator CLI
  Domain d = domain_from_json(domain_to_json(gen_hybrid(5, 2, 4)));
  CHECK(d == gen_hybrid(5, 2, 4));
  // preferences and lotteries
  Preference p = fixtures::pref({2, 4, 3, 1});
  CHECK(preference_from_json(preference_to_json(p)) == p);
  Lottery lot = fixtures::lot({"1/6", "1/3", "1/2"});
  CHECK(lottery_from_json(lottery_to_json(lot)) == lot);
}

TEST_CASE("non-regular threshold queries exit 1 with the error code") {
  auto gen = run("domain gen --family semi_single_peaked --m 4 --threshold 2 -o /tmp/bc_ssp.json");
  REQUIRE(gen.code == 0);
  auto r = run("domain thresholds /tmp/bc_ssp.json");
  CHECK(r.code == 1);
  json j = json::parse(r.out);
  CHECK(j["error"] == "NotRegular");
}
