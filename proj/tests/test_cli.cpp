#include <minent/cli.hpp>

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct CliResult {
  int rc = 0;
  std::string text;
};

CliResult run_to_file(std::vector<std::string> args) {
  static int counter = 0;
  const auto path = std::filesystem::temp_directory_path() /
                    ("minent_cli_test_" + std::to_string(counter++) + ".out");
  args.push_back("--out");
  args.push_back(path.string());
  CliResult res;
  res.rc = minent::run(args);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  res.text = ss.str();
  std::error_code ec;
  std::filesystem::remove(path, ec);
  return res;
}

json parse_without_timestamp(const std::string& text) {
  json j = json::parse(text);
  j.erase("timestamp");
  return j;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("tor-growth") {
  const CliResult res = run_to_file({"tor-growth", "--a", "2", "--n", "10"});
  REQUIRE(res.rc == 0);
  const json j = json::parse(res.text);
  REQUIRE(j["terms"].size() == 11);
  CHECK(j["terms"][0] == "1");
  CHECK(j["terms"][1] == "4");
  CHECK(j["terms"][2] == "15");
  CHECK(j["terms"][3] == "56");
  CHECK(j["terms"][4] == "209");
  CHECK(j["growth"]["kind"] == "exponential");
  CHECK(std::abs(j["growth"]["rate"].get<double>() - (2.0 + std::sqrt(3.0))) < 1e-12);

  const CliResult csv = run_to_file({"--format", "csv", "tor-growth", "--a", "2", "--n", "4"});
  REQUIRE(csv.rc == 0);
  std::istringstream is(csv.text);
  std::string line;
  std::getline(is, line);
  CHECK(line == "i,b");
  std::vector<std::string> rows;
  while (std::getline(is, line))
    if (!line.empty()) rows.push_back(line);
  REQUIRE(rows.size() == 5);
  CHECK(rows[4] == "4,209");
}

TEST_CASE("classify5") {
  const CliResult res = run_to_file({"classify5", "--h2", "Z2", "--i", "1"});
  REQUIRE(res.rc == 0);
  const json j = json::parse(res.text);
  CHECK(j["solvable"] == true);
  CHECK(j["witness"] == "SU(3)/SO(3)");
  CHECK(j["elliptic"] == true);
  CHECK(j["minimal_entropy"] == 0.0);
  REQUIRE(j["barden_word"].size() == 1);
  CHECK(j["barden_word"][0] == "X_-1");

  const CliResult unsolved = run_to_file({"classify5", "--h2", "Z2+Z2", "--i", "0"});
  REQUIRE(unsolved.rc == 0);
  const json ju = json::parse(unsolved.text);
  CHECK(ju["solvable"] == false);
  CHECK(ju["witness"] == "M_2");
  CHECK(ju["elliptic"] == false);
  CHECK(ju["minimal_entropy"] == 0.0);

  // inadmissible invariant pair
  CHECK(run_to_file({"classify5", "--h2", "Z3", "--i", "0"}).rc == 2);
}

TEST_CASE("classify4") {
  const CliResult res = run_to_file({"classify4", "--word", "CP2,CP2~"});
  REQUIRE(res.rc == 0);
  const json j = json::parse(res.text);
  CHECK(j["homeotype"] == "CP^2 # -CP^2");
  CHECK(j["solvable"] == true);
  CHECK(j["minimal_entropy"] == 0.0);
  CHECK(j["rationally_elliptic"] == true);
  CHECK(j["form"]["rank"] == 2);
  CHECK(j["form"]["signature"] == 0);
  CHECK(j["form"]["even"] == false);

  const CliResult k3 = run_to_file({"classify4", "--word", "K3"});
  REQUIRE(k3.rc == 0);
  const json jk = json::parse(k3.text);
  CHECK(jk["form"]["rank"] == 22);
  CHECK(jk["form"]["signature"] == -16);
  CHECK(jk["form"]["even"] == true);
  CHECK(jk["homeotype"].is_null());
  CHECK(jk["solvable"] == false);
  CHECK(jk["rationally_elliptic"] == false);

  CHECK(run_to_file({"classify4", "--word", "T4"}).rc == 2);
}

TEST_CASE("brieskorn") {
  const CliResult res = run_to_file({"brieskorn", "--a", "2,3,3,3"});
  REQUIRE(res.rc == 0);
  const json j = json::parse(res.text);
  CHECK(j["lcm"] == 6);
  CHECK(j["weights"] == json::array({3, 2, 2, 2}));
  CHECK(j["gcd"] == 1);
  CHECK(run_to_file({"brieskorn", "--a", "2,3,3"}).rc == 2);
  CHECK(run_to_file({"brieskorn", "--a", "1,2,2,2"}).rc == 2);
}

TEST_CASE("entropy estimators") {
  const std::vector<std::string> mane_args = {"entropy", "mane",   "--metric", "torus:1,1",
                                              "--Tmax",  "20",     "--pairs",  "8",
                                              "--seed",  "7"};
  const CliResult res = run_to_file(mane_args);
  REQUIRE(res.rc == 0);
  const json j = json::parse(res.text);
  CHECK(j["method"] == "mane");
  CHECK(j["h"].get<double>() <= 0.02);
  CHECK(j["seed"] == 7);
  CHECK(j["lambda"] == 0.0);
  CHECK(j["warnings"].empty());

  // same invocation differs only by timestamp
  const CliResult again = run_to_file(mane_args);
  CHECK(parse_without_timestamp(res.text) == parse_without_timestamp(again.text));

  std::vector<std::string> csv_args = mane_args;
  csv_args.insert(csv_args.begin(), {"--format", "csv"});
  const CliResult csv = run_to_file(csv_args);
  REQUIRE(csv.rc == 0);
  std::istringstream is(csv.text);
  std::string line;
  std::getline(is, line);
  CHECK(line == "T,log_avg");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 16);

  const CliResult sep = run_to_file({"entropy", "separated", "--metric", "torus:1,1", "--T",
                                     "20", "--samples", "32", "--seed", "5"});
  REQUIRE(sep.rc == 0);
  CHECK(json::parse(sep.text)["h"].get<double>() <= 0.05);

  const CliResult vol = run_to_file({"entropy", "volume", "--metric", "sphere:r=2"});
  REQUIRE(vol.rc == 0);
  CHECK(json::parse(vol.text)["h"] == 0.0);
  const CliResult volh = run_to_file(
      {"entropy", "volume", "--metric", "hyperbolic:genus2-octagon"});
  CHECK(std::abs(json::parse(volh.text)["h"].get<double>() - 1.0) < 1e-9);
  // volume entropy has no curve to export
  CHECK(run_to_file({"--format", "csv", "entropy", "volume", "--metric", "sphere:r=1"}).rc == 2);

  CHECK(run_to_file({"entropy", "mane", "--metric", "banana", "--Tmax", "20"}).rc == 2);
  CHECK(run_to_file({"entropy", "mane", "--metric", "torus:1,1", "--Tmax", "20", "--pairs",
                     "4"}).rc == 2);
}

TEST_CASE("collapse-sweep") {
  const CliResult res = run_to_file({"collapse-sweep", "--metric", "sphere:r=1", "--deltas",
                                     "0.0001,0.01,1"});
  REQUIRE(res.rc == 0);
  const json j = json::parse(res.text);
  CHECK(j["vol_nondecreasing"] == true);
  CHECK(j["vol_below_base"] == true);
  CHECK(std::abs(j["base_volume"].get<double>() - 4.0 * M_PI) < 1e-4);
  REQUIRE(j["rows"].size() == 3);
  CHECK(j["rows"][0]["delta"] == 0.0001);
  CHECK(j["rows"][0]["vol"].get<double>() < 0.05 * 4.0 * M_PI);

  const CliResult csv = run_to_file({"--format", "csv", "collapse-sweep", "--metric",
                                     "torus:1,1", "--action", "translation:1,0", "--deltas",
                                     "0.1,1"});
  REQUIRE(csv.rc == 0);
  std::istringstream is(csv.text);
  std::string line;
  std::getline(is, line);
  CHECK(line == "delta,vol,K_min,K_max,ricci_min");

  // rotations only make sense on the sphere catalog
  CHECK(run_to_file({"collapse-sweep", "--metric", "torus:1,1", "--action", "rotation"}).rc ==
        2);
}

TEST_CASE("lemma61-check") {
  const CliResult res =
      run_to_file({"lemma61-check", "--l", "2", "--n1", "4", "--n2", "3", "--count", "200",
                   "--lambda", "0.5", "--seed", "3"});
  REQUIRE(res.rc == 0);
  const json j = json::parse(res.text);
  CHECK(j["projection_failures"] == 0);
  CHECK(j["quotient_failures"] == 0);
  CHECK(std::abs(j["equality_case"]["det_I_sq"].get<double>() - 0.25) < 1e-12);
  CHECK(std::abs(j["equality_case"]["bound"].get<double>() - 0.25) < 1e-12);
  CHECK(run_to_file({"lemma61-check", "--l", "4", "--n1", "3", "--n2", "5"}).rc == 2);
  CHECK(run_to_file({"lemma61-check", "--l", "7"}).rc == 2);
}

TEST_CASE("chain-check") {
  const CliResult good = run_to_file({"chain-check", "--lambda", "1", "--h", "1", "--n", "2",
                                      "--norm", "4", "--cn", "0.2", "--minvol", "12.6"});
  REQUIRE(good.rc == 0);
  const json j = json::parse(good.text);
  CHECK(j["all_hold"] == true);
  CHECK(j["norm_vs_lambda"]["evaluated"] == true);
  CHECK(j["lambda_vs_h"]["holds"] == true);
  CHECK(j["h_vs_minvol"]["holds"] == true);

  // a broken link is reported, and escalates only under --strict
  const CliResult soft = run_to_file({"chain-check", "--lambda", "1.2", "--h", "1", "--n", "2"});
  CHECK(soft.rc == 0);
  CHECK(json::parse(soft.text)["all_hold"] == false);
  const CliResult hard = run_to_file(
      {"--strict", "chain-check", "--lambda", "1.2", "--h", "1", "--n", "2"});
  CHECK(hard.rc == 3);

  // absent optional inputs leave their links unevaluated
  const CliResult partial = run_to_file({"chain-check", "--lambda", "0.5", "--h", "0.6", "--n",
                                         "3"});
  const json jp = json::parse(partial.text);
  CHECK(jp["norm_vs_lambda"]["evaluated"] == false);
  CHECK(jp["h_vs_minvol"]["evaluated"] == false);
  CHECK(jp["all_hold"] == true);
}

TEST_CASE("argument handling") {
  CHECK(minent::run({"--help"}) == 0);
  CHECK(minent::run({}) == 2);
  CHECK(minent::run({"frobnicate"}) == 2);
  CHECK(minent::run({"tor-growth", "--a", "2", "--bogus"}) == 2);
  CHECK(minent::run({"tor-growth"}) == 2);  // --a is required
  CHECK(minent::run({"tor-growth", "--a", "2", "--out",
                     "/nonexistent-dir/minent-test.json"}) == 2);
}

TEST_SUITE_END();
