#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using Json = nlohmann::json;

namespace {

const std::string kCli = RDELAB_CLI_PATH;
const std::string kSrc = RDELAB_SOURCE_DIR;

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "rdelab_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args, const std::string& tag,
              const std::string& env = "") {
  auto out = scratch() / (tag + ".out");
  auto err = scratch() / (tag + ".err");
  std::string cmd = env + (env.empty() ? "" : " ") + kCli + " " + args +
                    " >" + out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

std::string instance(const std::string& name) {
  return kSrc + "/instances/" + name;
}

std::string write_file(const std::string& name, const std::string& body) {
  auto p = scratch() / name;
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("validate reports the instance shape") {
  RunResult r = run("validate " + instance("noisy_copy.json"), "val_ok");
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["valid"] == true);
  CHECK(doc["states"] == Json::array({"0", "1"}));
  CHECK(doc["noise_atoms"] == 2);
  CHECK(doc["max_arity"] == 1);
  CHECK(doc["config"]["command"] == "validate");
}

TEST_CASE("validate rejects malformed documents with a located error") {
  std::string bad = write_file(
      "bad_spec.json",
      R"({"states":["a","b"],"noise":[{"prob":1.0,"arity":1,"table":[0,7]}]})");
  RunResult r = run("validate " + bad, "val_bad");
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(r.err.find("/noise/0/table/1") != std::string::npos);
}

TEST_CASE("endogeny verdicts and exit codes per instance") {
  RunResult coin = run("endogeny " + instance("coin.json"), "end_coin");
  REQUIRE(coin.code == 0);
  Json cj = Json::parse(coin.out);
  CHECK(cj["status"] == "Endogenous");
  CHECK(cj["routes_agree"] == true);
  CHECK(cj["bivariate"]["iterations"] == 1);
  CHECK(cj["higher_level"]["status"] == "Endogenous");

  RunResult x = run("endogeny " + instance("xor.json"), "end_xor");
  REQUIRE(x.code == 0);
  Json xj = Json::parse(x.out);
  CHECK(xj["status"] == "NonEndogenous");
  CHECK(xj["bivariate"]["gap_to_diagonal"] == 0.5);

  RunResult exact = run("endogeny " + instance("and_or.json"), "end_ao");
  CHECK(exact.code == 3);
  CHECK(exact.err.find("particle") != std::string::npos);

  RunResult part = run("endogeny " + instance("and_or.json") +
                           " --mode particle --particles 500 --max-iter 50",
                       "end_ao_part");
  CHECK(part.code == 2);
  Json pj = Json::parse(part.out);
  CHECK(pj["status"] == "Inconclusive");
}

TEST_CASE("endogeny accepts a starting measure file and rejects non-fixed"
          " ones") {
  std::string uniform = write_file(
      "uniform.json", R"({"states":["0","1"],"weights":[0.5,0.5]})");
  RunResult ok = run("endogeny " + instance("xor.json") + " --mu " + uniform,
                     "end_mu_ok");
  CHECK(ok.code == 0);

  std::string off = write_file(
      "off.json", R"({"states":["0","1"],"weights":[0.9,0.1]})");
  RunResult bad = run("endogeny " + instance("xor.json") + " --mu " + off,
                      "end_mu_bad");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("fixed") != std::string::npos);
}

TEST_CASE("fixpoint lists converged clusters") {
  RunResult r = run("fixpoint " + instance("noisy_copy.json") + " --starts 8",
                    "fix_copy");
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  REQUIRE(doc["fixed_points"].size() == 1);
  CHECK(doc["fixed_points"][0]["measure"]["weights"][0] ==
        doctest::Approx(0.5));
  CHECK(doc["fixed_points"][0]["starts"] == 8);
  CHECK(doc["unconverged_starts"] == 0);
}

TEST_CASE("cvorder compares atom measure files") {
  std::string dirac = write_file(
      "dirac.json",
      R"({"states":["0","1"],"atoms":[{"weight":1.0,"point":[0.5,0.5]}]})");
  std::string spread = write_file(
      "spread.json",
      R"({"states":["0","1"],"atoms":[{"weight":0.5,"point":[1.0,0.0]},)"
      R"({"weight":0.5,"point":[0.0,1.0]}]})");

  RunResult fwd = run("cvorder " + dirac + " " + spread, "cv_fwd");
  REQUIRE(fwd.code == 0);
  Json fj = Json::parse(fwd.out);
  CHECK(fj["report"]["verdict"] == "Dominated");
  CHECK(fj["report"]["witness"]["kernel"].size() == 1);

  RunResult rev = run("cvorder " + spread + " " + dirac, "cv_rev");
  REQUIRE(rev.code == 0);
  Json rj = Json::parse(rev.out);
  CHECK(rj["report"]["verdict"] == "NotDominated");
  CHECK(rj["report"]["witness"].is_null());

  RunResult self = run("cvorder " + spread + " " + spread, "cv_self");
  REQUIRE(self.code == 0);
  CHECK(Json::parse(self.out)["report"]["verdict"] == "Dominated");
}

TEST_CASE("fixpoint keeps distinct fixed points apart") {
  // The and_or marginal map is the identity, so every start is already
  // fixed and no clusters merge.
  RunResult r = run("fixpoint " + instance("and_or.json") + " --starts 6",
                    "fix_andor");
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["fixed_points"].size() == 6);
  CHECK(doc["unconverged_starts"] == 0);
  for (const auto& fp : doc["fixed_points"]) {
    CHECK(fp["residual"].get<double>() <= 1e-10);
    CHECK(fp["starts"] == 1);
  }
}

TEST_CASE("simulate estimates the root law and agreement") {
  RunResult r = run("simulate " + instance("coin.json") +
                        " --depth 3 --samples 4000 --seed 5",
                    "sim_coin");
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["boundary_fixed_residual"].get<double>() <= 1e-12);
  CHECK(doc["coupled_agreement"]["value"] == 1.0);
  double f0 = doc["root_law"]["law"]["weights"][0].get<double>();
  CHECK(std::abs(f0 - 0.5) < 0.05);

  std::string off = write_file(
      "sim_off.json", R"({"states":["0","1"],"weights":[0.9,0.1]})");
  RunResult nf = run("simulate " + instance("noisy_copy.json") + " --mu " +
                         off + " --depth 2 --samples 1000",
                     "sim_off");
  REQUIRE(nf.code == 0);
  Json nj = Json::parse(nf.out);
  CHECK(nj["coupled_agreement"].is_null());
  CHECK(nj["root_law"]["n_samples"] == 1000);
}

TEST_CASE("output file and csv format") {
  auto out = scratch() / "verdict.json";
  std::filesystem::remove(out);
  RunResult r = run("endogeny " + instance("coin.json") + " --out " +
                        out.string(),
                    "end_out");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  Json doc = Json::parse(slurp(out));
  CHECK(doc["status"] == "Endogenous");

  RunResult csv = run("endogeny " + instance("coin.json") + " --format csv",
                      "end_csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("t,diag_mass,residual\n", 0) == 0);
  CHECK(csv.out.find("0,0.5,0.5\n") != std::string::npos);

  RunResult reject = run("validate " + instance("coin.json") +
                             " --format csv",
                         "val_csv");
  CHECK(reject.code == 1);
}

TEST_CASE("results are byte-identical across thread counts") {
  std::string args = "endogeny " + instance("and_or.json") +
                     " --mode particle --particles 400 --max-iter 30"
                     " --seed 21";
  RunResult one = run(args, "det_end_1", "RDE_LAB_THREADS=1");
  RunResult four = run(args, "det_end_4", "RDE_LAB_THREADS=4");
  CHECK(one.code == four.code);
  CHECK(one.out == four.out);
  CHECK_FALSE(one.out.empty());

  std::string sim = "simulate " + instance("and_or.json") +
                    " --depth 4 --samples 3000 --seed 9";
  RunResult s1 = run(sim, "det_sim_1", "RDE_LAB_THREADS=1");
  RunResult s4 = run(sim, "det_sim_4", "RDE_LAB_THREADS=4");
  CHECK(s1.code == 0);
  CHECK(s1.out == s4.out);
}
