#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "edif/cli.hpp"
#include "edif/serialize.hpp"

using namespace edif;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
  fs::create_directories(EDIF_TEST_TMP);
  return (fs::path(EDIF_TEST_TMP) / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("input errors exit 3") {
  CHECK(run({}).code == cli::kInputError);
  CHECK(run({"bogus"}).code == cli::kInputError);
  CHECK(run({"validate"}).code == cli::kInputError);
  CHECK(run({"validate", "--cond", tmp("missing.json")}).code == cli::kInputError);
  CHECK(run({"ap-check", "--kernel", "1,1"}).code == cli::kInputError);
  CHECK(run({"ap-check", "--kernel", "-1,1,0"}).code == cli::kInputError);
  CHECK(run({"slopegap", "--ratio", "2"}).code == cli::kInputError);
}

TEST_CASE("ap-check") {
  Run ok = run({"ap-check", "--kernel", "1,1,0", "--C", "4", "--pairs", "20000", "--emit-json", "--seed", "9"});
  CHECK(ok.code == cli::kPass);
  Json j = Json::parse(ok.out);
  CHECK(j["seed"] == 9);
  CHECK(j["worst_raw"].get<double>() < 4);
  CHECK(run({"ap-check", "--kernel", "1,1,0", "--C", "1", "--pairs", "2000"}).code == cli::kViolation);
}

TEST_CASE("forge with no rounds emits the trivial condition") {
  std::string cond = tmp("one.json"), csv = tmp("one.csv");
  Run r = run({"forge", "--rounds", "0", "--targets", "none", "--out", cond, "--samples", csv, "--seed", "5"});
  REQUIRE(r.code == cli::kPass);
  Json j = read_json_file(cond);
  CHECK(j["N"] == 0);
  CHECK(j["sigma"].size() == 1);
  CHECK(j["meta"]["seed"] == 5);
  std::string text = slurp(csv);
  CHECK(text.rfind("# rep_hash=", 0) == 0);
  CHECK(text.find("seed=5") != std::string::npos);
  CHECK(text.find("x,g,f,errBound\n") != std::string::npos);
  CHECK(run({"validate", "--cond", cond}).code == cli::kPass);
}

TEST_CASE("validate reports violations") {
  std::string bad = tmp("bad.json");
  write(bad, R"({"sigma": [{"d": {"v": "0", "h": [0, 0]}, "e": {"v": "0", "h": [0, 0]}},
                           {"d": {"v": "1", "h": [0, 2]}, "e": {"v": "9/10", "h": [0, 1]}}],
                 "N": 0, "layers": {"base": {"kappa": "1", "constant": "0"}, "psi": [], "theta": []}})");
  Run r = run({"validate", "--cond", bad, "--emit-json"});
  CHECK(r.code == cli::kViolation);
  CHECK(r.out.find("P13") != std::string::npos);
  write(bad, "{not json");
  CHECK(run({"validate", "--cond", bad}).code == cli::kInputError);
}

TEST_CASE("outputs are deterministic") {
  std::vector<std::string> args{"forge", "--rounds", "2", "--targets", "none", "--emit-json", "--seed", "3"};
  Run a = run(args), b = run(args);
  REQUIRE(a.code == cli::kPass);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"seed\":3") != std::string::npos);
  Run s1 = run({"slopegap", "--ratio", "10", "--depth", "2", "--emit-json"});
  CHECK(s1.code == cli::kPass);
  CHECK(s1.out == run({"slopegap", "--ratio", "10", "--depth", "2", "--emit-json"}).out);
}

TEST_CASE("config file supplies defaults and flags win") {
  std::string cfg = tmp("cfg.json"), out1 = tmp("cfg1.json"), out2 = tmp("cfg2.json");
  write(cfg, R"({"rounds": 1, "targets": "none"})");
  REQUIRE(run({"forge", "--config", cfg, "--out", out1}).code == cli::kPass);
  CHECK(read_json_file(out1)["N"] == 1);
  REQUIRE(run({"forge", "--config", cfg, "--rounds", "0", "--out", out2}).code == cli::kPass);
  CHECK(read_json_file(out2)["N"] == 0);
}

TEST_CASE("other subcommands") {
  Run enc = run({"code", "--i", "1", "--x", "2.0202", "--depth", "16", "--emit-json"});
  CHECK(enc.code == cli::kPass);
  CHECK(run({"flat-cert", "--i", "0", "--q", "2", "--pairs", "200"}).code == cli::kPass);
  CHECK(run({"dcheck", "--x", "1/3"}).code == cli::kPass);
}
