#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orbitlab/cli.hpp"
#include "orbitlab/io.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace orbitlab;
namespace fs = std::filesystem;

namespace {

const std::string kData = ORBITLAB_DATA_DIR;

std::string data(const std::string& name) { return kData + "/" + name; }

struct Outcome {
  int code = -1;
  io::Json report;
  std::string text;
  std::string err;
};

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("orbitlab_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

Outcome invoke(std::vector<std::string> args, const std::string& out_name = "report.json") {
  const fs::path out = scratch_dir() / out_name;
  fs::remove(out);
  args.push_back("--output");
  args.push_back(out.string());
  std::ostringstream so, se;
  Outcome o;
  o.code = cli::run(args, so, se);
  o.err = se.str();
  if (fs::exists(out)) {
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    o.text = buf.str();
    o.report = io::parse_json(o.text, out.string());
  }
  return o;
}

}  // namespace

TEST_CASE("decompose") {
  const Outcome o = invoke({"decompose", "--builtin", "sl:3"});
  REQUIRE(o.code == cli::kExitOk);
  CHECK(o.report["command"] == "decompose");
  CHECK(o.report["exit_code"] == 0);
  CHECK(o.report["dims"]["a"] == 2);
  CHECK(o.report["dims"]["n"] == 3);
  CHECK(o.report["dims"]["k"] == 3);
  CHECK(o.report["split"] == true);
  CHECK(o.report["roots"].size() == 6);
  CHECK(o.report["appendix_c"]["span"] == true);

  const Outcome file = invoke({"decompose", "--input", data("sl2.json")});
  REQUIRE(file.code == cli::kExitOk);
  CHECK(file.report["dims"]["a"] == 1);

  const Outcome compact = invoke({"decompose", "--builtin", "so:3,0"});
  CHECK(compact.code == cli::kExitOk);
  CHECK(compact.report["appendix_c"].is_null());
  CHECK(compact.report.contains("appendix_c_skipped"));

  const Outcome nilpotent = invoke({"decompose", "--builtin", "heisenberg:3"});
  CHECK(nilpotent.code == cli::kExitInput);
  CHECK(nilpotent.report["error"]["category"] == "input");
}

TEST_CASE("volume") {
  const Outcome o = invoke({"volume", "--input", data("gram_diag_2_3_5.json"), "--input", data("heisenberg3.json")});
  REQUIRE(o.code == cli::kExitOk);
  CHECK(std::abs(o.report["v_W"].get<double>() - std::cbrt(150.0)) < 1e-10);
  CHECK(std::abs(o.report["v_N"].get<double>() - std::sqrt(30.0)) < 1e-10);
  CHECK(o.report["degenerate"] == false);
  CHECK(o.report["continuity"] == true);

  const Outcome id = invoke({"volume", "--input", data("gram_identity3.json"), "--input", data("weights_beta_plus.json")});
  REQUIRE(id.code == cli::kExitOk);
  CHECK(std::abs(id.report["v_W"].get<double>() - 1.0) < 1e-12);
  CHECK(std::abs(id.report["v_N"].get<double>() - 1.0) < 1e-12);

  const Outcome deg = invoke({"volume", "--input", data("gram_rank2.json"), "--input", data("weights_beta_plus.json")});
  REQUIRE(deg.code == cli::kExitOk);
  CHECK(deg.report["v_W"] == 0.0);
  CHECK(deg.report["degenerate"] == true);

  const Outcome missing = invoke({"volume", "--input", data("gram_identity3.json")});
  CHECK(missing.code == cli::kExitInput);
}

TEST_CASE("certify") {
  const Outcome ok = invoke({"certify", "--input", data("heisenberg3.json")});
  REQUIRE(ok.code == cli::kExitOk);
  CHECK(std::abs(ok.report["soliton"]["c"].get<double>() + 1.5) < 1e-10);
  CHECK(ok.report["soliton"]["pass"] == true);

  const Outcome perturbed = invoke({"certify", "--input", data("heisenberg3.json"), "--input", data("gram_perturbed.json")});
  CHECK(perturbed.code == cli::kExitVerification);
  CHECK(perturbed.report["soliton"]["pass"] == false);
  CHECK(perturbed.report["exit_code"] == 2);

  CHECK(invoke({"certify", "--builtin", "borel_sl2"}).code == cli::kExitInput);
}

TEST_CASE("verify and report") {
  const Outcome v = invoke({"verify", "--builtin", "sl:2", "--samples", "2"});
  REQUIRE(v.code == cli::kExitOk);
  CHECK(v.report["pass"] == true);
  CHECK(v.report["algebras"].size() == 1);

  const Outcome r = invoke({"report", "--builtin", "heisenberg:3", "--builtin", "so:2,3"});
  REQUIRE(r.code == cli::kExitOk);
  REQUIRE(r.report["algebras"].size() == 2);
  CHECK(r.report["algebras"][0]["nilradical_dim"] == 3);
  CHECK(r.report["algebras"][1]["dim"] == 10);
}

TEST_CASE("malformed input and usage errors") {
  for (const char* bad : {"bad_antisymmetry.json", "bad_jacobi.json"}) {
    CAPTURE(bad);
    const Outcome o = invoke({"report", "--input", data(bad)});
    CHECK(o.code == cli::kExitInput);
    CHECK(o.report["error"]["category"] == "input");
  }
  const fs::path broken = scratch_dir() / "broken.json";
  std::ofstream(broken) << "{\"dim\": 3,\n \"brackets\": [}";
  const Outcome parse = invoke({"report", "--input", broken.string()});
  CHECK(parse.code == cli::kExitInput);
  CHECK(parse.report["error"]["message"].get<std::string>().find("line 2") != std::string::npos);

  CHECK(invoke({"frobnicate", "--builtin", "sl:2"}).code == cli::kExitInput);
  CHECK(invoke({"report", "--builtin", "nope:4"}).code == cli::kExitInput);
  std::ostringstream so, se;
  CHECK(cli::run({"report", "--builtin", "sl:2"}, so, se) == cli::kExitInput);  // no --output
}

TEST_CASE("determinism and seeds") {
  const Outcome a = invoke({"decompose", "--builtin", "so:2,3", "--seed", "7"}, "a.json");
  const Outcome b = invoke({"decompose", "--builtin", "so:2,3", "--seed", "7"}, "a.json");
  CHECK(a.text == b.text);
  CHECK(a.report["seed"] == 7);

  ::setenv("ORBITLAB_SEED", "7", 1);
  const Outcome env = invoke({"decompose", "--builtin", "so:2,3"}, "a.json");
  CHECK(env.report["seed"] == 7);
  CHECK(env.text == a.text);
  const Outcome flag = invoke({"decompose", "--builtin", "so:2,3", "--seed", "42"});
  CHECK(flag.report["seed"] == 42);
  ::setenv("ORBITLAB_SEED", "not-a-number", 1);
  CHECK(invoke({"decompose", "--builtin", "sl:2"}).code == cli::kExitInput);
  ::unsetenv("ORBITLAB_SEED");
  CHECK(invoke({"decompose", "--builtin", "sl:2"}).report["seed"] == 42);
}
