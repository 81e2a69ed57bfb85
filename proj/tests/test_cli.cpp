#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

std::string temp_path(const std::string& name) {
  return std::string("/tmp/graphkam_test_") + name;
}

RunResult run_cli(const std::string& args, const std::string& tag) {
  std::string out_file = temp_path(tag + ".out");
  std::string cmd = std::string(GRAPHKAM_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  int status = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return RunResult{code, ss.str()};
}

std::string data(const std::string& name) { return std::string(GRAPHKAM_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("validate accepts the corpus and rejects a loop edge") {
  RunResult ok = run_cli("validate --input " + data("parallel_free.json"), "validate_ok");
  INFO(ok.output);
  CHECK(ok.exit_code == 0);

  RunResult loop = run_cli("validate --input " + data("loop_graph.json"), "validate_loop");
  CHECK(loop.exit_code == 2);
  CHECK(loop.output.find("LoopEdge") != std::string::npos);

  // an open measure is reported as not closed but is not a hard failure
  std::string bundle = temp_path("open_bundle.json");
  {
    nlohmann::json g = nlohmann::json::parse(std::ifstream(data("triangle_chord.json")));
    nlohmann::json m = nlohmann::json::parse(std::ifstream(data("measure_open.json")));
    nlohmann::json j{{"graph", g.at("graph")}, {"measure", m}};
    std::ofstream(bundle) << j.dump();
  }
  RunResult open = run_cli("validate --input " + bundle, "validate_open");
  CHECK(open.exit_code == 0);
  CHECK(open.output.find("NotClosed") != std::string::npos);
}

TEST_CASE("critical command emits the weak KAM data") {
  RunResult r =
      run_cli("critical --input " + data("parallel_free.json") + " --c 4", "critical_c4");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(std::abs(j.at("alpha").get<double>() - 2.0) < 1e-8);
  CHECK(j.at("aubry_edges").size() == 2);
  CHECK(std::abs(j.at("Q").at("e1").get<double>() - 2.0) < 1e-7);

  RunResult zero = run_cli("critical --input " + data("mixed_floor.json"), "critical_mixed");
  REQUIRE(zero.exit_code == 0);
  auto jz = nlohmann::json::parse(zero.output);
  CHECK(jz.at("alpha").get<double>() == 1.0);
}

TEST_CASE("alpha-grid sweeps the closed form") {
  RunResult r = run_cli("alpha-grid --input " + data("parallel_free.json") +
                            " --grid -8:8:0.5 --format csv",
                        "grid");
  REQUIRE(r.exit_code == 0);
  std::stringstream ss(r.output);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "c1,alpha");
  int rows = 0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    double c, a;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &c, &a) == 2);
    CHECK(std::abs(a - c * c / 8.0) < 1e-8);
    ++rows;
  }
  CHECK(rows == 33);

  // byte-stable across runs
  RunResult again = run_cli("alpha-grid --input " + data("parallel_free.json") +
                                " --grid -8:8:0.5 --format csv",
                            "grid_again");
  CHECK(again.output == r.output);
}

TEST_CASE("beta command returns the conjugate value with a certificate") {
  RunResult r = run_cli("beta --input " + data("parallel_free.json") + " --h 1", "beta_h1");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(std::abs(j.at("beta").get<double>() - 2.0) < 1e-7);
  CHECK(std::abs(j.at("optimal_c")[0].get<double>() - 4.0) < 1e-6);
  CHECK(std::abs(j.at("duality_gap").get<double>()) < 1e-7);
  CHECK(j.at("certificate").size() >= 1);

  RunResult z = run_cli("beta --input " + data("mixed_floor.json") + " --h 0", "beta_h0");
  REQUIRE(z.exit_code == 0);
  auto jz = nlohmann::json::parse(z.output);
  CHECK(std::abs(jz.at("beta").get<double>() + 1.0) < 1e-7);  // -a0
}

TEST_CASE("mather command serializes irreducibles") {
  RunResult r = run_cli("mather --input " + data("parallel_free.json") + " --c 4", "mather_c4");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("graph_property").get<bool>());
  REQUIRE(j.at("irreducible_measures").size() == 1);
  auto atoms = j.at("irreducible_measures")[0].at("measure").at("atoms");
  REQUIRE(atoms.size() == 2);
  CHECK(std::abs(atoms[0].at("q").get<double>() - 2.0) < 1e-7);
}

TEST_CASE("decompose command splits the triangle measure") {
  RunResult r = run_cli("decompose --input " + data("triangle_chord.json") + " --measure " +
                            data("measure_triangle.json"),
                        "decompose");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  REQUIRE(j.size() == 1);
  CHECK(std::abs(j[0].at("weight").get<double>() - 1.0) < 1e-9);
  CHECK(j[0].at("circuit").size() == 3);
}

TEST_CASE("compile round trip feeds critical without re-validation errors") {
  std::string compiled = temp_path("compiled_problem.json");
  RunResult c = run_cli("compile --input " + data("network_ramp.json") + " --out " + compiled,
                        "compile");
  REQUIRE(c.exit_code == 0);

  RunResult v = run_cli("validate --input " + compiled, "validate_compiled");
  INFO(v.output);
  CHECK(v.exit_code == 0);

  RunResult crit = run_cli("critical --input " + compiled + " --c 0", "critical_compiled");
  REQUIRE(crit.exit_code == 0);
  auto j = nlohmann::json::parse(crit.output);
  CHECK(std::isfinite(j.at("alpha").get<double>()));
}
