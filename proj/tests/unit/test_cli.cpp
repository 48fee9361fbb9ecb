#include "streamlink/samplers/sample_pool.hpp"
#include "streamlink/util/digest.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Sandbox {
  fs::path dir;

  Sandbox() {
    dir = fs::temp_directory_path() / ("streamlink_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  fs::path operator/(const std::string& name) const { return dir / name; }

  // Runs the CLI with stdout and stderr captured to log.txt; returns the exit code.
  int run(const std::string& args) const {
    const std::string cmd = std::string(STREAMLINK_CLI_PATH) + " " + args + " > " + (dir / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string log() const { return slurp(dir / "log.txt"); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
};

const char* kConfig = R"({
  "simulate": {"files": 4, "records": 20, "overlap": 0.3, "max_errors": 2},
  "gibbs": {"iterations": 300, "burn_in": 100},
  "pprb": {"iterations": 300, "burn_in": 50},
  "smcmc": {"ensemble_size": 24, "jump_iterations": 2, "transition_iterations": 10},
  "seed": 7
})";

} // namespace

TEST_CASE("cli pipeline") {
  Sandbox box;
  box.write("config.json", kConfig);
  const std::string cfg = "--config " + (box / "config.json").string() + " ";
  const auto sim = box / "sim";
  const auto file = [&](int t) { return (sim / ("file_" + std::to_string(t) + ".csv")).string(); };

  REQUIRE(box.run(cfg + "simulate --out " + sim.string()) == 0);
  for (int t = 1; t <= 4; ++t) CHECK(fs::exists(file(t)));
  CHECK(fs::exists(sim / "truth.csv"));
  REQUIRE(box.run(cfg + "simulate --out " + (box / "sim2").string()) == 0);
  for (int t = 1; t <= 4; ++t)
    CHECK(streamlink::sha256_file(file(t)) ==
          streamlink::sha256_file(box / "sim2" / ("file_" + std::to_string(t) + ".csv")));

  const auto s2 = box / "s2";
  REQUIRE(box.run(cfg + "fit " + file(1) + " " + file(2) + " --out " + s2.string()) == 0);
  const auto m2 = json::parse(Sandbox::slurp(s2 / "manifest.json"));
  CHECK(m2.at("stage") == 2);
  const auto pool2 = streamlink::load_pool(s2 / "samples.bin");
  CHECK(pool2.size() == 200);
  CHECK(pool2.burn_in == 100);

  SUBCASE("re-running a command reproduces its outputs") {
    const auto samples = streamlink::sha256_file(s2 / "samples.bin");
    const auto manifest = streamlink::sha256_file(s2 / "manifest.json");
    REQUIRE(box.run(cfg + "fit " + file(1) + " " + file(2) + " --out " + s2.string()) == 0);
    CHECK(streamlink::sha256_file(s2 / "samples.bin") == samples);
    CHECK(streamlink::sha256_file(s2 / "manifest.json") == manifest);
  }

  SUBCASE("two pprb updates then evaluate and diagnose") {
    const auto s3 = box / "s3", s4 = box / "s4";
    REQUIRE(box.run(cfg + "update " + file(3) + " --prior " + s2.string() + " --out " + s3.string()) == 0);
    REQUIRE(box.run(cfg + "update " + file(4) + " --prior " + s3.string() + " --out " + s4.string() + " --lineage " +
                    json::parse(Sandbox::slurp(s3 / "manifest.json")).at("stage_id").get<std::string>()) == 0);
    const auto m4 = json::parse(Sandbox::slurp(s4 / "manifest.json"));
    CHECK(m4.at("stage") == 4);
    CHECK(m4.at("lineage") == json::parse(Sandbox::slurp(s3 / "manifest.json")).at("stage_id"));

    REQUIRE(box.run(cfg + "evaluate --store " + s4.string() + " --truth " + (sim / "truth.csv").string() +
                    " --out " + (box / "ev").string()) == 0);
    const auto metrics = Sandbox::slurp(box / "ev" / "metrics.csv");
    CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 250 + 1);
    const auto summary = json::parse(Sandbox::slurp(box / "ev" / "summary.json"));
    CHECK(summary.at("f1").at("mean").get<double>() > 0.5);

    REQUIRE(box.run(cfg + "diagnose --store " + s4.string() + " --out " + (box / "dg").string()) == 0);
    const auto diag = json::parse(Sandbox::slurp(box / "dg" / "diagnostics.json"));
    CHECK(diag.contains("median_ess"));
    CHECK(diag.at("distinct_z").size() == 3);
    CHECK(diag.contains("degenerate"));

    // missing truth
    CHECK(box.run(cfg + "evaluate --store " + s4.string() + " --truth " + (box / "nope.csv").string() + " --out " +
                  (box / "ev2").string()) != 0);
  }

  SUBCASE("smcmc output does not depend on the worker count") {
    for (const char* method : {"smcmc-comp", "smcmc-lb", "smcmc-mixed"}) {
      CAPTURE(method);
      const auto a = box / "w1", b = box / "w4";
      REQUIRE(box.run(cfg + "--workers 1 update " + file(3) + " --method " + method + " --prior " + s2.string() +
                      " --out " + a.string()) == 0);
      REQUIRE(box.run(cfg + "--workers 4 update " + file(3) + " --method " + method + " --prior " + s2.string() +
                      " --out " + b.string()) == 0);
      CHECK(streamlink::sha256_file(a / "samples.bin") == streamlink::sha256_file(b / "samples.bin"));
      CHECK(streamlink::load_pool(a / "samples.bin").size() == 24);
    }
  }

  SUBCASE("error exit codes") {
    CHECK(box.run(cfg + "update " + file(3) + " --method gibbs --prior " + s2.string() + " --out " +
                  (box / "x").string()) == 2);
    CHECK(box.log().find("unknown update method") != std::string::npos);
    CHECK(box.run(cfg + "update " + file(3) + " --prior " + s2.string() + " --lineage deadbeef --out " +
                  (box / "x").string()) == 4);

    box.write("bad.json", R"({"gibbs": {"iterations": 10, "burn_in": 10}})");
    CHECK(box.run("--config " + (box / "bad.json").string() + " fit " + file(1) + " " + file(2) + " --out " +
                  (box / "x").string()) == 2);
    box.write("typo.json", R"({"gibs": {}})");
    CHECK(box.run("--config " + (box / "typo.json").string() + " simulate --out " + (box / "x").string()) == 2);
    box.write("infeasible.json", R"({"simulate": {"files": 2, "records": 10, "overlap": 1.5}})");
    CHECK(box.run("--config " + (box / "infeasible.json").string() + " simulate --out " + (box / "x").string()) ==
          2);

    // a record file missing a schema column
    box.write("short.csv", "given_name,surname\nann,lee\n");
    CHECK(box.run(cfg + "fit " + file(1) + " " + (box / "short.csv").string() + " --out " + (box / "x").string()) ==
          3);

    // a prior stage whose manifest was edited
    fs::copy(s2, box / "tampered", fs::copy_options::recursive);
    auto m = json::parse(Sandbox::slurp(box / "tampered" / "manifest.json"));
    m["stage"] = 3;
    box.write("tampered/manifest.json", m.dump(2));
    CHECK(box.run(cfg + "update " + file(3) + " --prior " + (box / "tampered").string() + " --out " +
                  (box / "x").string()) == 4);

    // an input file changed after the prior stage was written
    fs::copy(sim, box / "simcopy", fs::copy_options::recursive);
    const auto moved = (box / "simcopy" / "file_1.csv").string();
    const auto moved2 = (box / "simcopy" / "file_2.csv").string();
    REQUIRE(box.run(cfg + "fit " + moved + " " + moved2 + " --out " + (box / "sc").string()) == 0);
    std::ofstream(moved, std::ios::app) << "\n";
    CHECK(box.run(cfg + "update " + file(3) + " --prior " + (box / "sc").string() + " --out " +
                  (box / "x").string()) == 4);
  }
}
