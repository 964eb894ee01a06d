#include <gtest/gtest.h>

#include <fstream>

#include "sbloc/matrix_io.hpp"
#include "support.hpp"

using namespace sbloc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SBLOC_CLI) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) { return read_file(p); }

json toy_doc() {
  return json::parse(R"({
    "name": "cli_toy",
    "seed": 5,
    "measurement_time": 0.05,
    "band_index": 10,
    "array": {"layout": "sunflower", "count": 8, "aperture": 0.2},
    "grid": {"nx": 5, "ny": 5, "spacing": 0.02, "origin": [-0.04, -0.04, 0.25]},
    "sources": [{"position": [0.0, 0.0, 0.25], "rms_at_1m": 1.0},
                {"position": [-0.04, 0.04, 0.25], "rms_at_1m": 0.6}],
    "solver": {"outer_iterations": 30, "alternating_sweeps": 2, "gd_steps": 5,
               "coupling_weight": 10, "sparsity_weight": 0.001},
    "postprocess": {"k": 2}
  })");
}

fs::path write_doc(const fs::path& dir, const json& doc, const std::string& name = "s.json") {
  std::ofstream(dir / name) << doc.dump(2);
  return dir / name;
}

} // namespace

TEST(Cli, RunAllProducesArtifacts) {
  const auto dir = sbloc::test::scratch_dir("cli_runall");
  const auto s = write_doc(dir, toy_doc());
  ASSERT_EQ(run_cli("run-all --scenario " + s.string() + " --out " + (dir / "out").string(), dir / "log"), 0)
      << slurp(dir / "log");
  for (const char* f : {"csm.cmat", "csm.json", "steering.cmat", "truth.cmat", "truth.json", "report.json", "X.cmat",
                        "D.cmat", "estimates.json", "estimates.csv", "diagonal.csv", "metrics.json", "pipeline.json",
                        "scenario.json"})
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  const auto metrics = json::parse(slurp(dir / "out" / "metrics.json"));
  EXPECT_EQ(metrics["detected_sources"], 2);
  for (const auto& entry : fs::directory_iterator(dir / "out"))
    EXPECT_NE(entry.path().extension(), ".tmp");
}

TEST(Cli, StagesChainAndSameSeedIsBitIdentical) {
  const auto dir = sbloc::test::scratch_dir("cli_stages");
  const auto s = write_doc(dir, toy_doc());
  const auto a = dir / "a", b = dir / "b";
  for (const auto& out : {a, b}) {
    ASSERT_EQ(run_cli("simulate --scenario " + s.string() + " --seed 11 --out " + out.string(), dir / "log"), 0)
        << slurp(dir / "log");
    ASSERT_EQ(run_cli("solve --scenario " + s.string() + " --out " + out.string(), dir / "log"), 0) << slurp(dir / "log");
    ASSERT_EQ(run_cli("postprocess --scenario " + s.string() + " --k auto --out " + out.string(), dir / "log"), 0)
        << slurp(dir / "log");
    ASSERT_EQ(run_cli("evaluate --out " + out.string(), dir / "log"), 0) << slurp(dir / "log");
  }
  EXPECT_TRUE(fs::exists(a / "silhouette.csv"));
  for (const auto& entry : fs::directory_iterator(a))
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path().filename();
  const auto sidecar = json::parse(slurp(a / "csm.json"));
  EXPECT_EQ(sidecar["seed"], 11);
}

TEST(Cli, ReferenceShapes) {
  const auto dir = sbloc::test::scratch_dir("cli_shapes");
  auto doc = read_json(sbloc::test::scenario_path("three_source_noise_free"));
  doc["measurement_time"] = 0.01;
  const auto s = write_doc(dir, doc);
  ASSERT_EQ(run_cli("simulate --scenario " + s.string() + " --out " + dir.string(), dir / "log"), 0)
      << slurp(dir / "log");
  const auto c = read_cmat(dir / "csm.cmat");
  const auto a = read_cmat(dir / "steering.cmat");
  EXPECT_EQ(c.rows(), 64);
  EXPECT_EQ(c.cols(), 64);
  EXPECT_EQ(a.rows(), 64);
  EXPECT_EQ(a.cols(), 1681);
}

TEST(Cli, BandsFanOut) {
  const auto dir = sbloc::test::scratch_dir("cli_bands");
  const auto s = write_doc(dir, toy_doc());
  ASSERT_EQ(run_cli("simulate --scenario " + s.string() + " --bands 8,12 --out " + dir.string(), dir / "log"), 0)
      << slurp(dir / "log");
  const auto b8 = json::parse(slurp(dir / "band_8" / "csm.json"));
  const auto b12 = json::parse(slurp(dir / "band_12" / "csm.json"));
  EXPECT_EQ(b8["band_index"], 8);
  EXPECT_EQ(b12["band_index"], 12);
  EXPECT_EQ(run_cli("simulate --scenario " + s.string() + " --bands 64 --out " + dir.string(), dir / "log"), 2);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const auto dir = sbloc::test::scratch_dir("cli_config");
  auto doc = toy_doc();
  doc["grid"]["spacing"] = -1;
  const auto bad = write_doc(dir, doc, "bad.json");
  EXPECT_EQ(run_cli("simulate --scenario " + bad.string() + " --out " + (dir / "o").string(), dir / "log"), 2);
  EXPECT_FALSE(fs::exists(dir / "o" / "csm.cmat"));
  std::ofstream(dir / "syntax.json") << "{ \"name\": }";
  EXPECT_EQ(run_cli("simulate --scenario " + (dir / "syntax.json").string(), dir / "log"), 2);
  EXPECT_NE(slurp(dir / "log").find("line"), std::string::npos);
  EXPECT_EQ(run_cli("simulate --bogus", dir / "log"), 2);
  EXPECT_EQ(run_cli("run-all --scenario " + bad.string() + " --k zero", dir / "log"), 2);
  EXPECT_EQ(run_cli("", dir / "log"), 2);
}

TEST(Cli, MalformedMatrixExitsTwo) {
  const auto dir = sbloc::test::scratch_dir("cli_badmatrix");
  const auto s = write_doc(dir, toy_doc());
  ASSERT_EQ(run_cli("simulate --scenario " + s.string() + " --out " + dir.string(), dir / "log"), 0);
  std::ofstream(dir / "csm.cmat") << "cmat 8 8\n1 0\n";
  EXPECT_EQ(run_cli("solve --scenario " + s.string() + " --out " + dir.string(), dir / "log"), 2);
  EXPECT_NE(slurp(dir / "log").find("csm.cmat"), std::string::npos) << slurp(dir / "log");
  EXPECT_FALSE(fs::exists(dir / "report.json"));
  save_cmat(dir / "csm.cmat", ComplexMatrix::Identity(5, 5));
  EXPECT_EQ(run_cli("solve --scenario " + s.string() + " --out " + dir.string(), dir / "log"), 2);
}

TEST(Cli, DivergenceExitsThreeWithTrace) {
  const auto dir = sbloc::test::scratch_dir("cli_diverge");
  auto doc = toy_doc();
  doc["solver"]["step"] = 1e3;
  const auto s = write_doc(dir, doc);
  EXPECT_EQ(run_cli("run-all --scenario " + s.string() + " --out " + dir.string(), dir / "log"), 3) << slurp(dir / "log");
  const auto trace = json::parse(slurp(dir / "divergence.json"));
  EXPECT_FALSE(trace["energy"].empty());
  EXPECT_FALSE(fs::exists(dir / "report.json"));
}

TEST(Cli, EmptyResultExitsFour) {
  const auto dir = sbloc::test::scratch_dir("cli_empty");
  const auto s = write_doc(dir, toy_doc());
  ASSERT_EQ(run_cli("run-all --scenario " + s.string() + " --out " + dir.string(), dir / "log"), 0);
  EXPECT_EQ(run_cli("postprocess --scenario " + s.string() + " --threshold 1e6 --out " + dir.string(), dir / "log"), 4);
  EXPECT_NE(slurp(dir / "log").find("no sources detected"), std::string::npos);
}

TEST(Cli, ModeOverride) {
  const auto dir = sbloc::test::scratch_dir("cli_mode");
  const auto s = write_doc(dir, toy_doc());
  ASSERT_EQ(run_cli("run-all --scenario " + s.string() + " --mode weighted --out " + dir.string(), dir / "log"), 0)
      << slurp(dir / "log");
  const auto report = json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(report["mode"], "weighted");
  EXPECT_EQ(read_cmat(dir / "D.cmat").cols(), 25);
  EXPECT_EQ(run_cli("solve --mode sideways --out " + dir.string(), dir / "log"), 2);
}
