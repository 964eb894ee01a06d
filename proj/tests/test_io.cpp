#include <gtest/gtest.h>

#include <fstream>

#include "sbloc/errors.hpp"
#include "sbloc/matrix_io.hpp"
#include "sbloc/pipeline.hpp"
#include "support.hpp"

using namespace sbloc;
namespace fs = std::filesystem;
using nlohmann::json;

TEST(MatrixIo, RoundTripIsExact) {
  std::mt19937_64 gen(81);
  ComplexMatrix m = sbloc::test::random_matrix(gen, 3, 4);
  m(0, 0) = {1e-300, -0.1};
  m(2, 3) = {std::nextafter(1.0, 2.0), 123456789.123456789};
  const auto back = parse_cmat(format_cmat(m));
  EXPECT_EQ(back, m);
  const auto dir = sbloc::test::scratch_dir("cmat");
  save_cmat(dir / "m.cmat", m);
  EXPECT_EQ(read_cmat(dir / "m.cmat"), m);
  EXPECT_FALSE(fs::exists(dir / "m.cmat.tmp"));
}

TEST(MatrixIo, FormatIsRowMajor) {
  ComplexMatrix m(1, 2);
  m << Complex(1, 2), Complex(3, -4);
  EXPECT_EQ(format_cmat(m), "cmat 1 2\n1 2\n3 -4\n");
}

TEST(MatrixIo, MalformedInputs) {
  EXPECT_THROW(parse_cmat("matrix 1 1\n0 0\n"), ConfigError);
  EXPECT_THROW(parse_cmat("cmat 2 1\n0 0\n"), ConfigError);
  EXPECT_THROW(parse_cmat("cmat 1 1\n0 0\n1 1\n"), ConfigError);
  EXPECT_THROW(parse_cmat("cmat 1 1\nnan 0\n"), ConfigError);
  EXPECT_THROW(parse_cmat("cmat 1 1\n0 x\n"), ConfigError);
  try {
    parse_cmat("cmat 2 1\n1 0\n1 zz\n", "bad.cmat");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.cmat:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(read_cmat("/nonexistent/file.cmat"), Error);
}

TEST(ConfigIo, ScenarioFilesLoad) {
  for (const char* name : {"three_source_noise_free", "three_source_noisy", "three_source_positional", "three_source_weighted"}) {
    const auto e = sbloc::test::reference_experiment(name);
    EXPECT_EQ(e.scenario.geometry.size(), 64u) << name;
    EXPECT_EQ(e.scenario.grid.size(), 1681u) << name;
    EXPECT_EQ(e.scenario.sources.size(), 3u) << name;
  }
  const auto noisy = sbloc::test::reference_experiment("three_source_noisy").scenario;
  ASSERT_TRUE(noisy.noise.has_value());
  EXPECT_NEAR(noisy.noise->rms, 3.33 / (Vec3(-0.1, -0.1, 0.3).norm()), 1e-9);
  const auto weighted = sbloc::test::reference_experiment("three_source_weighted").solver;
  EXPECT_EQ(weighted.mode, SolverMode::weighted);
  EXPECT_EQ(weighted.weights.off_diagonal, 1e6);
}

TEST(ConfigIo, EchoRoundTrips) {
  const auto e = sbloc::test::reference_experiment("three_source_positional");
  const auto again = parse_experiment(to_json(e));
  EXPECT_EQ(to_json(again), to_json(e));
}

TEST(ConfigIo, ErrorsNameTheField) {
  auto doc = read_json(sbloc::test::scenario_path("three_source_noise_free"));
  auto expect_error = [](const json& j, const std::string& needle) {
    try {
      parse_experiment(j);
      FAIL() << "expected ConfigError mentioning " << needle;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  auto j = doc;
  j["grid"]["spacing"] = "wide";
  expect_error(j, "grid.spacing");
  j = doc;
  j["solver"]["colour"] = 3;
  expect_error(j, "colour");
  j = doc;
  j.erase("sources");
  expect_error(j, "sources");
  j = doc;
  j["fft_block"] = 100;
  expect_error(j, "fft_block");
  j = doc;
  j["postprocess"]["k"] = "many";
  expect_error(j, "postprocess.k");
}

TEST(ConfigIo, SyntaxErrorReportsLine) {
  const auto dir = sbloc::test::scratch_dir("badjson");
  std::ofstream(dir / "s.json") << "{\n  \"name\": \"x\",\n  oops\n}\n";
  try {
    load_experiment(dir / "s.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ConfigIo, EstimatesRoundTrip) {
  std::vector<SourceEstimate> est{{Vec3(0.1, -0.2, 0.3), 0.5, {4, 5}}, {Vec3(0, 0, 0.3), 0.25, {9}}};
  const auto back = estimates_from_json(estimates_to_json(est));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].centroid, est[0].centroid);
  EXPECT_EQ(back[0].member_indices, est[0].member_indices);
  EXPECT_EQ(estimates_to_csv(est).substr(0, 24), "x,y,z,strength,n_members");
}

TEST(Pipeline, PostprocessRejectsEmptyResult) {
  const auto s = sbloc::test::reference_experiment().scenario;
  PostprocessConfig cfg;
  cfg.threshold = 1.0;
  EXPECT_THROW(postprocess(true_solution(s).diag, s.grid, cfg), EmptyResultError);
}

TEST(Pipeline, PostprocessClampsK) {
  const auto s = sbloc::test::reference_experiment().scenario;
  PostprocessConfig cfg;
  cfg.k = 5;
  const auto post = postprocess(true_solution(s).diag, s.grid, cfg);
  EXPECT_EQ(post.k, 3u);
  EXPECT_EQ(post.warnings.size(), 1u);
}
