#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sbloc/config_io.hpp"

namespace sbloc {

// Batch pipeline behind the command line tool:
// simulate -> solve -> postprocess -> evaluate. Every stage reads and writes
// plain files in an output directory; all writes are atomic.

namespace files {
inline constexpr const char* scenario = "scenario.json";
inline constexpr const char* csm = "csm.cmat";
inline constexpr const char* csm_sidecar = "csm.json";
inline constexpr const char* steering = "steering.cmat";
inline constexpr const char* truth_matrix = "truth.cmat";
inline constexpr const char* truth = "truth.json";
inline constexpr const char* report = "report.json";
inline constexpr const char* x = "X.cmat";
inline constexpr const char* d = "D.cmat";
inline constexpr const char* divergence = "divergence.json";
inline constexpr const char* estimates = "estimates.json";
inline constexpr const char* estimates_csv = "estimates.csv";
inline constexpr const char* diagonal_csv = "diagonal.csv";
inline constexpr const char* silhouette_csv = "silhouette.csv";
inline constexpr const char* metrics = "metrics.json";
inline constexpr const char* pipeline = "pipeline.json";
} // namespace files

struct Simulation {
  CrossSpectralMatrix csm;
  ComplexMatrix steering;
  DiagonalMatrix truth;
  std::vector<std::string> warnings;
};

Simulation simulate(const Experiment& e, std::uint64_t seed);
void write_simulation(const Simulation& sim, const Experiment& e, const std::filesystem::path& out_dir);

/// Solves from matrix files and writes report.json, X.cmat and D.cmat. On
/// divergence the traces go to divergence.json and the error is rethrown.
SolveReport solve_files(const SolverConfig& config, const std::filesystem::path& csm_file,
                        const std::filesystem::path& steering_file, const std::filesystem::path& out_dir,
                        bool include_timing = false, std::optional<std::uint64_t> seed = std::nullopt);

struct Postprocessed {
  std::vector<WeightedPoint> points;
  std::vector<SourceEstimate> estimates;
  std::size_t k = 0;
  bool k_auto = false;
  KSelection selection;
  double max_imag = 0.0;
  std::vector<std::string> warnings;
};

/// Remap, cluster and summarise one solution diagonal. Throws
/// EmptyResultError when no entry exceeds the threshold.
Postprocessed postprocess(const ComplexVector& diag, const FocusGrid& grid, const PostprocessConfig& config);

/// Loads the D diagonal referenced by a report file.
ComplexVector load_report_diagonal(const std::filesystem::path& report_file);

Postprocessed postprocess_files(const std::filesystem::path& report_file, const FocusGrid& grid,
                                const PostprocessConfig& config, const std::filesystem::path& out_dir);

Evaluation evaluate_files(const std::filesystem::path& estimates_file, const std::filesystem::path& truth_file,
                          const std::filesystem::path& out_dir);

struct PipelineResult {
  Simulation simulation;
  SolveReport report;
  Postprocessed post;
  Evaluation evaluation;
};

/// Runs every stage into out_dir and writes pipeline.json indexing the artifacts.
PipelineResult run_all(const Experiment& e, std::uint64_t seed, const std::filesystem::path& out_dir,
                       bool include_timing = false);

} // namespace sbloc
