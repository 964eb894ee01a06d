#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbloc/evaluate.hpp"
#include "sbloc/forward.hpp"
#include "sbloc/postprocess.hpp"
#include "sbloc/scenario.hpp"
#include "sbloc/solvers.hpp"

namespace sbloc {

struct PostprocessConfig {
  /// Number of clusters; empty selects k by silhouette.
  std::optional<std::size_t> k;
  double threshold = 1e-5;
  std::size_t k_max = 8;
  std::uint64_t seed = 0;
  bool weighted_centroids = false;
  /// Merge estimates closer than this (metres); 0 disables.
  double merge_radius = 0.0;
};

/// Everything one scenario file describes.
struct Experiment {
  Scenario scenario;
  SolverConfig solver;
  PostprocessConfig postprocess;
  std::uint64_t seed = 1;
};

/// Parses a scenario document. Unknown keys and type errors raise ConfigError
/// naming the JSON path of the offending field.
Experiment parse_experiment(const nlohmann::json& doc);
/// Reads and parses a scenario file; syntax errors report the line number.
Experiment load_experiment(const std::filesystem::path& path);
nlohmann::json to_json(const Experiment& e);

SolverConfig parse_solver_config(const nlohmann::json& j, const std::string& path = "solver");
nlohmann::json to_json(const SolverConfig& c);
PostprocessConfig parse_postprocess_config(const nlohmann::json& j, const std::string& path = "postprocess");
nlohmann::json to_json(const PostprocessConfig& c);
nlohmann::json to_json(const FocusGrid& g);
FocusGrid parse_grid(const nlohmann::json& j, const std::string& path = "grid");

const char* to_string(SolverMode m);
SolverMode parse_solver_mode(const std::string& s);

nlohmann::json csm_sidecar(const CrossSpectralMatrix& csm, std::size_t band_index, const std::string& matrix_file);

/// Report summary: traces, counters, config echo and the matrix file names.
nlohmann::json report_to_json(const SolveReport& r, const std::string& x_file, const std::string& d_file,
                              bool include_timing);

nlohmann::json estimates_to_json(const std::vector<SourceEstimate>& estimates);
std::vector<SourceEstimate> estimates_from_json(const nlohmann::json& j);
std::string estimates_to_csv(const std::vector<SourceEstimate>& estimates);

nlohmann::json truth_to_json(const std::vector<TruthSource>& truth);
std::vector<TruthSource> truth_from_json(const nlohmann::json& j);

nlohmann::json evaluation_to_json(const Evaluation& ev);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

} // namespace sbloc
