#include "sbloc/pipeline.hpp"

#include <algorithm>

#include "sbloc/matrix_io.hpp"

namespace sbloc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ComplexMatrix as_column(const ComplexVector& v) { return ComplexMatrix(v); }

std::string diagonal_table(const ComplexVector& diag, const FocusGrid& grid) {
  std::string out = "index,x,y,z,re,im\n";
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const Vec3 p = grid.point(static_cast<std::size_t>(i));
    out += std::to_string(i + 1) + "," + format_double(p.x()) + "," + format_double(p.y()) + "," +
           format_double(p.z()) + "," + format_double(diag(i).real()) + "," + format_double(diag(i).imag()) + "\n";
  }
  return out;
}

} // namespace

Simulation simulate(const Experiment& e, std::uint64_t seed) {
  e.scenario.validate();
  Simulation sim;
  sim.warnings = place_sources(e.scenario).warnings;
  sim.csm = estimate_csm(e.scenario, seed);
  sim.steering = build_steering_matrix(e.scenario);
  sim.truth = true_solution(e.scenario);
  return sim;
}

void write_simulation(const Simulation& sim, const Experiment& e, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  json truth = {{"diagonal", files::truth_matrix}, {"sources", truth_to_json(truth_sources(e.scenario))}};
  if (!sim.warnings.empty())
    truth["warnings"] = sim.warnings;
  write_file_atomic(out_dir / files::scenario, dump(to_json(e)));
  save_cmat(out_dir / files::csm, sim.csm.C);
  write_file_atomic(out_dir / files::csm_sidecar, dump(csm_sidecar(sim.csm, e.scenario.band_index, files::csm)));
  save_cmat(out_dir / files::steering, sim.steering);
  save_cmat(out_dir / files::truth_matrix, as_column(sim.truth.diag));
  write_file_atomic(out_dir / files::truth, dump(truth));
}

SolveReport solve_files(const SolverConfig& config, const fs::path& csm_file, const fs::path& steering_file,
                        const fs::path& out_dir, bool include_timing, std::optional<std::uint64_t> seed) {
  config.validate();
  const ComplexMatrix c = read_cmat(csm_file);
  const ComplexMatrix a = read_cmat(steering_file);
  if (c.rows() != c.cols())
    throw ConfigError(csm_file.string() + ": cross-spectral matrix must be square");
  if (a.rows() != c.rows())
    throw ConfigError("steering matrix has " + std::to_string(a.rows()) + " rows but the CSM is " +
                      std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
  if ((c - c.adjoint()).norm() > 1e-12 * c.norm())
    throw ConfigError(csm_file.string() + ": cross-spectral matrix is not Hermitian");

  SolveReport report;
  try {
    report = solve(a, c, config);
  } catch (const DivergenceError& err) {
    json j = {{"error", err.what()}, {"energy", err.energy_trace}, {"residual", err.residual_trace},
              {"config", to_json(config)}};
    write_file_atomic(out_dir / files::divergence, dump(j));
    throw;
  }
  report.seed = seed;

  auto save_iterate = [](const fs::path& p, const Iterate& it) {
    if (const auto* dm = std::get_if<DiagonalMatrix>(&it))
      save_cmat(p, as_column(dm->diag));
    else
      save_cmat(p, std::get<ComplexMatrix>(it));
  };
  save_iterate(out_dir / files::x, report.x);
  save_iterate(out_dir / files::d, report.d);
  write_file_atomic(out_dir / files::report, dump(report_to_json(report, files::x, files::d, include_timing)));
  return report;
}

Postprocessed postprocess(const ComplexVector& diag, const FocusGrid& grid, const PostprocessConfig& config) {
  Postprocessed out;
  auto remap = remap_diagonal(diag, grid, config.threshold);
  out.points = std::move(remap.points);
  out.max_imag = remap.max_imag;
  if (out.points.empty())
    throw EmptyResultError("no sources detected: no diagonal entry exceeds " + format_double(config.threshold));

  const KMeansOptions opts{config.seed, 300, config.weighted_centroids};
  if (config.k) {
    out.k = *config.k;
    if (out.k > out.points.size()) {
      out.warnings.push_back("k = " + std::to_string(out.k) + " reduced to the " +
                             std::to_string(out.points.size()) + " detected entries");
      out.k = out.points.size();
    }
  } else {
    out.k_auto = true;
    out.selection = choose_k(out.points, config.k_max, opts);
    out.k = out.selection.k;
  }
  const auto clustering = kmeans(out.points, out.k, opts);
  out.estimates = merge_close(summarize(out.points, clustering), config.merge_radius);
  return out;
}

ComplexVector load_report_diagonal(const fs::path& report_file) {
  const json report = read_json(report_file);
  if (!report.contains("d_file") || !report["d_file"].is_string())
    throw ConfigError(report_file.string() + ": missing d_file");
  const ComplexMatrix d = read_cmat(report_file.parent_path() / report["d_file"].get<std::string>());
  if (d.cols() == 1)
    return d.col(0);
  if (d.rows() != d.cols())
    throw ConfigError(report_file.string() + ": D must be square or a single column");
  return d.diagonal();
}

Postprocessed postprocess_files(const fs::path& report_file, const FocusGrid& grid, const PostprocessConfig& config,
                                const fs::path& out_dir) {
  const ComplexVector diag = load_report_diagonal(report_file);
  if (static_cast<std::size_t>(diag.size()) != grid.size())
    throw ConfigError("solution has " + std::to_string(diag.size()) + " diagonal entries but the grid has " +
                      std::to_string(grid.size()) + " points");
  Postprocessed post = postprocess(diag, grid, config);

  json doc = {{"k", post.k},
              {"k_auto", post.k_auto},
              {"threshold", config.threshold},
              {"max_imag", post.max_imag},
              {"n_points", post.points.size()},
              {"estimates", estimates_to_json(post.estimates)}};
  if (!post.warnings.empty())
    doc["warnings"] = post.warnings;
  fs::create_directories(out_dir);
  write_file_atomic(out_dir / files::estimates, dump(doc));
  write_file_atomic(out_dir / files::estimates_csv, estimates_to_csv(post.estimates));
  write_file_atomic(out_dir / files::diagonal_csv, diagonal_table(diag, grid));
  if (post.k_auto) {
    std::string table = "k,silhouette\n";
    for (const auto& [k, s] : post.selection.table)
      table += std::to_string(k) + "," + format_double(s) + "\n";
    write_file_atomic(out_dir / files::silhouette_csv, table);
  }
  return post;
}

Evaluation evaluate_files(const fs::path& estimates_file, const fs::path& truth_file, const fs::path& out_dir) {
  const json est = read_json(estimates_file);
  const json truth = read_json(truth_file);
  const auto estimates = estimates_from_json(est.is_object() && est.contains("estimates") ? est["estimates"] : est);
  const auto sources = truth_from_json(truth.is_object() && truth.contains("sources") ? truth["sources"] : truth);
  const Evaluation ev = evaluate(estimates, sources);
  write_file_atomic(out_dir / files::metrics, dump(evaluation_to_json(ev)));
  return ev;
}

PipelineResult run_all(const Experiment& e, std::uint64_t seed, const fs::path& out_dir, bool include_timing) {
  PipelineResult result;
  result.simulation = simulate(e, seed);
  write_simulation(result.simulation, e, out_dir);
  result.report = solve_files(e.solver, out_dir / files::csm, out_dir / files::steering, out_dir, include_timing, seed);
  result.post = postprocess_files(out_dir / files::report, e.scenario.grid, e.postprocess, out_dir);
  result.evaluation = evaluate_files(out_dir / files::estimates, out_dir / files::truth, out_dir);

  const json index = {{"scenario", files::scenario},
                      {"seed", seed},
                      {"csm", files::csm},
                      {"csm_sidecar", files::csm_sidecar},
                      {"steering", files::steering},
                      {"truth", files::truth},
                      {"report", files::report},
                      {"estimates", files::estimates},
                      {"metrics", files::metrics},
                      {"detected_sources", result.post.estimates.size()},
                      {"max_position_error", result.evaluation.max_position_error}};
  write_file_atomic(out_dir / files::pipeline, dump(index));
  return result;
}

} // namespace sbloc
