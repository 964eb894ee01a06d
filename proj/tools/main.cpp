// sbloc: batch front end for simulate / solve / postprocess / evaluate.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sbloc/errors.hpp"
#include "sbloc/pipeline.hpp"

namespace fs = std::filesystem;
using namespace sbloc;

namespace {

enum Exit : int { ok = 0, failure = 1, config = 2, divergence = 3, empty = 4 };

struct Options {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string mode;
  std::string k;
  std::optional<double> threshold;
  std::vector<std::size_t> bands;
  bool timing = false;
  // solve / postprocess / evaluate inputs; default to files inside --out
  std::string csm, steering, report, estimates, truth;
};

Experiment experiment_for(const Options& o, bool required) {
  Experiment e;
  if (!o.scenario.empty())
    e = load_experiment(o.scenario);
  else if (required)
    throw ConfigError("--scenario is required");
  if (!o.mode.empty())
    e.solver.mode = parse_solver_mode(o.mode);
  if (!o.k.empty()) {
    if (o.k == "auto") {
      e.postprocess.k.reset();
    } else {
      std::size_t pos = 0;
      long long k = -1;
      try {
        k = std::stoll(o.k, &pos);
      } catch (const std::exception&) {
      }
      if (pos != o.k.size() || k < 1)
        throw ConfigError("--k must be a positive integer or 'auto', got '" + o.k + "'");
      e.postprocess.k = static_cast<std::size_t>(k);
    }
  }
  if (o.threshold) {
    if (!(*o.threshold >= 0.0))
      throw ConfigError("--threshold must be >= 0");
    e.postprocess.threshold = *o.threshold;
  }
  return e;
}

fs::path input(const std::string& given, const Options& o, const char* fallback) {
  return given.empty() ? fs::path(o.out) / fallback : fs::path(given);
}

// Runs fn once, or once per band in band_<b>/ subdirectories.
template <typename Fn>
void for_each_band(const Options& o, const Experiment& base, Fn fn) {
  if (o.bands.empty()) {
    fn(base, fs::path(o.out));
    return;
  }
  for (std::size_t b : o.bands) {
    Experiment e = base;
    e.scenario.band_index = b;
    e.scenario.validate();
    fn(e, fs::path(o.out) / ("band_" + std::to_string(b)));
  }
}

int run(CLI::App& app, const Options& o) {
  const auto* sub = app.get_subcommands().front();
  const std::string verb = sub->get_name();

  if (verb == "simulate") {
    const Experiment base = experiment_for(o, true);
    for_each_band(o, base, [&](const Experiment& e, const fs::path& dir) {
      const auto sim = simulate(e, o.seed.value_or(e.seed));
      write_simulation(sim, e, dir);
      for (const auto& w : sim.warnings)
        std::cerr << "warning: " << w << "\n";
      std::cout << dir.string() << ": C " << sim.csm.C.rows() << "x" << sim.csm.C.cols() << ", A "
                << sim.steering.rows() << "x" << sim.steering.cols() << ", " << sim.csm.block_count << " blocks\n";
    });
  } else if (verb == "solve") {
    const Experiment e = experiment_for(o, false);
    const auto report = solve_files(e.solver, input(o.csm, o, files::csm), input(o.steering, o, files::steering),
                                    o.out, o.timing, o.seed);
    std::cout << to_string(report.config.mode) << ": " << report.outer_iterations_run << " outer iterations, "
              << report.gradient_steps_run << " gradient steps, final residual "
              << (report.residual.empty() ? 0.0 : report.residual.back()) << "\n";
  } else if (verb == "postprocess") {
    const Experiment e = experiment_for(o, true);
    const auto post = postprocess_files(input(o.report, o, files::report), e.scenario.grid, e.postprocess, o.out);
    for (const auto& w : post.warnings)
      std::cerr << "warning: " << w << "\n";
    std::cout << post.points.size() << " entries above threshold, k = " << post.k << (post.k_auto ? " (auto)" : "")
              << "\n";
    for (const auto& est : post.estimates)
      std::cout << "  (" << est.centroid.x() << ", " << est.centroid.y() << ", " << est.centroid.z()
                << ") strength " << est.total_strength << "\n";
  } else if (verb == "evaluate") {
    const auto ev = evaluate_files(input(o.estimates, o, files::estimates), input(o.truth, o, files::truth), o.out);
    std::cout << ev.pairs.size() << " matched, " << ev.unmatched_estimates << " spurious, " << ev.unmatched_truths
              << " missed, max position error " << ev.max_position_error << " m\n";
  } else if (verb == "run-all") {
    const Experiment base = experiment_for(o, true);
    for_each_band(o, base, [&](const Experiment& e, const fs::path& dir) {
      const auto r = run_all(e, o.seed.value_or(e.seed), dir, o.timing);
      std::cout << dir.string() << ": " << r.post.estimates.size() << " sources, max position error "
                << r.evaluation.max_position_error << " m\n";
    });
  }
  return Exit::ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse acoustic source localisation by split Bregman"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", o.scenario, "Scenario JSON file");
    cmd->add_option("--seed", o.seed, "Random seed (defaults to the scenario's)");
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_flag("--timing", o.timing, "Record wall time in report.json");
  };
  auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--mode", o.mode, "Solver mode")->check(CLI::IsMember({"weighted", "structured"}));
  };
  auto add_post = [&](CLI::App* cmd) {
    cmd->add_option("--k", o.k, "Cluster count or 'auto'");
    cmd->add_option("--threshold", o.threshold, "Detection threshold on |diag(D)|");
  };
  auto add_bands = [&](CLI::App* cmd) {
    cmd->add_option("--bands", o.bands, "Band indices, comma separated")->delimiter(',');
  };

  auto* simulate = app.add_subcommand("simulate", "Synthesize the CSM, steering matrix and truth");
  add_common(simulate);
  add_bands(simulate);

  auto* solve = app.add_subcommand("solve", "Run the split Bregman solver");
  add_common(solve);
  add_solver(solve);
  solve->add_option("--csm", o.csm, "CSM matrix file");
  solve->add_option("--steering", o.steering, "Steering matrix file");

  auto* post = app.add_subcommand("postprocess", "Threshold and cluster a solution diagonal");
  add_common(post);
  add_post(post);
  post->add_option("--report", o.report, "report.json of a solve");

  auto* evaluate = app.add_subcommand("evaluate", "Match estimates against the ground truth");
  add_common(evaluate);
  evaluate->add_option("--estimates", o.estimates, "estimates.json");
  evaluate->add_option("--truth", o.truth, "truth.json");

  auto* all = app.add_subcommand("run-all", "simulate, solve, postprocess and evaluate");
  add_common(all);
  add_solver(all);
  add_post(all);
  add_bands(all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::config;
  }

  try {
    return run(app, o);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::divergence;
  } catch (const EmptyResultError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::empty;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::config;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::config;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::failure;
  }
}
