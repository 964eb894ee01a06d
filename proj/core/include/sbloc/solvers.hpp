#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "sbloc/linalg.hpp"
#include "sbloc/prox.hpp"

namespace sbloc {

enum class SolverMode { weighted, structured };

/// Weights W of the weighted model: either a full explicit matrix or the
/// diagonal / off-diagonal pair used to favour diagonal solutions.
struct WeightSpec {
  double diagonal = 1.0;
  double off_diagonal = 1.0;
  std::optional<ThresholdMatrix> explicit_weights;

  ThresholdMatrix materialise(std::size_t m) const;
};

struct SolverConfig {
  SolverMode mode = SolverMode::structured;
  std::size_t outer_iterations = 75;
  std::size_t alternating_sweeps = 4;
  std::size_t gd_steps = 10;
  /// Weight of the quadratic coupling term ||D - X - B||^2 / 2.
  double coupling_weight = 1e4;
  /// Weight of the l1 term.
  double sparsity_weight = 10.0;
  WeightSpec weights;
  bool optimal_step = true;
  double fixed_step = 0.0;
  /// Stop the Bregman loop once ||A X A^H - C||_F <= residual_tol * ||C||_F (0 disables).
  double residual_tol = 0.0;
  /// Leave a gradient loop early once ||dX||_F <= change_tol * ||X||_F (0 disables).
  double change_tol = 0.0;
  /// X and D start at this constant (B always starts at zero).
  double initial_value = 0.0;
  /// Abort when an inner energy exceeds this multiple of its running minimum.
  double divergence_factor = 10.0;

  /// D-update threshold per unit weight: sparsity_weight / coupling_weight.
  double threshold_scale() const { return sparsity_weight / coupling_weight; }
  void validate() const;
};

/// Final X or D: full matrix (weighted) or diagonal (structured).
using Iterate = std::variant<ComplexMatrix, DiagonalMatrix>;
ComplexVector diagonal_of(const Iterate& it);

struct SolveReport {
  SolverConfig config;
  Iterate x;
  /// Shrunk iterate with exact zeros; the reported solution.
  Iterate d;
  /// Splitting energy after every gradient step.
  std::vector<double> energy;
  /// Model objective evaluated at D after every outer iteration.
  std::vector<double> objective;
  /// ||A X A^H - C||_F after every outer iteration.
  std::vector<double> residual;
  std::size_t outer_iterations_run = 0;
  std::size_t gradient_steps_run = 0;
  double wall_time_s = 0.0;
  std::optional<std::uint64_t> seed;
};

template <typename T>
struct OuterSnapshot {
  std::size_t iteration;
  const T& x;
  const T& d;
  const T& b;
};
using WeightedObserver = std::function<void(const OuterSnapshot<ComplexMatrix>&)>;
using StructuredObserver = std::function<void(const OuterSnapshot<DiagonalMatrix>&)>;

/// A diag(x) A^H without forming the m x m diagonal matrix.
ComplexMatrix diagonal_congruence(const ComplexMatrix& a, const ComplexVector& x);

/// 1/2 ||A X A^H - C||^2_F + lambda ||W o X||_1.
double objective_weighted(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& c,
                          double lambda, const ThresholdMatrix& w);
/// 1/2 ||A X A^H - C||^2_F + lambda ||X||_1 over diagonal X.
double objective_structured(const ComplexMatrix& a, const DiagonalMatrix& x, const ComplexMatrix& c,
                            double lambda);

/// 1/2 ||A X A^H - C||^2_F + mu/2 ||D - X - B||^2_F, minimised by the X-update.
double splitting_energy(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& c,
                        double mu, const ComplexMatrix& d, const ComplexMatrix& b);
double splitting_energy(const ComplexMatrix& a, const DiagonalMatrix& x, const ComplexMatrix& c,
                        double mu, const DiagonalMatrix& d, const DiagonalMatrix& b);

/// A^H (A X A^H - C) A + mu (X - D + B). Real and imaginary parts are the
/// partial derivatives of splitting_energy w.r.t. Re X and Im X.
ComplexMatrix grad_unstructured(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& c,
                                double mu, const ComplexMatrix& d, const ComplexMatrix& b);

/// Gradient restricted to diagonal matrices: the diagonal of grad_unstructured,
/// computed column by column with O(n m) memory.
DiagonalMatrix grad_diagonal(const ComplexMatrix& a, const DiagonalMatrix& x, const ComplexMatrix& c,
                             double mu, const DiagonalMatrix& d, const DiagonalMatrix& b);

/// Exact line-search step ||G||^2 / (||A G A^H||^2 + mu ||G||^2) along -G.
/// Empty when G = 0 (already stationary).
std::optional<double> optimal_step(const ComplexMatrix& a, const ComplexMatrix& g, double mu);
std::optional<double> optimal_step(const ComplexMatrix& a, const DiagonalMatrix& g, double mu);

/// Split Bregman for the (weighted) unstructured model.
SolveReport solve_weighted(const ComplexMatrix& a, const ComplexMatrix& c, const SolverConfig& config,
                           const WeightedObserver& observer = {});

/// Split Bregman over diagonal matrices.
SolveReport solve_structured(const ComplexMatrix& a, const ComplexMatrix& c, const SolverConfig& config,
                             const StructuredObserver& observer = {});

/// Dispatches on config.mode.
SolveReport solve(const ComplexMatrix& a, const ComplexMatrix& c, const SolverConfig& config);

} // namespace sbloc
