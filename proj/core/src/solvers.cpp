#include "sbloc/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace sbloc {

ThresholdMatrix WeightSpec::materialise(std::size_t m) const {
  if (explicit_weights) {
    if (explicit_weights->rows() != m || explicit_weights->cols() != m)
      throw DimensionError("explicit weight matrix must be " + std::to_string(m) + "x" + std::to_string(m));
    return *explicit_weights;
  }
  RealMatrix w = RealMatrix::Constant(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m), off_diagonal);
  w.diagonal().setConstant(diagonal);
  return ThresholdMatrix(std::move(w));
}

void SolverConfig::validate() const {
  if (outer_iterations < 1 || alternating_sweeps < 1 || gd_steps < 1)
    throw ConfigError("solver iteration counts must all be >= 1");
  if (!(coupling_weight > 0.0) || !std::isfinite(coupling_weight))
    throw ConfigError("coupling_weight must be > 0");
  if (!(sparsity_weight >= 0.0) || !std::isfinite(sparsity_weight))
    throw ConfigError("sparsity_weight must be >= 0");
  if (!(weights.diagonal >= 0.0) || !(weights.off_diagonal >= 0.0) || !std::isfinite(weights.diagonal) ||
      !std::isfinite(weights.off_diagonal))
    throw ConfigError("weights must be finite and >= 0");
  if (!optimal_step && !(fixed_step > 0.0))
    throw ConfigError("a fixed step size must be > 0");
  if (!(residual_tol >= 0.0) || !(change_tol >= 0.0))
    throw ConfigError("tolerances must be >= 0");
  if (!(divergence_factor > 1.0))
    throw ConfigError("divergence_factor must be > 1");
  if (!std::isfinite(initial_value))
    throw ConfigError("initial_value must be finite");
}

ComplexVector diagonal_of(const Iterate& it) {
  if (const auto* d = std::get_if<DiagonalMatrix>(&it))
    return d->diag;
  return std::get<ComplexMatrix>(it).diagonal();
}

namespace {

void check_problem(const ComplexMatrix& a, const ComplexMatrix& c) {
  if (c.rows() != a.rows() || c.cols() != a.rows())
    throw DimensionError("C must be " + std::to_string(a.rows()) + "x" + std::to_string(a.rows()));
}

void check_square(const ComplexMatrix& a, const ComplexMatrix& x, const char* name) {
  if (x.rows() != a.cols() || x.cols() != a.cols())
    throw DimensionError(std::string(name) + " must be " + std::to_string(a.cols()) + "x" +
                         std::to_string(a.cols()));
}

void check_diag(const ComplexMatrix& a, const DiagonalMatrix& x, const char* name) {
  if (static_cast<Eigen::Index>(x.dim()) != a.cols())
    throw DimensionError(std::string(name) + " must have dimension " + std::to_string(a.cols()));
}

/// diag(A^H R A) as an m-vector.
ComplexVector diagonal_contraction(const ComplexMatrix& a, const ComplexMatrix& r) {
  const ComplexMatrix ra = r * a;
  return a.conjugate().cwiseProduct(ra).colwise().sum().transpose();
}

// Tracks the splitting energy inside one gradient loop.
class DivergenceGuard {
public:
  DivergenceGuard(double factor, const std::vector<double>& energy, const std::vector<double>& residual)
      : factor_(factor), energy_(energy), residual_(residual) {}

  void reset() { running_min_ = std::numeric_limits<double>::infinity(); }

  void check(double e) {
    if (!std::isfinite(e))
      fail("non-finite splitting energy");
    if (std::isfinite(running_min_) && e > factor_ * running_min_ && e > 0.0) {
      std::ostringstream msg;
      msg << "splitting energy grew from " << running_min_ << " to " << e;
      fail(msg.str());
    }
    running_min_ = std::min(running_min_, e);
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw DivergenceError("solver diverged: " + why, energy_, residual_);
  }

private:
  double factor_;
  double running_min_ = std::numeric_limits<double>::infinity();
  const std::vector<double>& energy_;
  const std::vector<double>& residual_;
};

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

ComplexMatrix diagonal_congruence(const ComplexMatrix& a, const ComplexVector& x) {
  if (x.size() != a.cols())
    throw DimensionError("diagonal_congruence: diagonal length does not match A");
  return (a * x.asDiagonal()) * a.adjoint();
}

double objective_weighted(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& c,
                          double lambda, const ThresholdMatrix& w) {
  check_problem(a, c);
  check_square(a, x, "X");
  if (w.rows() != static_cast<std::size_t>(x.rows()) || w.cols() != static_cast<std::size_t>(x.cols()))
    throw DimensionError("W must match X");
  const double fit = 0.5 * (a * x * a.adjoint() - c).squaredNorm();
  double l1 = 0.0;
  const double* wp = w.values().data();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    l1 += wp[i] * (std::abs(x.data()[i].real()) + std::abs(x.data()[i].imag()));
  return fit + lambda * l1;
}

double objective_structured(const ComplexMatrix& a, const DiagonalMatrix& x, const ComplexMatrix& c,
                            double lambda) {
  check_problem(a, c);
  check_diag(a, x, "X");
  return 0.5 * (diagonal_congruence(a, x.diag) - c).squaredNorm() + lambda * l1_norm(x.diag);
}

double splitting_energy(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& c,
                        double mu, const ComplexMatrix& d, const ComplexMatrix& b) {
  check_problem(a, c);
  check_square(a, x, "X");
  check_square(a, d, "D");
  check_square(a, b, "B");
  return 0.5 * (a * x * a.adjoint() - c).squaredNorm() + 0.5 * mu * (d - x - b).squaredNorm();
}

double splitting_energy(const ComplexMatrix& a, const DiagonalMatrix& x, const ComplexMatrix& c,
                        double mu, const DiagonalMatrix& d, const DiagonalMatrix& b) {
  check_problem(a, c);
  check_diag(a, x, "X");
  check_diag(a, d, "D");
  check_diag(a, b, "B");
  return 0.5 * (diagonal_congruence(a, x.diag) - c).squaredNorm() +
         0.5 * mu * (d.diag - x.diag - b.diag).squaredNorm();
}

ComplexMatrix grad_unstructured(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& c,
                                double mu, const ComplexMatrix& d, const ComplexMatrix& b) {
  check_problem(a, c);
  check_square(a, x, "X");
  check_square(a, d, "D");
  check_square(a, b, "B");
  const ComplexMatrix r = a * x * a.adjoint() - c;
  ComplexMatrix g = a.adjoint() * r * a;
  g += mu * (x - d + b);
  return g;
}

DiagonalMatrix grad_diagonal(const ComplexMatrix& a, const DiagonalMatrix& x, const ComplexMatrix& c,
                             double mu, const DiagonalMatrix& d, const DiagonalMatrix& b) {
  check_problem(a, c);
  check_diag(a, x, "X");
  check_diag(a, d, "D");
  check_diag(a, b, "B");
  const ComplexMatrix r = diagonal_congruence(a, x.diag) - c;
  ComplexVector g = diagonal_contraction(a, r);
  g += mu * (x.diag - d.diag + b.diag);
  return DiagonalMatrix(std::move(g));
}

std::optional<double> optimal_step(const ComplexMatrix& a, const ComplexMatrix& g, double mu) {
  check_square(a, g, "G");
  const double g2 = g.squaredNorm();
  if (g2 == 0.0)
    return std::nullopt;
  return g2 / ((a * g * a.adjoint()).squaredNorm() + mu * g2);
}

std::optional<double> optimal_step(const ComplexMatrix& a, const DiagonalMatrix& g, double mu) {
  check_diag(a, g, "G");
  const double g2 = g.diag.squaredNorm();
  if (g2 == 0.0)
    return std::nullopt;
  return g2 / (diagonal_congruence(a, g.diag).squaredNorm() + mu * g2);
}

SolveReport solve_weighted(const ComplexMatrix& a, const ComplexMatrix& c, const SolverConfig& config,
                           const WeightedObserver& observer) {
  config.validate();
  check_problem(a, c);
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index m = a.cols();
  const double mu = config.coupling_weight;
  const ThresholdMatrix weights = config.weights.materialise(static_cast<std::size_t>(m));
  const ThresholdMatrix thresholds = weights.scaled(config.threshold_scale());
  const double c_norm = c.norm();

  SolveReport report;
  report.config = config;
  ComplexMatrix x = ComplexMatrix::Constant(m, m, Complex(config.initial_value, 0.0));
  ComplexMatrix d = x;
  ComplexMatrix b = ComplexMatrix::Zero(m, m);
  DivergenceGuard guard(config.divergence_factor, report.energy, report.residual);

  const ComplexMatrix ah = a.adjoint();
  for (std::size_t k = 0; k < config.outer_iterations; ++k) {
    for (std::size_t sweep = 0; sweep < config.alternating_sweeps; ++sweep) {
      ComplexMatrix r = a * x * ah - c;
      guard.reset();
      for (std::size_t step = 0; step < config.gd_steps; ++step) {
        ComplexMatrix g = ah * r * a;
        g += mu * (x - d + b);
        const double g2 = g.squaredNorm();
        if (g2 == 0.0)
          break;
        const ComplexMatrix p = a * g * ah;
        const double alpha = config.optimal_step ? g2 / (p.squaredNorm() + mu * g2) : config.fixed_step;
        x -= alpha * g;
        r -= alpha * p;
        const double e = 0.5 * r.squaredNorm() + 0.5 * mu * (d - x - b).squaredNorm();
        report.energy.push_back(e);
        ++report.gradient_steps_run;
        guard.check(e);
        if (config.change_tol > 0.0 && alpha * std::sqrt(g2) <= config.change_tol * x.norm())
          break;
      }
      d = shrink_complex(ComplexMatrix(x + b), thresholds);
    }
    b += x - d;
    ++report.outer_iterations_run;

    const double res = (a * x * ah - c).norm();
    report.residual.push_back(res);
    report.objective.push_back(objective_weighted(a, d, c, config.sparsity_weight, weights));
    if (!std::isfinite(res) || !all_finite(x))
      guard.fail("non-finite iterate");
    if (observer)
      observer({k, x, d, b});
    if (config.residual_tol > 0.0 && res <= config.residual_tol * c_norm)
      break;
  }

  report.x = std::move(x);
  report.d = std::move(d);
  report.wall_time_s = elapsed_since(t0);
  return report;
}

SolveReport solve_structured(const ComplexMatrix& a, const ComplexMatrix& c, const SolverConfig& config,
                             const StructuredObserver& observer) {
  config.validate();
  check_problem(a, c);
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index m = a.cols();
  const double lambda = config.coupling_weight;
  const double threshold = config.threshold_scale();
  const double c_norm = c.norm();

  SolveReport report;
  report.config = config;
  DiagonalMatrix x(ComplexVector::Constant(m, Complex(config.initial_value, 0.0)));
  DiagonalMatrix d = x;
  DiagonalMatrix b(static_cast<std::size_t>(m));
  DivergenceGuard guard(config.divergence_factor, report.energy, report.residual);

  for (std::size_t k = 0; k < config.outer_iterations; ++k) {
    for (std::size_t sweep = 0; sweep < config.alternating_sweeps; ++sweep) {
      ComplexMatrix r = diagonal_congruence(a, x.diag) - c;
      guard.reset();
      for (std::size_t step = 0; step < config.gd_steps; ++step) {
        ComplexVector g = diagonal_contraction(a, r);
        g += lambda * (x.diag - d.diag + b.diag);
        const double g2 = g.squaredNorm();
        if (g2 == 0.0)
          break;
        const ComplexMatrix p = diagonal_congruence(a, g);
        const double alpha = config.optimal_step ? g2 / (p.squaredNorm() + lambda * g2) : config.fixed_step;
        x.diag -= alpha * g;
        r -= alpha * p;
        const double e = 0.5 * r.squaredNorm() + 0.5 * lambda * (d.diag - x.diag - b.diag).squaredNorm();
        report.energy.push_back(e);
        ++report.gradient_steps_run;
        guard.check(e);
        if (config.change_tol > 0.0 && alpha * std::sqrt(g2) <= config.change_tol * x.diag.norm())
          break;
      }
      d.diag = shrink_complex(ComplexVector(x.diag + b.diag), threshold);
    }
    b.diag += x.diag - d.diag;
    ++report.outer_iterations_run;

    const double res = (diagonal_congruence(a, x.diag) - c).norm();
    report.residual.push_back(res);
    report.objective.push_back(objective_structured(a, d, c, config.sparsity_weight));
    if (!std::isfinite(res) || !x.diag.allFinite())
      guard.fail("non-finite iterate");
    if (observer)
      observer({k, x, d, b});
    if (config.residual_tol > 0.0 && res <= config.residual_tol * c_norm)
      break;
  }

  report.x = std::move(x);
  report.d = std::move(d);
  report.wall_time_s = elapsed_since(t0);
  return report;
}

SolveReport solve(const ComplexMatrix& a, const ComplexMatrix& c, const SolverConfig& config) {
  return config.mode == SolverMode::weighted ? solve_weighted(a, c, config) : solve_structured(a, c, config);
}

} // namespace sbloc
