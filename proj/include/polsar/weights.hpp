#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "polsar/distances.hpp"
#include "polsar/hermitian.hpp"

namespace polsar {

/// Class weights on the unit simplex.
class WeightVector {
 public:
  WeightVector() = default;
  /// Throws InvalidArgument unless every entry is >= 0 and they sum to 1
  /// within kSimplexTolerance.
  explicit WeightVector(std::vector<double> w);

  static WeightVector uniform(std::size_t classes);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t m) const { return w_[m]; }
  std::span<const double> values() const { return w_; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> w_;
};

inline constexpr double kSimplexTolerance = 1e-9;

bool on_simplex(std::span<const double> w, double tol = kSimplexTolerance);

/// Euclidean projection onto {w : w >= 0, sum w = 1}.
std::vector<double> project_to_simplex(std::span<const double> v);

/// s / (1 + lambda |s|).
double phi(double s, double lambda);

struct TrainingClass {
  HermitianMatrix3 prototype;
  std::vector<HermitianMatrix3> samples;
};

/// Validates M >= 2 and every class non-empty; throws InvalidArgument.
void validate_training_set(std::span<const TrainingClass> train);

/// d(Z_m^k, Sigma_m') for every training sample and every prototype.
/// Distances do not depend on the weights, so the optimizer evaluates them
/// once.
class DistanceTable {
 public:
  /// looks[m'] is the number of looks used for distances to prototype m'.
  DistanceTable(std::span<const TrainingClass> train, DistanceKind kind,
                std::span<const double> looks);
  DistanceTable(std::span<const TrainingClass> train, DistanceKind kind, double shared_looks);

  std::size_t classes() const { return class_sizes_.size(); }
  std::size_t class_size(std::size_t m) const { return class_sizes_[m]; }
  std::size_t rows() const { return rows_; }
  /// Class of row r (rows are grouped by class in order).
  std::size_t row_class(std::size_t r) const { return row_class_[r]; }
  /// Distance from the sample of row r to prototype m.
  double at(std::size_t r, std::size_t m) const { return values_[r * classes() + m]; }

 private:
  std::vector<std::size_t> class_sizes_;
  std::vector<std::size_t> row_class_;
  std::size_t rows_ = 0;
  std::vector<double> values_;
};

/// Discrimination energy
///   sum_m (1/M_m) sum_k sum_{m' != m} phi(w_m d(Z_m^k, Z_m) - w_m' d(Z_m^k, Z_m')).
/// Weights need not lie on the simplex (the finite-difference gradient
/// steps off it). Per-row terms are computed in parallel and reduced in
/// row order, so the result does not depend on the thread count.
double energy(std::span<const double> w, const DistanceTable& table, double lambda);

double energy(const WeightVector& w, std::span<const TrainingClass> train, DistanceKind kind,
              double shared_looks, double lambda);

namespace serial {
double energy(std::span<const double> w, const DistanceTable& table, double lambda);
}

struct OptimizerOptions {
  double lambda = 1.0;
  int max_iters = 500;
  double initial_step = 0.1;
  int max_halvings = 60;
  double min_improvement = 1e-8;
  double fd_step = 1e-6;
};

struct OptimizerTraceEntry {
  int iteration = 0;
  double energy = 0.0;
  double step = 0.0;
  std::vector<double> weights;
};

struct OptimizerResult {
  WeightVector weights;
  double energy = 0.0;
  double initial_energy = 0.0;
  int iterations = 0;
  std::vector<OptimizerTraceEntry> trace;  ///< accepted iterates, starting at iteration 0
};

/// Central-difference gradient projected onto the simplex tangent space
/// {sum delta = 0}.
std::vector<double> energy_gradient(std::span<const double> w, const DistanceTable& table,
                                    double lambda, double h);

/// Projected gradient descent from uniform weights with a backtracking
/// line search. Throws NonFinite when the energy is not finite.
OptimizerResult optimize_weights(const DistanceTable& table, const OptimizerOptions& opts = {});

OptimizerResult optimize_weights(std::span<const TrainingClass> train, DistanceKind kind,
                                 double shared_looks, const OptimizerOptions& opts = {});

/// CSV with header iteration,energy,step,w1..wM.
void write_trace_csv(std::ostream& os, const OptimizerResult& result);

}  // namespace polsar
