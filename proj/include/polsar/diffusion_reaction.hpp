#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "polsar/classifier.hpp"
#include "polsar/grid.hpp"

namespace polsar {

struct EvolutionParams {
  double alpha = 0.5;
  double dt = 0.01;
  double h = 1.0;
  int iterations = 50;
  /// Distance driving the reaction term; weighted by the prototype weights.
  DistanceKind kind = DistanceKind::KullbackLeibler;
};

/// 1 - 4 alpha dt / h^2; each diffusion update is a convex combination of
/// the pixel and its neighbours iff this is >= 0.
double stability_margin(const EvolutionParams& p);

/// Throws StabilityViolation when stability_margin < 0 and InvalidArgument
/// for alpha < 0, dt <= 0, h <= 0 or negative iterations.
void check_stability(const EvolutionParams& p);

/// One explicit five-point Laplacian step with replicated edges:
/// S' = S + alpha dt (S_e + S_w + S_n + S_s - 4 S) / h^2.
CovarianceField diffusion_step(const CovarianceField& field, const EvolutionParams& params);

/// Pulls every pixel toward its nearest weighted prototype:
/// S_new = S_mmin + exp(dt (best - runner_up)) (S - S_mmin).
/// Throws the distance error of the first failing pixel.
CovarianceField reaction_step(const CovarianceField& field, const PrototypeBank& bank, double dt);
CovarianceField reaction_step(const CovarianceField& field, const PrototypeSet& protos, double dt,
                              DistanceKind kind = DistanceKind::KullbackLeibler);

namespace serial {
CovarianceField diffusion_step(const CovarianceField& field, const EvolutionParams& params);
CovarianceField reaction_step(const CovarianceField& field, const PrototypeBank& bank, double dt);
}  // namespace serial

struct IterationMetrics {
  int iteration = 0;
  /// Mean over pixels of min_m w_m d(S, Sigma_m).
  double mean_weighted_distance = 0.0;
  /// Fraction of pixels whose nearest weighted prototype changed since the
  /// previous iteration (0 for iteration 0).
  double changed_fraction = 0.0;
};

struct EvolutionMetrics {
  std::vector<IterationMetrics> rows;  ///< iteration 0 is the input field
};

/// Nearest weighted prototype (1-based) and its weighted distance per pixel.
struct NearestMap {
  ClassMap labels;
  std::vector<double> best;
};
NearestMap nearest_prototypes(const CovarianceField& field, const PrototypeBank& bank);

struct EvolutionResult {
  CovarianceField field;
  EvolutionMetrics metrics;
};

using IterationCallback = std::function<void(int iteration, const CovarianceField& field)>;

/// Runs params.iterations rounds of diffusion_step then reaction_step.
EvolutionResult evolve(const CovarianceField& field, const PrototypeSet& protos,
                       const EvolutionParams& params, const IterationCallback& callback = {});

/// CSV with header iteration,mean_weighted_distance,changed_fraction.
void write_metrics_csv(std::ostream& os, const EvolutionMetrics& metrics);

}  // namespace polsar
