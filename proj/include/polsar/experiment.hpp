#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polsar/classifier.hpp"
#include "polsar/diffusion_reaction.hpp"
#include "polsar/estimation.hpp"
#include "polsar/evaluation.hpp"
#include "polsar/key_value.hpp"
#include "polsar/phantom.hpp"
#include "polsar/roi.hpp"
#include "polsar/weights.hpp"

namespace polsar {

namespace fs = std::filesystem;

/// Fitted parameters of one class.
struct ClassModel {
  HermitianMatrix3 sigma;
  double looks = 0.0;     ///< bias corrected
  double looks_ml = 0.0;  ///< uncorrected
  std::size_t samples = 0;
  bool no_root = false;
  bool clamped_below = false;
  double weight = 0.0;
};

/// Contents of a model file.
struct TrainedModel {
  std::vector<ClassModel> classes;
  double shared_looks = 4.0;
  bool per_class_looks = false;
  std::uint64_t split_seed = 0;

  /// Weights as stored (uniform when never optimized).
  WeightVector weights() const;
  void set_weights(const WeightVector& w);
};

/// Plain-text key: value file, one block of class<m>_* keys per class.
/// Doubles use %.17g so a write/read cycle is exact.
void write_model(const TrainedModel& model, std::ostream& os);
void write_model(const TrainedModel& model, const fs::path& path);
/// Throws InvalidSpec for a malformed file.
TrainedModel read_model(const fs::path& path);
TrainedModel parse_model(std::istream& is);

PrototypeSet to_prototypes(const TrainedModel& model,
                           HellingerForm form = HellingerForm::Corrected);

/// Fits every class on the train half of `split`. An empty class throws
/// EmptySample naming the class; estimation errors are re-thrown with the
/// class number prepended.
TrainedModel train_model(const CovarianceField& field, const Split& split, double shared_looks,
                         bool per_class_looks);

/// Training samples grouped by class with the model's covariances as
/// prototypes, as consumed by the weight optimizer.
std::vector<TrainingClass> training_set(const CovarianceField& field, const Split& split,
                                        const TrainedModel& model);

/// Looks used for the training distances: shared or per class.
std::vector<double> training_looks(const TrainedModel& model);

/// Pipeline settings. Phantom keys (width, height, seed, looks, classes,
/// class<m>_*) are read from the same file when no image is given.
struct ExperimentConfig {
  std::optional<fs::path> image;  ///< covariance data; header at image + ".hdr"
  std::optional<fs::path> roi;
  std::optional<fs::path> truth;  ///< optional ground-truth class map
  PhantomSpec phantom = default_phantom_spec();
  fs::path out = "polsar_out";
  std::vector<Rule> rules{Rule::ML, Rule::ED, Rule::HD, Rule::KL, Rule::KLOW};
  EvolutionParams evolution;
  double lambda = 1.0;
  std::uint64_t split_seed = 1;
  double shared_looks = 4.0;
  bool per_class_looks = false;
  HellingerForm hellinger_form = HellingerForm::Corrected;
  /// Iterations at which the evolving field is rendered; the final
  /// iteration is always rendered.
  std::vector<int> snapshots{25, 50};

  /// Throws InvalidSpec for unknown keys or bad values and
  /// StabilityViolation for alpha dt / h^2 > 1/4.
  static ExperimentConfig from(const KeyValues& kv);
  static ExperimentConfig load(const fs::path& path);
};

/// Name of the evolved-then-classified method, e.g. "DR+KL+OW+50".
std::string evolution_method_name(int iterations);

struct StageTime {
  std::string stage;
  double seconds = 0.0;
};

struct PipelineResult {
  TrainedModel model;
  OptimizerResult weights;
  EvolutionMetrics metrics;
  std::vector<std::pair<std::string, ClassMap>> maps;  ///< per method, report order
  AccuracyReport report;                               ///< test pixels
  std::optional<AccuracyReport> truth_report;          ///< every pixel, when truth is known
  std::vector<StageTime> stages;
};

/// simulate (when no image) -> train -> weights -> classify each rule ->
/// evolve + classify -> evaluate -> render. Writes every artifact under
/// config.out. Failures are re-thrown as Error with the stage name
/// prepended. `log` receives progress lines when non-null.
PipelineResult run_pipeline(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Runs `body`, re-throwing any failure as "<stage>: <message>" with the
/// original error code (InvalidArgument for foreign exceptions).
template <typename F>
auto run_stage(const std::string& stage, F&& body) -> decltype(body());

}  // namespace polsar

#include "polsar/detail/run_stage.hpp"
