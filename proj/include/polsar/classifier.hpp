#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "polsar/distances.hpp"
#include "polsar/grid.hpp"
#include "polsar/weights.hpp"
#include "polsar/wishart.hpp"

namespace polsar {

/// Class prototypes (Sigma_m, L_m) with their weights.
struct PrototypeSet {
  std::vector<WishartModel> models;
  WeightVector weights;
  /// Looks used for every class unless per_class_looks is set.
  double shared_looks = 4.0;
  bool per_class_looks = false;
  HellingerForm hellinger_form = HellingerForm::Corrected;

  std::size_t classes() const { return models.size(); }
  double looks_for(std::size_t m) const {
    return per_class_looks ? models[m].looks() : shared_looks;
  }
  /// Throws InvalidArgument when M < 2, weights do not match, or
  /// shared_looks is not positive.
  void validate() const;
};

/// Builds a set with uniform weights.
PrototypeSet make_prototypes(std::vector<WishartModel> models, double shared_looks);

enum class Rule { ML, ED, HD, KL, KLOW };

std::string_view to_string(Rule rule);
/// "ml", "ed", "hd", "kl", "kl+ow" (also "klow"), case-insensitive.
Rule parse_rule(std::string_view name);

/// Index and score of the two smallest weighted distances.
struct Nearest {
  std::size_t index = 0;  ///< zero-based m_min, ties to the lowest index
  double best = 0.0;
  double runner_up = 0.0;  ///< min over m != index
};

/// Prototypes prepared for repeated weighted-distance queries
/// w_m * d(x, Sigma_m). With `weighted` false all weights are taken as 1.
class PrototypeBank {
 public:
  PrototypeBank(const PrototypeSet& protos, DistanceKind kind, bool weighted);

  std::size_t classes() const { return prepared_.size(); }
  DistanceKind kind() const { return kind_; }
  const HermitianMatrix3& sigma(std::size_t m) const { return prepared_[m].sigma; }

  /// out[m] = w_m d(x, Sigma_m). Throws SingularMatrix or NonFinite.
  void scores(const HermitianMatrix3& x, std::span<double> out) const;
  Nearest nearest(const HermitianMatrix3& x) const;

 private:
  DistanceKind kind_;
  HellingerForm form_;
  std::vector<PreparedCovariance> prepared_;
  std::vector<double> weights_;
  std::vector<double> looks_;
};

/// Pointwise classifier for one rule. Labels are 1-based.
class PixelClassifier {
 public:
  PixelClassifier(const PrototypeSet& protos, Rule rule);

  Rule rule() const { return rule_; }
  std::size_t classes() const { return classes_; }
  std::size_t classify(const HermitianMatrix3& x) const;

 private:
  struct LikelihoodTerms {
    HermitianMatrix3 sigma_inv;
    double looks;
    double constant;  // 3L log L - L log|Sigma| - log Gamma_3(L)
  };

  Rule rule_;
  std::size_t classes_;
  std::vector<PrototypeBank> bank_;  // empty for ML
  std::vector<LikelihoodTerms> likelihood_;
};

/// argmax log-density (ML) or argmin (weighted) distance; 1-based label.
std::size_t classify_pixel(const HermitianMatrix3& x, const PrototypeSet& protos, Rule rule);

struct ClassificationResult {
  ClassMap labels;
  std::vector<std::size_t> failed_pixels;  ///< labelled kUnclassified
};

/// Applies classify_pixel to every pixel (OpenMP over rows).
ClassificationResult classify_image(const CovarianceField& field, const PrototypeSet& protos,
                                    Rule rule);

namespace serial {
ClassificationResult classify_image(const CovarianceField& field, const PrototypeSet& protos,
                                    Rule rule);
}

}  // namespace polsar
