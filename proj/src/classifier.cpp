#include "polsar/classifier.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "polsar/error.hpp"
#include "polsar/special_functions.hpp"

namespace polsar {

void PrototypeSet::validate() const {
  if (models.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two prototypes");
  if (models.size() > 255) throw Error(ErrorCode::InvalidArgument, "at most 255 classes");
  if (weights.size() != models.size())
    throw Error(ErrorCode::InvalidArgument, "weight count does not match prototype count");
  if (!(shared_looks > 0.0)) throw Error(ErrorCode::InvalidArgument, "shared looks must be > 0");
}

PrototypeSet make_prototypes(std::vector<WishartModel> models, double shared_looks) {
  PrototypeSet p;
  p.weights = WeightVector::uniform(models.size());
  p.models = std::move(models);
  p.shared_looks = shared_looks;
  return p;
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::ML: return "ML";
    case Rule::ED: return "ED";
    case Rule::HD: return "HD";
    case Rule::KL: return "KL";
    case Rule::KLOW: return "KL+OW";
  }
  return "?";
}

Rule parse_rule(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "ml") return Rule::ML;
  if (s == "ed") return Rule::ED;
  if (s == "hd") return Rule::HD;
  if (s == "kl") return Rule::KL;
  if (s == "kl+ow" || s == "klow" || s == "kl-ow") return Rule::KLOW;
  throw Error(ErrorCode::InvalidArgument, "unknown rule '" + std::string(name) + "'");
}

PrototypeBank::PrototypeBank(const PrototypeSet& protos, DistanceKind kind, bool weighted)
    : kind_(kind), form_(protos.hellinger_form) {
  protos.validate();
  for (std::size_t m = 0; m < protos.classes(); ++m) {
    prepared_.push_back(PreparedCovariance::from(protos.models[m].sigma()));
    weights_.push_back(weighted ? protos.weights[m] : 1.0);
    looks_.push_back(protos.looks_for(m));
  }
}

void PrototypeBank::scores(const HermitianMatrix3& x, std::span<double> out) const {
  if (kind_ == DistanceKind::Euclidean) {
    for (std::size_t m = 0; m < prepared_.size(); ++m)
      out[m] = weights_[m] * frobenius_distance(x, prepared_[m].sigma);
  } else {
    const auto px = PreparedCovariance::from(x);
    for (std::size_t m = 0; m < prepared_.size(); ++m)
      out[m] = weights_[m] * distance(kind_, px, prepared_[m], looks_[m], form_);
  }
  for (std::size_t m = 0; m < prepared_.size(); ++m)
    if (!std::isfinite(out[m])) throw Error(ErrorCode::NonFinite, "non-finite distance");
}

Nearest PrototypeBank::nearest(const HermitianMatrix3& x) const {
  std::array<double, 256> buf;
  const std::span<double> s(buf.data(), prepared_.size());
  scores(x, s);
  Nearest n;
  n.index = 0;
  n.best = s[0];
  for (std::size_t m = 1; m < s.size(); ++m)
    if (s[m] < n.best) {
      n.best = s[m];
      n.index = m;
    }
  n.runner_up = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < s.size(); ++m)
    if (m != n.index) n.runner_up = std::min(n.runner_up, s[m]);
  return n;
}

PixelClassifier::PixelClassifier(const PrototypeSet& protos, Rule rule)
    : rule_(rule), classes_(protos.classes()) {
  protos.validate();
  switch (rule) {
    case Rule::ML:
      for (std::size_t m = 0; m < protos.classes(); ++m) {
        const double l = protos.looks_for(m);
        if (!(l > 2.0)) throw Error(ErrorCode::InvalidLooks, "ML rule needs looks > 2");
        const auto& sigma = protos.models[m].sigma();
        likelihood_.push_back({inverse(sigma), l,
                               3.0 * l * std::log(l) - l * std::log(determinant(sigma)) -
                                   log_multigamma3(l)});
      }
      break;
    case Rule::ED: bank_.emplace_back(protos, DistanceKind::Euclidean, false); break;
    case Rule::HD: bank_.emplace_back(protos, DistanceKind::Hellinger, false); break;
    case Rule::KL: bank_.emplace_back(protos, DistanceKind::KullbackLeibler, false); break;
    case Rule::KLOW: bank_.emplace_back(protos, DistanceKind::KullbackLeibler, true); break;
  }
}

std::size_t PixelClassifier::classify(const HermitianMatrix3& x) const {
  if (rule_ != Rule::ML) return bank_.front().nearest(x).index + 1;

  if (!x.is_positive_definite())
    throw Error(ErrorCode::InvalidObservation, "observation is not positive definite");
  const double log_det = std::log(determinant(x));
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < likelihood_.size(); ++m) {
    const auto& t = likelihood_[m];
    const double v =
        t.constant + (t.looks - 3.0) * log_det - t.looks * trace_product(t.sigma_inv, x);
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite log-density");
    if (v > best_value) {
      best_value = v;
      best = m;
    }
  }
  return best + 1;
}

std::size_t classify_pixel(const HermitianMatrix3& x, const PrototypeSet& protos, Rule rule) {
  return PixelClassifier(protos, rule).classify(x);
}

namespace {

// Classifies one row; pixels that throw are flagged in `failed`.
void classify_row(const CovarianceField& field, const PixelClassifier& c, std::size_t y,
                  ClassMap& labels, std::vector<std::uint8_t>& failed) {
  for (std::size_t x = 0; x < field.width(); ++x) {
    const std::size_t i = y * field.width() + x;
    try {
      labels[i] = static_cast<std::uint8_t>(c.classify(field[i]));
    } catch (const Error&) {
      labels[i] = kUnclassified;
      failed[i] = 1;
    }
  }
}

ClassificationResult collect(ClassMap labels, const std::vector<std::uint8_t>& failed) {
  ClassificationResult r;
  r.labels = std::move(labels);
  for (std::size_t i = 0; i < failed.size(); ++i)
    if (failed[i]) r.failed_pixels.push_back(i);
  return r;
}

}  // namespace

ClassificationResult classify_image(const CovarianceField& field, const PrototypeSet& protos,
                                    Rule rule) {
  const PixelClassifier c(protos, rule);
  ClassMap labels(field.width(), field.height(), kUnclassified);
  std::vector<std::uint8_t> failed(field.size(), 0);
  const auto rows = static_cast<std::ptrdiff_t>(field.height());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t y = 0; y < rows; ++y)
    classify_row(field, c, static_cast<std::size_t>(y), labels, failed);
  return collect(std::move(labels), failed);
}

namespace serial {
ClassificationResult classify_image(const CovarianceField& field, const PrototypeSet& protos,
                                    Rule rule) {
  const PixelClassifier c(protos, rule);
  ClassMap labels(field.width(), field.height(), kUnclassified);
  std::vector<std::uint8_t> failed(field.size(), 0);
  for (std::size_t y = 0; y < field.height(); ++y) classify_row(field, c, y, labels, failed);
  return collect(std::move(labels), failed);
}
}  // namespace serial

}  // namespace polsar
