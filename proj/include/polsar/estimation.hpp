#pragma once

#include <cstddef>
#include <span>

#include "polsar/hermitian.hpp"

namespace polsar {

/// Sufficient statistics of a Wishart sample.
struct SampleStats {
  std::size_t n = 0;
  HermitianMatrix3 mean;      ///< arithmetic mean of the sample
  double mean_log_det = 0.0;  ///< (1/n) sum_k log|Z_k|
};

/// Throws EmptySample for an empty span and InvalidObservation when a
/// matrix is not positive definite.
SampleStats compute_stats(std::span<const HermitianMatrix3> sample);

/// Maximum likelihood covariance: the sample mean. Throws EmptySample.
HermitianMatrix3 estimate_sigma(std::span<const HermitianMatrix3> sample);

/// Log-likelihood of (sigma, looks) for a sample summarized by stats.
/// Exposed for testing the estimators.
double log_likelihood(const HermitianMatrix3& sigma, double looks, const SampleStats& stats);

/// Score equation in L whose root is the ML estimate:
/// 3 log L + mean_log_det - log|mean| - psi_3^(0)(L).
/// Strictly decreasing in L.
double looks_score(double looks, const SampleStats& stats);

inline constexpr double kLooksBracketLow = 3.0 + 1e-6;
inline constexpr double kLooksBracketHigh = 1e4;

/// Root of looks_score on [kLooksBracketLow, kLooksBracketHigh] by
/// bisection followed by Newton polishing. Throws NoRoot when the score is
/// positive on the whole bracket (a sample with almost no dispersion).
double estimate_looks_ml(const SampleStats& stats);

/// Box-Snell first-order bias of the ML estimate of the number of looks.
/// Throws DomainError when psi_3^(1)(l) - 3/l <= 0 or l <= 2.
double box_snell_bias(double looks, std::size_t n);

/// Bias-corrected estimate L_ML - B(L_ML), clamped below at 3.
/// Propagates NoRoot from estimate_looks_ml.
double estimate_looks_corrected(const SampleStats& stats);

/// Full fit with the degenerate cases resolved instead of thrown.
struct WishartFit {
  HermitianMatrix3 sigma;
  double looks_ml = 0.0;
  double looks = 0.0;          ///< bias corrected
  std::size_t n = 0;
  bool no_root = false;        ///< score positive on the bracket; L_ML clamped to the top
  bool clamped_below = false;  ///< corrected value fell below 3
};

WishartFit fit_wishart(std::span<const HermitianMatrix3> sample);

}  // namespace polsar
