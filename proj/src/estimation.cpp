#include "polsar/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "polsar/error.hpp"
#include "polsar/special_functions.hpp"

namespace polsar {

SampleStats compute_stats(std::span<const HermitianMatrix3> sample) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "sample is empty");
  SampleStats s;
  s.n = sample.size();
  HermitianMatrix3 sum(0.0, 0.0, 0.0);
  double log_det_sum = 0.0;
  for (const auto& z : sample) {
    if (!z.is_positive_definite())
      throw Error(ErrorCode::InvalidObservation, "sample matrix is not positive definite");
    sum += z;
    log_det_sum += std::log(determinant(z));
  }
  const double inv_n = 1.0 / static_cast<double>(s.n);
  s.mean = sum * inv_n;
  s.mean_log_det = log_det_sum * inv_n;
  return s;
}

HermitianMatrix3 estimate_sigma(std::span<const HermitianMatrix3> sample) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "sample is empty");
  HermitianMatrix3 sum(0.0, 0.0, 0.0);
  for (const auto& z : sample) sum += z;
  return sum * (1.0 / static_cast<double>(sample.size()));
}

double log_likelihood(const HermitianMatrix3& sigma, double looks, const SampleStats& stats) {
  const double n = static_cast<double>(stats.n);
  const double l = looks;
  return 3.0 * n * l * std::log(l) + (l - 3.0) * n * stats.mean_log_det -
         l * n * std::log(determinant(sigma)) - n * log_multigamma3(l) -
         n * l * trace_product(inverse(sigma), stats.mean);
}

double looks_score(double looks, const SampleStats& stats) {
  return 3.0 * std::log(looks) + stats.mean_log_det - std::log(determinant(stats.mean)) -
         polygamma3(0, looks);
}

double estimate_looks_ml(const SampleStats& stats) {
  double lo = kLooksBracketLow;
  double hi = kLooksBracketHigh;
  if (looks_score(hi, stats) > 0.0)
    throw Error(ErrorCode::NoRoot, "looks score is positive on the whole search bracket");

  // score(lo) > 0 always: psi_3^(0) diverges to -inf as L -> 2.
  while (hi - lo > 1e-6 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (looks_score(mid, stats) > 0.0)
      lo = mid;
    else
      hi = mid;
  }

  double l = 0.5 * (lo + hi);
  for (int it = 0; it < 20; ++it) {
    const double f = looks_score(l, stats);
    const double df = 3.0 / l - polygamma3(1, l);
    double next = l - f / df;
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (looks_score(next, stats) > 0.0)
      lo = next;
    else
      hi = next;
    const bool converged = std::abs(next - l) < 1e-12 * std::max(1.0, l);
    l = next;
    if (converged) break;
  }
  return l;
}

double box_snell_bias(double looks, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::DomainError, "sample size must be >= 1");
  const double l = looks;
  const double denom = polygamma3(1, l) - 3.0 / l;
  if (!(denom > 0.0))
    throw Error(ErrorCode::DomainError,
                "Box-Snell bias undefined at L = " + std::to_string(l));
  const double nn = static_cast<double>(n);
  return 9.0 / (2.0 * nn * l * denom) - (3.0 / (2.0 * l) + polygamma3(2, l)) / (2.0 * nn * denom);
}

double estimate_looks_corrected(const SampleStats& stats) {
  const double ml = estimate_looks_ml(stats);
  return std::max(3.0, ml - box_snell_bias(ml, stats.n));
}

WishartFit fit_wishart(std::span<const HermitianMatrix3> sample) {
  const SampleStats stats = compute_stats(sample);
  WishartFit fit;
  fit.sigma = stats.mean;
  fit.n = stats.n;
  try {
    fit.looks_ml = estimate_looks_ml(stats);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoRoot) throw;
    fit.looks_ml = kLooksBracketHigh;
    fit.no_root = true;
  }
  const double corrected = fit.looks_ml - box_snell_bias(fit.looks_ml, stats.n);
  fit.clamped_below = corrected < 3.0;
  fit.looks = fit.clamped_below ? 3.0 : corrected;
  return fit;
}

}  // namespace polsar
