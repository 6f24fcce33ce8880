#include "polsar/wishart.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "polsar/error.hpp"
#include "polsar/special_functions.hpp"

namespace polsar {

WishartModel::WishartModel(HermitianMatrix3 sigma, double looks) : sigma_(sigma), looks_(looks) {
  if (!sigma_.is_positive_definite())
    throw Error(ErrorCode::InvalidObservation, "Wishart covariance must be positive definite");
  if (!std::isfinite(looks_) || looks_ < 3.0)
    throw Error(ErrorCode::InvalidLooks,
                "number of looks must be >= 3, got " + std::to_string(looks_));
}

double log_density(const WishartModel& model, const HermitianMatrix3& z) {
  if (!z.is_positive_definite())
    throw Error(ErrorCode::InvalidObservation, "observation is not positive definite");
  const double l = model.looks();
  const HermitianMatrix3 sigma_inv = inverse(model.sigma());
  return 3.0 * l * std::log(l) + (l - 3.0) * std::log(determinant(z)) -
         l * std::log(determinant(model.sigma())) - log_multigamma3(l) -
         l * trace_product(sigma_inv, z);
}

ComplexVector3 sample_scattering_vector(const LowerTriangular3& factor, Rng& rng) {
  // Real and imaginary parts each carry half of the unit variance.
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
  ComplexVector3 u;
  for (auto& c : u) {
    const double re = normal(rng);
    const double im = normal(rng);
    c = {re, im};
  }
  return factor.apply(u);
}

HermitianMatrix3 sample_with_factor(const LowerTriangular3& factor, int looks, Rng& rng) {
  if (looks < 3)
    throw Error(ErrorCode::InvalidLooks,
                "sampling needs an integer number of looks >= 3, got " + std::to_string(looks));
  HermitianMatrix3 acc(0.0, 0.0, 0.0);
  for (int i = 0; i < looks; ++i) acc += outer(sample_scattering_vector(factor, rng));
  return acc * (1.0 / looks);
}

HermitianMatrix3 sample(const WishartModel& model, Rng& rng) {
  const double l = model.looks();
  if (l != std::floor(l))
    throw Error(ErrorCode::InvalidLooks,
                "sampling needs an integer number of looks, got " + std::to_string(l));
  return sample_with_factor(cholesky(model.sigma()), static_cast<int>(l), rng);
}

}  // namespace polsar
