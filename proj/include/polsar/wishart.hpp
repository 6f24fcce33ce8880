#pragma once

#include "polsar/hermitian.hpp"
#include "polsar/random.hpp"

namespace polsar {

/// Scaled complex Wishart law W(sigma, looks) for 3x3 multilook covariance
/// matrices. Density evaluation accepts any real looks >= 3; sampling needs
/// an integer number of looks.
class WishartModel {
 public:
  /// Throws InvalidObservation when sigma is not positive definite and
  /// InvalidLooks when looks < 3 or is not finite.
  WishartModel(HermitianMatrix3 sigma, double looks);

  const HermitianMatrix3& sigma() const { return sigma_; }
  double looks() const { return looks_; }

 private:
  HermitianMatrix3 sigma_;
  double looks_;
};

/// log f(z; sigma, L) = 3L log L + (L-3) log|z| - L log|sigma|
///                      - log Gamma_3(L) - L tr(sigma^-1 z).
/// Throws InvalidObservation when z is not positive definite.
double log_density(const WishartModel& model, const HermitianMatrix3& z);

/// One circular complex Gaussian scattering vector with covariance sigma,
/// given its Cholesky factor.
ComplexVector3 sample_scattering_vector(const LowerTriangular3& factor, Rng& rng);

/// Draws Z = (1/L) sum_i s_i s_i^H with s_i ~ CN(0, sigma).
/// Throws InvalidLooks when looks is not an integer.
HermitianMatrix3 sample(const WishartModel& model, Rng& rng);

/// Same as sample() with a precomputed factor of sigma; used by the image
/// generator to avoid refactoring per pixel.
HermitianMatrix3 sample_with_factor(const LowerTriangular3& factor, int looks, Rng& rng);

}  // namespace polsar
