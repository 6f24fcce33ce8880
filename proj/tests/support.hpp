#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "polsar/grid.hpp"
#include "polsar/hermitian.hpp"
#include "polsar/random.hpp"
#include "polsar/weights.hpp"
#include "polsar/wishart.hpp"

namespace polsar::test {

/// Sum of four random outer products plus 0.1 I: positive definite and
/// moderately conditioned.
inline HermitianMatrix3 random_pd(Rng& rng) {
  std::normal_distribution<double> g;
  HermitianMatrix3 m = HermitianMatrix3::diagonal(0.1, 0.1, 0.1);
  for (int k = 0; k < 4; ++k) {
    ComplexVector3 v;
    for (auto& c : v) c = {g(rng), g(rng)};
    m += outer(v);
  }
  return m;
}

inline CovarianceField random_field(std::size_t w, std::size_t h, std::uint64_t seed) {
  Rng rng(seed);
  CovarianceField f(w, h);
  for (auto& c : f.cells()) c = random_pd(rng);
  return f;
}

inline double max_abs_diff(const HermitianMatrix3& a, const HermitianMatrix3& b) {
  double m = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

/// Three well separated classes drawn from W(sigma_m, L_m). With the
/// looks given below, class 3's mean KL distance to its own prototype
/// (shared looks 4) is 4 times that of classes 1 and 2:
/// E d = 4 [(3L/(L-3) + 3)/2 - 3] gives 1.125 at L = 7 and 4.5 at L = 4.
inline std::vector<TrainingClass> spread_training_set(std::uint64_t seed, int n = 200) {
  const HermitianMatrix3 sigma[3] = {
      HermitianMatrix3::diagonal(1.0, 0.2, 0.8),
      HermitianMatrix3(0.2, 1.0, 0.3, {0.05, 0.0}, {0.1, 0.05}, {0.0, 0.0}),
      HermitianMatrix3(2.0, 0.6, 2.5, {0.0, 0.0}, {1.2, -0.6}, {0.0, 0.1})};
  const int looks[3] = {7, 7, 4};
  std::vector<TrainingClass> train(3);
  for (int m = 0; m < 3; ++m) {
    Rng rng(derive_seed(seed, m));
    const WishartModel model(sigma[m], looks[m]);
    train[m].prototype = sigma[m];
    for (int k = 0; k < n; ++k) train[m].samples.push_back(sample(model, rng));
  }
  return train;
}

}  // namespace polsar::test
