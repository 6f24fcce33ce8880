#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "polsar/distances.hpp"
#include "polsar/error.hpp"
#include "polsar/weights.hpp"
#include "support.hpp"

using namespace polsar;

TEST(Weights, Phi) {
  EXPECT_EQ(phi(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(phi(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(phi(-2, 1), -2.0 / 3.0);
  EXPECT_DOUBLE_EQ(phi(3, 0.5), 3.0 / 2.5);
}

TEST(Weights, WeightVectorValidation) {
  EXPECT_NO_THROW(WeightVector({0.2, 0.3, 0.5}));
  EXPECT_THROW(WeightVector({0.2, 0.3, 0.6}), Error);
  EXPECT_THROW(WeightVector({-0.1, 0.6, 0.5}), Error);
  const auto u = WeightVector::uniform(4);
  for (std::size_t m = 0; m < 4; ++m) EXPECT_DOUBLE_EQ(u[m], 0.25);
}

TEST(Weights, SimplexProjection) {
  // Points already on the simplex are fixed.
  const std::vector<double> on{0.1, 0.6, 0.3};
  const auto p0 = project_to_simplex(on);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p0[i], on[i], 1e-15);
  // Hand value: (1, 1, -1) -> (0.5, 0.5, 0)
  const auto p1 = project_to_simplex(std::vector<double>{1, 1, -1});
  EXPECT_NEAR(p1[0], 0.5, 1e-15);
  EXPECT_NEAR(p1[1], 0.5, 1e-15);
  EXPECT_EQ(p1[2], 0.0);
  // Optimality: no other simplex point on a grid is closer.
  Rng rng(1);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    const std::vector<double> v{g(rng), g(rng), g(rng)};
    const auto p = project_to_simplex(v);
    ASSERT_TRUE(on_simplex(p));
    auto dist = [&](double a, double b, double c) {
      return (a - v[0]) * (a - v[0]) + (b - v[1]) * (b - v[1]) + (c - v[2]) * (c - v[2]);
    };
    const double best = dist(p[0], p[1], p[2]);
    for (int i = 0; i <= 50; ++i)
      for (int j = 0; i + j <= 50; ++j)
        EXPECT_GE(dist(i / 50.0, j / 50.0, (50 - i - j) / 50.0), best - 1e-12);
  }
}

TEST(Weights, EnergyMatchesDirectSum) {
  const auto train = test::spread_training_set(3, 30);
  const std::vector<double> w{0.2, 0.5, 0.3};
  const double lambda = 0.7;
  double want = 0.0;
  for (std::size_t m = 0; m < 3; ++m) {
    double s = 0.0;
    for (const auto& z : train[m].samples)
      for (std::size_t o = 0; o < 3; ++o)
        if (o != m)
          s += phi(w[m] * kl_distance(z, train[m].prototype, 4) -
                       w[o] * kl_distance(z, train[o].prototype, 4),
                   lambda);
    want += s / static_cast<double>(train[m].samples.size());
  }
  const DistanceTable table(train, DistanceKind::KullbackLeibler, 4.0);
  EXPECT_NEAR(energy(w, table, lambda), want, 1e-10 * std::abs(want));
  EXPECT_NEAR(energy(WeightVector(w), train, DistanceKind::KullbackLeibler, 4.0, lambda), want,
              1e-10 * std::abs(want));
}

TEST(Weights, ParallelEnergyEqualsSerial) {
  const auto train = test::spread_training_set(4, 500);
  const DistanceTable table(train, DistanceKind::KullbackLeibler, 4.0);
  const std::vector<double> w{0.3, 0.3, 0.4};
  EXPECT_EQ(energy(w, table, 1.0), serial::energy(w, table, 1.0));
}

TEST(Weights, PrototypesOnTheirOwnSamples) {
  // Each class's samples equal its prototype: self terms vanish and the
  // energy is a sum of phi(-w_o d) < 0, rising as any w_o shrinks.
  std::vector<TrainingClass> train(3);
  const HermitianMatrix3 s[3] = {HermitianMatrix3::diagonal(1, 1, 1),
                                 HermitianMatrix3::diagonal(2, 1, 1),
                                 HermitianMatrix3::diagonal(1, 3, 1)};
  for (int m = 0; m < 3; ++m) train[m] = {s[m], {s[m], s[m]}};
  const DistanceTable table(train, DistanceKind::KullbackLeibler, 4.0);
  const std::vector<double> w{0.3, 0.3, 0.4};
  const double e = energy(w, table, 1.0);
  EXPECT_LT(e, 0.0);
  for (int o = 0; o < 3; ++o) {
    auto v = w;
    v[o] -= 0.05;
    EXPECT_GT(energy(v, table, 1.0), e);
  }
}

TEST(Weights, GradientMatchesFiniteDifference) {
  const auto train = test::spread_training_set(5, 50);
  const DistanceTable table(train, DistanceKind::KullbackLeibler, 4.0);
  const std::vector<double> w{0.25, 0.35, 0.4};
  const auto g = energy_gradient(w, table, 1.0, 1e-6);
  EXPECT_NEAR(std::accumulate(g.begin(), g.end(), 0.0), 0.0, 1e-9);
  // directional derivative along a tangent direction
  const std::vector<double> d{1.0, -0.5, -0.5};
  const double h = 1e-4;
  std::vector<double> plus(3), minus(3);
  for (int i = 0; i < 3; ++i) {
    plus[i] = w[i] + h * d[i];
    minus[i] = w[i] - h * d[i];
  }
  const double fd = (energy(plus, table, 1.0) - energy(minus, table, 1.0)) / (2 * h);
  const double dir = g[0] * d[0] + g[1] * d[1] + g[2] * d[2];
  EXPECT_NEAR(dir, fd, 1e-5 * std::max(1.0, std::abs(fd)));
}

TEST(Weights, SymmetricTwoClassGradient) {
  // X -> X^-1 preserves KL and swaps the two classes.
  const HermitianMatrix3 a = 2.0 * HermitianMatrix3::identity();
  std::vector<TrainingClass> train{{a, {}}, {inverse(a), {}}};
  Rng rng(10);
  for (int k = 0; k < 20; ++k) {
    const auto z = a + 0.2 * test::random_pd(rng);
    train[0].samples.push_back(z);
    train[1].samples.push_back(inverse(z));
  }
  const DistanceTable table(train, DistanceKind::KullbackLeibler, 4.0);
  const auto g = energy_gradient(std::vector<double>{0.5, 0.5}, table, 1.0, 1e-6);
  EXPECT_NEAR(g[0] - g[1], 0.0, 1e-8);
}

TEST(Weights, IdenticalClassesStayUniform) {
  const auto one = test::spread_training_set(6, 40);
  std::vector<TrainingClass> train{one[0], one[0]};
  const auto r = optimize_weights(train, DistanceKind::KullbackLeibler, 4.0);
  EXPECT_NEAR(r.weights[0], 0.5, 1e-9);
  EXPECT_NEAR(r.weights[1], 0.5, 1e-9);
}

TEST(Weights, OptimizerDescendsOnSimplex) {
  const auto train = test::spread_training_set(7);
  const auto r = optimize_weights(train, DistanceKind::KullbackLeibler, 4.0);
  ASSERT_GE(r.trace.size(), 2u);
  EXPECT_EQ(r.trace.front().energy, r.initial_energy);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    EXPECT_TRUE(on_simplex(r.trace[i].weights));
    if (i > 0) EXPECT_LE(r.trace[i].energy, r.trace[i - 1].energy);
  }
  EXPECT_EQ(r.energy, r.trace.back().energy);
  EXPECT_LT(r.weights[2], r.weights[0]);
  EXPECT_LT(r.weights[2], r.weights[1]);
}

TEST(Weights, ValidationAndTrace) {
  std::vector<TrainingClass> one_class{{HermitianMatrix3::identity(), {HermitianMatrix3::identity()}}};
  EXPECT_THROW(validate_training_set(one_class), Error);
  std::vector<TrainingClass> empty{{HermitianMatrix3::identity(), {HermitianMatrix3::identity()}},
                                   {HermitianMatrix3::identity(), {}}};
  EXPECT_THROW(validate_training_set(empty), Error);

  const auto r = optimize_weights(test::spread_training_set(8, 30), DistanceKind::KullbackLeibler, 4.0);
  std::ostringstream os;
  write_trace_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "iteration,energy,step,w1,w2,w3");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, r.trace.size());
}
