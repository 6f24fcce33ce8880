#include "polsar/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "polsar/error.hpp"

namespace polsar {
namespace {

// Threshold above which the asymptotic series is used.
constexpr double kAsymptoticFrom = 20.0;

// B_{2k} for k = 1..10.
constexpr std::array<double, 10> kBernoulliEven = {
    1.0 / 6.0,         -1.0 / 30.0,  1.0 / 42.0,      -1.0 / 30.0,       5.0 / 66.0,
    -691.0 / 2730.0,   7.0 / 6.0,    -3617.0 / 510.0, 43867.0 / 798.0,  -174611.0 / 330.0};

double digamma_asymptotic(double x) {
  // psi(x) ~ log x - 1/(2x) - sum_k B_2k / (2k x^2k)
  const double inv2 = 1.0 / (x * x);
  double pow = inv2;
  double sum = 0.0;
  for (std::size_t k = 1; k <= 8; ++k) {
    sum += kBernoulliEven[k - 1] / (2.0 * static_cast<double>(k)) * pow;
    pow *= inv2;
  }
  return std::log(x) - 0.5 / x - sum;
}

double polygamma_asymptotic(int n, double x) {
  // psi^(n)(x) ~ (-1)^(n+1) [ (n-1)!/x^n + n!/(2 x^(n+1))
  //                           + sum_k B_2k (2k+n-1)! / ((2k)! x^(2k+n)) ]
  double fact_nm1 = 1.0;  // (n-1)!
  for (int i = 2; i < n; ++i) fact_nm1 *= i;
  const double fact_n = fact_nm1 * n;

  const double xn = std::pow(x, n);
  double sum = fact_nm1 / xn + fact_n / (2.0 * xn * x);

  // ratio (2k+n-1)!/(2k)! built incrementally.
  double ratio = fact_nm1;  // k = 0: (n-1)!/0!
  double pow = xn;
  for (std::size_t k = 1; k <= 8; ++k) {
    const double two_k = 2.0 * static_cast<double>(k);
    ratio *= (two_k + n - 2.0) * (two_k + n - 1.0) / ((two_k - 1.0) * two_k);
    pow *= x * x;
    sum += kBernoulliEven[k - 1] * ratio / pow;
  }
  return (n % 2 == 1) ? sum : -sum;
}

}  // namespace

double polygamma(int order, double x) {
  if (order < 0) throw Error(ErrorCode::DomainError, "polygamma order must be >= 0");
  if (!(x > 0.0) || !std::isfinite(x))
    throw Error(ErrorCode::DomainError, "polygamma argument must be positive, got " +
                                            std::to_string(x));

  // Upward recurrence: psi^(n)(x) = psi^(n)(x+1) - (-1)^n n! / x^(n+1).
  double fact_n = 1.0;
  for (int i = 2; i <= order; ++i) fact_n *= i;
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;

  double shift = 0.0;
  while (x < kAsymptoticFrom) {
    shift += sign * fact_n / std::pow(x, order + 1);
    x += 1.0;
  }
  const double tail = (order == 0) ? digamma_asymptotic(x) : polygamma_asymptotic(order, x);
  return tail - shift;
}

double polygamma3(int order, double l) {
  if (!(l > 2.0))
    throw Error(ErrorCode::DomainError,
                "multivariate polygamma needs l > 2, got " + std::to_string(l));
  return polygamma(order, l) + polygamma(order, l - 1.0) + polygamma(order, l - 2.0);
}

double log_multigamma3(double l) {
  if (!(l > 2.0))
    throw Error(ErrorCode::DomainError,
                "multivariate gamma needs l > 2, got " + std::to_string(l));
  return 3.0 * std::log(std::numbers::pi) + std::lgamma(l) + std::lgamma(l - 1.0) +
         std::lgamma(l - 2.0);
}

}  // namespace polsar
