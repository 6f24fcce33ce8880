#include "polsar/distances.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "polsar/error.hpp"

namespace polsar {

std::string_view to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::Euclidean: return "ED";
    case DistanceKind::Hellinger: return "HD";
    case DistanceKind::Bhattacharyya: return "BD";
    case DistanceKind::KullbackLeibler: return "KL";
  }
  return "?";
}

DistanceKind parse_distance_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "ed" || s == "euclidean") return DistanceKind::Euclidean;
  if (s == "hd" || s == "hellinger") return DistanceKind::Hellinger;
  if (s == "bd" || s == "bhattacharyya") return DistanceKind::Bhattacharyya;
  if (s == "kl" || s == "kullback-leibler") return DistanceKind::KullbackLeibler;
  throw Error(ErrorCode::InvalidArgument, "unknown distance '" + std::string(name) + "'");
}

PreparedCovariance PreparedCovariance::from(const HermitianMatrix3& sigma) {
  PreparedCovariance p;
  p.sigma = sigma;
  p.inv = inverse(sigma);
  const double det = determinant(sigma);
  if (!(det > 0.0)) throw Error(ErrorCode::SingularMatrix, "non-positive determinant");
  p.log_det = std::log(det);
  return p;
}

namespace {

double kl_prepared(const PreparedCovariance& a, const PreparedCovariance& b, double looks) {
  if (a.sigma == b.sigma) return 0.0;
  const double t = 0.5 * (trace_product(a.inv, b.sigma) + trace_product(b.inv, a.sigma));
  return std::max(0.0, looks * (t - 3.0));
}

// log of the Hellinger affinity bracket, <= 0 for the corrected form.
double hellinger_log_affinity(const PreparedCovariance& a, const PreparedCovariance& b) {
  const HermitianMatrix3 harmonic_inv = 0.5 * (a.inv + b.inv);
  const double det = determinant(harmonic_inv);
  if (!(det > 0.0)) throw Error(ErrorCode::SingularMatrix, "degenerate harmonic mean");
  return std::min(0.0, -std::log(det) - 0.5 * (a.log_det + b.log_det));
}

double hellinger_prepared(const PreparedCovariance& a, const PreparedCovariance& b, double looks,
                          HellingerForm form) {
  if (form == HellingerForm::AsPrinted) {
    const double det_sum_inv = determinant(a.inv + b.inv);
    if (!(det_sum_inv > 0.0)) throw Error(ErrorCode::SingularMatrix, "degenerate inverse sum");
    const double bracket = (1.0 / det_sum_inv) / (2.0 * std::exp(0.5 * (a.log_det + b.log_det)));
    return 1.0 - std::pow(bracket, looks);
  }
  if (a.sigma == b.sigma) return 0.0;
  return -std::expm1(looks * hellinger_log_affinity(a, b));
}

double bhattacharyya_prepared(const PreparedCovariance& a, const PreparedCovariance& b,
                              double looks) {
  if (a.sigma == b.sigma) return 0.0;
  return -looks * hellinger_log_affinity(a, b);
}

}  // namespace

double distance(DistanceKind kind, const PreparedCovariance& a, const PreparedCovariance& b,
                double looks, HellingerForm form) {
  switch (kind) {
    case DistanceKind::Euclidean: return frobenius_distance(a.sigma, b.sigma);
    case DistanceKind::Hellinger: return hellinger_prepared(a, b, looks, form);
    case DistanceKind::Bhattacharyya: return bhattacharyya_prepared(a, b, looks);
    case DistanceKind::KullbackLeibler: return kl_prepared(a, b, looks);
  }
  return 0.0;
}

double kl_distance(const HermitianMatrix3& s1, const HermitianMatrix3& s2, double looks) {
  return kl_prepared(PreparedCovariance::from(s1), PreparedCovariance::from(s2), looks);
}

double hellinger_distance(const HermitianMatrix3& s1, const HermitianMatrix3& s2, double looks,
                          HellingerForm form) {
  return hellinger_prepared(PreparedCovariance::from(s1), PreparedCovariance::from(s2), looks,
                            form);
}

double bhattacharyya_distance(const HermitianMatrix3& s1, const HermitianMatrix3& s2,
                              double looks) {
  return bhattacharyya_prepared(PreparedCovariance::from(s1), PreparedCovariance::from(s2),
                                looks);
}

double euclidean_distance(const HermitianMatrix3& s1, const HermitianMatrix3& s2) {
  return frobenius_distance(s1, s2);
}

double distance(DistanceKind kind, const HermitianMatrix3& s1, const HermitianMatrix3& s2,
                double looks) {
  if (kind == DistanceKind::Euclidean) return euclidean_distance(s1, s2);
  return distance(kind, PreparedCovariance::from(s1), PreparedCovariance::from(s2), looks);
}

}  // namespace polsar
