#pragma once

#include <string_view>
#include <vector>

#include "polsar/hermitian.hpp"

namespace polsar {

enum class DistanceKind { Euclidean, Hellinger, Bhattacharyya, KullbackLeibler };

std::string_view to_string(DistanceKind kind);
/// Accepts "ed"/"euclidean", "hd"/"hellinger", "bd"/"bhattacharyya",
/// "kl"/"kullback-leibler" (case-insensitive). Throws InvalidArgument.
DistanceKind parse_distance_kind(std::string_view name);

/// How the Hellinger closed form is evaluated. `Corrected` uses the
/// determinant of the harmonic mean ((S1^-1 + S2^-1)/2)^-1, which vanishes
/// for S1 == S2. `AsPrinted` takes the determinant of (S1^-1 + S2^-1)^-1
/// divided by 2 sqrt(|S1||S2|); it does not vanish on the diagonal and is
/// kept only for side-by-side comparison.
enum class HellingerForm { Corrected, AsPrinted };

/// Symmetrized Kullback-Leibler distance between W(s1, L) and W(s2, L):
/// L [ tr(s1^-1 s2 + s2^-1 s1)/2 - 3 ]. Throws SingularMatrix.
double kl_distance(const HermitianMatrix3& s1, const HermitianMatrix3& s2, double looks);

/// Hellinger distance, in [0, 1). Throws SingularMatrix.
double hellinger_distance(const HermitianMatrix3& s1, const HermitianMatrix3& s2, double looks,
                          HellingerForm form = HellingerForm::Corrected);

/// -log(1 - hellinger_distance), evaluated in log space.
double bhattacharyya_distance(const HermitianMatrix3& s1, const HermitianMatrix3& s2,
                              double looks);

/// Frobenius distance; looks play no role.
double euclidean_distance(const HermitianMatrix3& s1, const HermitianMatrix3& s2);

double distance(DistanceKind kind, const HermitianMatrix3& s1, const HermitianMatrix3& s2,
                double looks);

/// Covariance with its inverse and log-determinant cached, so that many
/// distances against the same matrix cost one factorization.
struct PreparedCovariance {
  HermitianMatrix3 sigma;
  HermitianMatrix3 inv;
  double log_det = 0.0;

  /// Throws SingularMatrix; log_det requires a positive determinant.
  static PreparedCovariance from(const HermitianMatrix3& sigma);
};

/// Same values as the free functions, from cached operands.
double distance(DistanceKind kind, const PreparedCovariance& a, const PreparedCovariance& b,
                double looks, HellingerForm form = HellingerForm::Corrected);

}  // namespace polsar
