#pragma once

#include <array>
#include <complex>

namespace polsar {

using Complex = std::complex<double>;

/// 3x3 Hermitian matrix stored as its independent entries: the real
/// diagonal and the upper off-diagonal. The lower triangle is implied by
/// conjugation, so a value of this type is Hermitian by construction.
class HermitianMatrix3 {
 public:
  HermitianMatrix3() = default;
  HermitianMatrix3(double d1, double d2, double d3, Complex o12 = {}, Complex o13 = {},
                   Complex o23 = {})
      : d_{d1, d2, d3}, o12_(o12), o13_(o13), o23_(o23) {}

  static HermitianMatrix3 identity() { return {1.0, 1.0, 1.0}; }
  static HermitianMatrix3 diagonal(double a, double b, double c) { return {a, b, c}; }

  /// Builds from the nine-value layout [C11, C22, C33, Re C12, Im C12,
  /// Re C13, Im C13, Re C23, Im C23] used by the on-disk image format.
  static HermitianMatrix3 from_packed(const std::array<double, 9>& v);
  std::array<double, 9> packed() const;

  double d1() const { return d_[0]; }
  double d2() const { return d_[1]; }
  double d3() const { return d_[2]; }
  Complex o12() const { return o12_; }
  Complex o13() const { return o13_; }
  Complex o23() const { return o23_; }

  /// Entry (row, col), zero-based.
  Complex operator()(int row, int col) const;

  bool is_finite() const;
  /// True iff all three leading principal minors are strictly positive.
  bool is_positive_definite() const;

  HermitianMatrix3& operator+=(const HermitianMatrix3& rhs);
  HermitianMatrix3& operator-=(const HermitianMatrix3& rhs);
  HermitianMatrix3& operator*=(double s);

  friend bool operator==(const HermitianMatrix3&, const HermitianMatrix3&) = default;

 private:
  std::array<double, 3> d_{};
  Complex o12_{};
  Complex o13_{};
  Complex o23_{};
};

HermitianMatrix3 operator+(HermitianMatrix3 a, const HermitianMatrix3& b);
HermitianMatrix3 operator-(HermitianMatrix3 a, const HermitianMatrix3& b);
HermitianMatrix3 operator*(double s, HermitianMatrix3 m);
HermitianMatrix3 operator*(HermitianMatrix3 m, double s);

using ComplexVector3 = std::array<Complex, 3>;

/// Dense lower-triangular factor (entries above the diagonal are zero).
struct LowerTriangular3 {
  std::array<std::array<Complex, 3>, 3> a{};

  ComplexVector3 apply(const ComplexVector3& v) const;
  /// A * A^H.
  HermitianMatrix3 gram() const;
};

/// Outer product v * v^H.
HermitianMatrix3 outer(const ComplexVector3& v);

// Tolerances used to flag degenerate pixels.
inline constexpr double kSingularDeterminant = 1e-300;
inline constexpr double kRelativePivotTolerance = 1e-12;

double determinant(const HermitianMatrix3& m);
double trace(const HermitianMatrix3& m);
/// tr(a * b), real for Hermitian a and b.
double trace_product(const HermitianMatrix3& a, const HermitianMatrix3& b);

/// True when |det| is below kSingularDeterminant or the smallest pivot of
/// the triangular factorization is below kRelativePivotTolerance times the
/// largest diagonal magnitude.
bool is_singular(const HermitianMatrix3& m);

/// Closed-form cofactor inverse. Throws Error(SingularMatrix).
HermitianMatrix3 inverse(const HermitianMatrix3& m);

/// A with A * A^H = m. Throws Error(NotPositiveDefinite).
LowerTriangular3 cholesky(const HermitianMatrix3& m);

double frobenius_norm(const HermitianMatrix3& m);
double frobenius_distance(const HermitianMatrix3& a, const HermitianMatrix3& b);

/// (1 - t) * a + t * b for t in [0, 1].
HermitianMatrix3 convex_combine(const HermitianMatrix3& a, const HermitianMatrix3& b, double t);

}  // namespace polsar
