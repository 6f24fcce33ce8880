#include "polsar/hermitian.hpp"

#include <algorithm>
#include <cmath>

#include "polsar/error.hpp"

namespace polsar {

HermitianMatrix3 HermitianMatrix3::from_packed(const std::array<double, 9>& v) {
  return {v[0], v[1], v[2], {v[3], v[4]}, {v[5], v[6]}, {v[7], v[8]}};
}

std::array<double, 9> HermitianMatrix3::packed() const {
  return {d_[0],       d_[1],       d_[2],       o12_.real(), o12_.imag(),
          o13_.real(), o13_.imag(), o23_.real(), o23_.imag()};
}

Complex HermitianMatrix3::operator()(int row, int col) const {
  if (row == col) return d_[static_cast<std::size_t>(row)];
  const bool upper = row < col;
  const int lo = std::min(row, col);
  const int hi = std::max(row, col);
  Complex v = (lo == 0) ? (hi == 1 ? o12_ : o13_) : o23_;
  return upper ? v : std::conj(v);
}

bool HermitianMatrix3::is_finite() const {
  for (double x : packed())
    if (!std::isfinite(x)) return false;
  return true;
}

bool HermitianMatrix3::is_positive_definite() const {
  if (!is_finite()) return false;
  const double minor1 = d_[0];
  const double minor2 = d_[0] * d_[1] - std::norm(o12_);
  return minor1 > 0.0 && minor2 > 0.0 && determinant(*this) > 0.0;
}

HermitianMatrix3& HermitianMatrix3::operator+=(const HermitianMatrix3& rhs) {
  for (std::size_t i = 0; i < 3; ++i) d_[i] += rhs.d_[i];
  o12_ += rhs.o12_;
  o13_ += rhs.o13_;
  o23_ += rhs.o23_;
  return *this;
}

HermitianMatrix3& HermitianMatrix3::operator-=(const HermitianMatrix3& rhs) {
  for (std::size_t i = 0; i < 3; ++i) d_[i] -= rhs.d_[i];
  o12_ -= rhs.o12_;
  o13_ -= rhs.o13_;
  o23_ -= rhs.o23_;
  return *this;
}

HermitianMatrix3& HermitianMatrix3::operator*=(double s) {
  for (double& x : d_) x *= s;
  o12_ *= s;
  o13_ *= s;
  o23_ *= s;
  return *this;
}

HermitianMatrix3 operator+(HermitianMatrix3 a, const HermitianMatrix3& b) { return a += b; }
HermitianMatrix3 operator-(HermitianMatrix3 a, const HermitianMatrix3& b) { return a -= b; }
HermitianMatrix3 operator*(double s, HermitianMatrix3 m) { return m *= s; }
HermitianMatrix3 operator*(HermitianMatrix3 m, double s) { return m *= s; }

ComplexVector3 LowerTriangular3::apply(const ComplexVector3& v) const {
  ComplexVector3 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j <= i; ++j) out[i] += a[i][j] * v[j];
  return out;
}

HermitianMatrix3 LowerTriangular3::gram() const {
  // (A A^H)_{ij} = sum_k A_ik conj(A_jk), k <= min(i, j)
  auto entry = [this](std::size_t i, std::size_t j) {
    Complex s{};
    for (std::size_t k = 0; k <= std::min(i, j); ++k) s += a[i][k] * std::conj(a[j][k]);
    return s;
  };
  return {entry(0, 0).real(), entry(1, 1).real(), entry(2, 2).real(),
          entry(0, 1),        entry(0, 2),        entry(1, 2)};
}

HermitianMatrix3 outer(const ComplexVector3& v) {
  return {std::norm(v[0]),           std::norm(v[1]),           std::norm(v[2]),
          v[0] * std::conj(v[1]), v[0] * std::conj(v[2]), v[1] * std::conj(v[2])};
}

double determinant(const HermitianMatrix3& m) {
  const double a = m.d1(), b = m.d2(), c = m.d3();
  const Complex x = m.o12(), y = m.o13(), z = m.o23();
  return a * b * c + 2.0 * (x * z * std::conj(y)).real() - a * std::norm(z) - b * std::norm(y) -
         c * std::norm(x);
}

double trace(const HermitianMatrix3& m) { return m.d1() + m.d2() + m.d3(); }

double trace_product(const HermitianMatrix3& a, const HermitianMatrix3& b) {
  // sum_ij a_ij b_ji; each off-diagonal pair contributes 2 Re(a_ij conj(b_ij)).
  const double diag = a.d1() * b.d1() + a.d2() * b.d2() + a.d3() * b.d3();
  const Complex off = a.o12() * std::conj(b.o12()) + a.o13() * std::conj(b.o13()) +
                      a.o23() * std::conj(b.o23());
  return diag + 2.0 * off.real();
}

bool is_singular(const HermitianMatrix3& m) {
  const double det = determinant(m);
  if (!std::isfinite(det) || std::abs(det) < kSingularDeterminant) return true;
  const double minor1 = m.d1();
  const double minor2 = m.d1() * m.d2() - std::norm(m.o12());
  if (minor1 == 0.0 || minor2 == 0.0) return true;
  const double largest = std::max({std::abs(m.d1()), std::abs(m.d2()), std::abs(m.d3())});
  const double smallest_pivot =
      std::min({std::abs(minor1), std::abs(minor2 / minor1), std::abs(det / minor2)});
  return smallest_pivot < kRelativePivotTolerance * largest;
}

HermitianMatrix3 inverse(const HermitianMatrix3& m) {
  if (is_singular(m)) throw Error(ErrorCode::SingularMatrix, "matrix is singular to tolerance");
  const double det = determinant(m);
  const double a = m.d1(), b = m.d2(), c = m.d3();
  const Complex x = m.o12(), y = m.o13(), z = m.o23();
  const double r = 1.0 / det;
  return {(b * c - std::norm(z)) * r,
          (a * c - std::norm(y)) * r,
          (a * b - std::norm(x)) * r,
          (y * std::conj(z) - x * c) * r,
          (x * z - b * y) * r,
          (std::conj(x) * y - a * z) * r};
}

LowerTriangular3 cholesky(const HermitianMatrix3& m) {
  const double largest = std::max({std::abs(m.d1()), std::abs(m.d2()), std::abs(m.d3())});
  const double floor = kRelativePivotTolerance * largest;
  auto pivot = [&](double v) {
    if (!std::isfinite(v) || v <= floor || largest == 0.0)
      throw Error(ErrorCode::NotPositiveDefinite, "non-positive Cholesky pivot");
    return std::sqrt(v);
  };

  LowerTriangular3 f;
  auto& l = f.a;
  l[0][0] = pivot(m.d1());
  l[1][0] = std::conj(m.o12()) / l[0][0];
  l[2][0] = std::conj(m.o13()) / l[0][0];
  l[1][1] = pivot(m.d2() - std::norm(l[1][0]));
  l[2][1] = (std::conj(m.o23()) - l[2][0] * std::conj(l[1][0])) / l[1][1];
  l[2][2] = pivot(m.d3() - std::norm(l[2][0]) - std::norm(l[2][1]));
  return f;
}

double frobenius_norm(const HermitianMatrix3& m) {
  const double diag = m.d1() * m.d1() + m.d2() * m.d2() + m.d3() * m.d3();
  const double off = std::norm(m.o12()) + std::norm(m.o13()) + std::norm(m.o23());
  return std::sqrt(diag + 2.0 * off);
}

double frobenius_distance(const HermitianMatrix3& a, const HermitianMatrix3& b) {
  return frobenius_norm(a - b);
}

HermitianMatrix3 convex_combine(const HermitianMatrix3& a, const HermitianMatrix3& b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  return (1.0 - t) * a + t * b;
}

}  // namespace polsar
