#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace fockent {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double hermiticity_violation(const Matrix& m) { return max_abs(m - m.adjoint()); }

/// Eigenvalues of a Hermitian matrix, ascending.
inline RealVector hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

/// Permanent by Ryser's formula with Gray-code updates, O(2^n n).
inline std::complex<double> permanent(const Matrix& a) {
  const auto n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  std::vector<std::complex<double>> row_sums(static_cast<std::size_t>(n), 0.0);
  std::complex<double> total = 0.0;
  std::uint64_t gray_prev = 0;
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t diff = gray ^ gray_prev;
    const int col = std::countr_zero(diff);
    const double sign = (gray & diff) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] += sign * a(i, col);
    gray_prev = gray;
    std::complex<double> prod = 1.0;
    for (const auto& s : row_sums) prod *= s;
    const int bits = std::popcount(gray);
    total += ((n - bits) % 2 ? -1.0 : 1.0) * prod;
  }
  return total;
}

/// Submatrix with the given (possibly repeated) row and column indices.
inline Matrix select(const Matrix& m, std::span<const int> rows, std::span<const int> cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
  return out;
}

}  // namespace fockent
