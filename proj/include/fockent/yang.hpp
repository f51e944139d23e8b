#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "fockent/fock_state.hpp"
#include "fockent/linalg.hpp"
#include "fockent/rdm.hpp"
#include "fockent/transform.hpp"

namespace fockent {

/// Canonical values at or below this count as zero when computing the rank.
inline constexpr double kRankThreshold = 1e-10;

/// Two-particle state written as sum_ij w(i,j) a_i^+ a_j^+ |0>, with w antisymmetric
/// (fermions) or symmetric (bosons). A unit-norm state has sum |w|^2 = 1/2.
struct CoefficientMatrix {
  Statistics statistics;
  Matrix entries;
};

inline CoefficientMatrix coefficient_matrix(const FockState& state) {
  if (state.particles() != 2)
    throw Error(ErrorKind::NotTwoParticle, "state has " + std::to_string(state.particles()) + " particles");
  const bool fermi = state.statistics() == Statistics::fermionic;
  Matrix w = Matrix::Zero(state.modes(), state.modes());
  for (const auto& [occ, f] : state.amplitudes()) {
    const auto idx = occ.mode_indices();
    const int i = idx[0];
    const int j = idx[1];
    if (i == j) {
      w(i, i) = f / std::sqrt(2.0);
    } else {
      w(i, j) = f / 2.0;
      w(j, i) = fermi ? -f / 2.0 : f / 2.0;
    }
  }
  return {state.statistics(), std::move(w)};
}

inline double symmetry_violation(const CoefficientMatrix& cm) {
  return cm.statistics == Statistics::fermionic ? max_abs(cm.entries + cm.entries.transpose())
                                                : max_abs(cm.entries - cm.entries.transpose());
}

inline void check_symmetry(const CoefficientMatrix& cm) {
  if (cm.entries.rows() != cm.entries.cols() || cm.entries.rows() < 1)
    throw Error(ErrorKind::IncompatibleStates, "coefficient matrix must be square");
  if (symmetry_violation(cm) > kSymmetryTolerance)
    throw Error(cm.statistics == Statistics::fermionic ? ErrorKind::NotAntisymmetric : ErrorKind::NotSymmetric,
                "coefficient matrix has the wrong symmetry");
}

inline FockState from_coefficient_matrix(const CoefficientMatrix& cm) {
  check_symmetry(cm);
  const bool fermi = cm.statistics == Statistics::fermionic;
  const auto m = static_cast<int>(cm.entries.rows());
  AmplitudeMap amps;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      Complex f;
      if (i == j) {
        if (fermi) continue;
        f = std::sqrt(2.0) * cm.entries(i, i);
      } else {
        f = fermi ? cm.entries(i, j) - cm.entries(j, i) : cm.entries(i, j) + cm.entries(j, i);
      }
      const std::vector<int> idx{i, j};
      amps.emplace(OccupationVector::from_mode_indices(idx, m), f);
    }
  return FockState::from_amplitudes(cm.statistics, m, 2, std::move(amps));
}

/// Canonical form under unitary congruence: U^T w U is block diagonal with 2x2 blocks
/// [[0, c_r], [-c_r, 0]] (fermions) or diagonal d_r (bosons), values descending.
struct YangForm {
  Statistics statistics;
  SingleParticleUnitary basis_change;
  std::vector<double> values;
  std::size_t rank;
};

inline Matrix canonical_matrix(const YangForm& form) {
  const int m = form.basis_change.dimension();
  Matrix c = Matrix::Zero(m, m);
  for (std::size_t r = 0; r < form.values.size(); ++r) {
    const auto k = static_cast<Eigen::Index>(r);
    if (form.statistics == Statistics::fermionic) {
      c(2 * k, 2 * k + 1) = form.values[r];
      c(2 * k + 1, 2 * k) = -form.values[r];
    } else {
      c(k, k) = form.values[r];
    }
  }
  return c;
}

/// max |U^T w U - canonical|.
inline double reconstruction_residual(const CoefficientMatrix& cm, const YangForm& form) {
  const Matrix& u = form.basis_change.matrix();
  return max_abs(u.transpose() * cm.entries * u - canonical_matrix(form));
}

namespace detail {

/// Unit eigenvector for the largest eigenvalue of the Hermitian matrix w w^+.
inline Vector top_singular_direction(const Matrix& w) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(w * w.adjoint());
  return solver.eigenvectors().col(solver.eigenvectors().cols() - 1);
}

inline Eigen::Index first_significant(const Vector& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > 1e-6 * scale) return i;
  return 0;
}

/// Completes orthonormal columns to a unitary with the standard basis vectors that have the
/// largest component outside the current span.
inline void complete_basis(std::vector<Vector>& cols, Eigen::Index m) {
  while (static_cast<Eigen::Index>(cols.size()) < m) {
    Vector best;
    double best_norm = -1.0;
    for (Eigen::Index e = 0; e < m; ++e) {
      Vector v = Vector::Unit(m, e);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& c : cols) v -= c.dot(v) * c;
      const double n = v.norm();
      if (n > best_norm + 1e-12) {
        best_norm = n;
        best = v;
      }
    }
    cols.push_back(best / best_norm);
  }
}

/// Lowest original mode index on which any of the given columns has weight.
inline Eigen::Index lowest_mode(std::initializer_list<const Vector*> cols) {
  Eigen::Index lowest = std::numeric_limits<Eigen::Index>::max();
  for (const Vector* v : cols) lowest = std::min(lowest, first_significant(*v));
  return lowest;
}

struct Block {
  double value;
  Eigen::Index lowest;
  std::vector<Vector> columns;  // columns of V, where w = V C V^T
};

/// Descending values; values within 1e-9 of each other ordered by lowest participating mode.
inline void order_blocks(std::vector<Block>& blocks) {
  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.value > b.value; });
  std::size_t start = 0;
  while (start < blocks.size()) {
    std::size_t end = start + 1;
    while (end < blocks.size() && blocks[end - 1].value - blocks[end].value <= 1e-9) ++end;
    std::stable_sort(blocks.begin() + static_cast<std::ptrdiff_t>(start), blocks.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const Block& a, const Block& b) { return a.lowest < b.lowest; });
    start = end;
  }
}

inline YangForm assemble(Statistics statistics, std::vector<Block> blocks, Eigen::Index m) {
  order_blocks(blocks);
  std::vector<Vector> cols;
  std::vector<double> values;
  for (auto& b : blocks) {
    for (auto& c : b.columns) cols.push_back(std::move(c));
    values.push_back(b.value);
  }
  const std::size_t rank = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return v > kRankThreshold; }));
  complete_basis(cols, m);
  const auto total = statistics == Statistics::fermionic ? static_cast<std::size_t>(m / 2) : static_cast<std::size_t>(m);
  values.resize(total, 0.0);
  Matrix v(m, m);
  for (Eigen::Index j = 0; j < m; ++j) v.col(j) = cols[static_cast<std::size_t>(j)];
  return {statistics, SingleParticleUnitary(v.conjugate()), std::move(values), rank};
}

// Deflation stops once the largest remaining canonical value falls below this.
inline constexpr double kDeflationFloor = 1e-13;

/// w = sum_r c_r (x_r y_r^T - y_r x_r^T) with orthonormal {x_r, y_r}.
/// x is a top eigenvector of w w^+ (eigenvalue c^2, doubly degenerate) and y = -w conj(x) / c.
inline YangForm youla(Matrix w) {
  const Eigen::Index m = w.rows();
  std::vector<Block> blocks;
  while (static_cast<Eigen::Index>(2 * blocks.size() + 2) <= m) {
    Vector x = top_singular_direction(w);
    // Phase freedom x -> e^{i t} x (y -> e^{-i t} y): make the first significant entry real positive.
    const Complex lead = x(first_significant(x));
    x *= std::conj(lead) / std::abs(lead);
    Vector wx = w * x.conjugate();
    const double c = wx.norm();
    if (c <= kDeflationFloor) break;
    Vector y = -wx / c;
    w -= c * (x * y.transpose() - y * x.transpose());
    const auto lowest = lowest_mode({&x, &y});
    blocks.push_back({c, lowest, {std::move(x), std::move(y)}});
  }
  return assemble(Statistics::fermionic, std::move(blocks), m);
}

/// w = sum_r d_r z_r z_r^T with orthonormal z_r satisfying w conj(z) = d z.
/// The antilinear map x -> w conj(x) / d is an involution on each eigenspace of w w^+;
/// its fixed points are x + T x, or i (x - T x) when that sum vanishes.
inline YangForm takagi(Matrix w) {
  const Eigen::Index m = w.rows();
  std::vector<Block> blocks;
  while (static_cast<Eigen::Index>(blocks.size()) < m) {
    const Vector x = top_singular_direction(w);
    const Vector wx = w * x.conjugate();
    const double d0 = wx.norm();
    if (d0 <= kDeflationFloor) break;
    const Vector tx = wx / d0;
    Vector z = x + tx;
    Vector alt = Complex(0.0, 1.0) * (x - tx);
    if (alt.norm() > z.norm()) z = alt;
    z.normalize();
    // Remaining freedom is z -> -z.
    const Complex lead = z(first_significant(z));
    if (lead.real() < -1e-12 || (std::abs(lead.real()) <= 1e-12 && lead.imag() < 0.0)) z = -z;
    const double d = z.dot(w * z.conjugate()).real();
    w -= d * z * z.transpose();
    const auto lowest = lowest_mode({&z});
    blocks.push_back({d, lowest, {std::move(z)}});
  }
  return assemble(Statistics::bosonic, std::move(blocks), m);
}

}  // namespace detail

inline YangForm yang_decompose(const CoefficientMatrix& cm) {
  check_symmetry(cm);
  return cm.statistics == Statistics::fermionic ? detail::youla(cm.entries) : detail::takagi(cm.entries);
}

/// One-particle matrix of the state rewritten in its Yang (fermions) or Takagi (bosons) basis.
inline DensityMatrix rho1_in_yang_basis(const FockState& state) {
  const YangForm form = yang_decompose(coefficient_matrix(state));
  return n_particle_rdm(apply_single_particle_unitary(state, form.basis_change), 1);
}

}  // namespace fockent
