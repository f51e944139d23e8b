#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "fockent/first_quant.hpp"
#include "fockent/fock_state.hpp"
#include "fockent/linalg.hpp"

namespace fockent {

inline constexpr double kUnitaryTolerance = 1e-10;

/// Unitary change of single-particle basis. Creation operators transform as
///   a_i^+ = sum_j U(i,j) b_j^+,
/// so row i holds old mode i expanded over the new modes.
class SingleParticleUnitary {
 public:
  explicit SingleParticleUnitary(Matrix u) : u_(std::move(u)) {
    if (u_.rows() != u_.cols() || u_.rows() < 1)
      throw Error(ErrorKind::NotUnitary, "unitary must be a nonempty square matrix");
    const double dev = max_abs(u_.adjoint() * u_ - Matrix::Identity(u_.rows(), u_.cols()));
    if (dev > kUnitaryTolerance)
      throw Error(ErrorKind::NotUnitary, "U^+U deviates from identity by " + std::to_string(dev));
  }

  static SingleParticleUnitary identity(int modes) { return SingleParticleUnitary(Matrix::Identity(modes, modes)); }

  int dimension() const noexcept { return static_cast<int>(u_.rows()); }
  const Matrix& matrix() const noexcept { return u_; }
  SingleParticleUnitary adjoint() const { return SingleParticleUnitary(u_.adjoint()); }

 private:
  Matrix u_;
};

/// U(r,k) = exp(2 pi i r k / M) / sqrt(M).
inline SingleParticleUnitary dft_unitary(int modes) {
  if (modes < 1) throw Error(ErrorKind::IncompatibleStates, "DFT needs at least one mode");
  Matrix u(modes, modes);
  const double scale = 1.0 / std::sqrt(static_cast<double>(modes));
  for (int r = 0; r < modes; ++r)
    for (int k = 0; k < modes; ++k) {
      // r*k reduced mod M keeps the phase argument small for exactness.
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((r * k) % modes) / modes;
      u(r, k) = std::polar(scale, phase);
    }
  return SingleParticleUnitary(std::move(u));
}

/// Applying the result equals applying `first`, then `second`.
inline SingleParticleUnitary compose(const SingleParticleUnitary& first, const SingleParticleUnitary& second) {
  if (first.dimension() != second.dimension())
    throw Error(ErrorKind::IncompatibleStates, "cannot compose unitaries of different dimension");
  return SingleParticleUnitary(first.matrix() * second.matrix());
}

inline void check_dimension(const FockState& state, const SingleParticleUnitary& u) {
  if (u.dimension() != state.modes())
    throw Error(ErrorKind::IncompatibleStates, "unitary dimension " + std::to_string(u.dimension()) +
                                                   " does not match " + std::to_string(state.modes()) + " modes");
}

/// Re-expresses `state` in the new single-particle basis.
///
/// Amplitude <n'|n> of old basis state n on new basis state n' is the minor
/// det U[occ(n), occ(n')] for fermions and perm U[occ(n), occ(n')] / sqrt(prod n! prod n'!)
/// for bosons, rows and columns taken as sorted index multisets.
inline FockState apply_single_particle_unitary(const FockState& state, const SingleParticleUnitary& u) {
  check_dimension(state, u);
  const bool fermi = state.statistics() == Statistics::fermionic;
  const auto targets = enumerate_basis(state.statistics(), state.modes(), state.particles());
  std::vector<std::vector<int>> target_cols;
  target_cols.reserve(targets.size());
  for (const auto& t : targets) target_cols.push_back(t.mode_indices());

  AmplitudeMap out;
  for (const auto& [occ, f] : state.amplitudes()) {
    const auto rows = occ.mode_indices();
    const double row_norm = fermi ? 1.0 : std::sqrt(detail::occupation_factorial_product(occ));
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const Matrix sub = select(u.matrix(), rows, target_cols[t]);
      Complex c;
      if (fermi)
        c = rows.empty() ? Complex{1.0} : sub.determinant();
      else
        c = permanent(sub) / (row_norm * std::sqrt(detail::occupation_factorial_product(targets[t])));
      out[targets[t]] += c * f;
    }
  }
  return FockState::from_amplitudes(state.statistics(), state.modes(), state.particles(), std::move(out));
}

/// Same transformation computed on the first-quantized tensor:
///   q'(j_1..j_N) = sum_i q(i_1..i_N) U(i_1,j_1) ... U(i_N,j_N).
/// Subject to the dense tensor capacity limit.
inline FockState apply_single_particle_unitary_via_tensor(const FockState& state, const SingleParticleUnitary& u) {
  check_dimension(state, u);
  ProductTensor q = to_product_tensor(state);
  const auto m = static_cast<std::size_t>(state.modes());
  for (int axis = 0; axis < state.particles(); ++axis) {
    ProductTensor next(state.statistics(), state.modes(), state.particles());
    for (std::size_t f = 0; f < q.entries().size(); ++f) {
      const Complex v = q.entries()[f];
      if (v == Complex{}) continue;
      auto idx = q.multi_index(f);
      const int i = idx[static_cast<std::size_t>(axis)];
      for (std::size_t j = 0; j < m; ++j) {
        idx[static_cast<std::size_t>(axis)] = static_cast<int>(j);
        next.at(idx) += v * u.matrix()(i, static_cast<Eigen::Index>(j));
      }
    }
    q = std::move(next);
  }
  // Sub-threshold tensors (e.g. the exact zero state) have no occupation representation.
  if (q.norm_squared() == 0.0)
    return FockState::from_amplitudes(state.statistics(), state.modes(), state.particles(), {});
  return from_product_tensor(q);
}

}  // namespace fockent
