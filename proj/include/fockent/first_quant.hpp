#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "fockent/fock_state.hpp"

namespace fockent {

/// Largest dense first-quantized tensor we are willing to allocate (M^N entries).
inline constexpr std::size_t kMaxTensorEntries = 1'000'000;
/// Tolerance for the (anti)symmetry check on input tensors.
inline constexpr double kSymmetryTolerance = 1e-10;

namespace detail {

inline std::size_t checked_tensor_size(int modes, int particles) {
  if (modes < 1 || particles < 0)
    throw Error(ErrorKind::IncompatibleStates, "tensor needs at least one mode and nonnegative rank");
  std::size_t size = 1;
  for (int i = 0; i < particles; ++i) {
    size *= static_cast<std::size_t>(modes);
    if (size > kMaxTensorEntries)
      throw Error(ErrorKind::CapacityExceeded, std::to_string(modes) + "^" + std::to_string(particles) +
                                                   " tensor entries exceed the dense limit");
  }
  return size;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Parity of the permutation that sorts `seq` ascending (inversion count).
inline int sort_parity(std::span<const int> seq) {
  int inv = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

inline double occupation_factorial_product(const OccupationVector& occ) {
  double p = 1.0;
  for (int n : occ) p *= factorial(n);
  return p;
}

}  // namespace detail

/// Dense rank-N coefficient tensor q(k_1,...,k_N) over the product basis |k_1>...|k_N>.
/// Entries are stored row-major with k_1 most significant.
class ProductTensor {
 public:
  ProductTensor(Statistics statistics, int modes, int particles)
      : statistics_(statistics),
        modes_(modes),
        particles_(particles),
        entries_(detail::checked_tensor_size(modes, particles)) {}

  Statistics statistics() const noexcept { return statistics_; }
  int modes() const noexcept { return modes_; }
  int particles() const noexcept { return particles_; }
  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  std::size_t flat_index(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int k : idx) f = f * static_cast<std::size_t>(modes_) + static_cast<std::size_t>(k);
    return f;
  }

  std::vector<int> multi_index(std::size_t flat) const {
    std::vector<int> idx(static_cast<std::size_t>(particles_));
    for (int i = particles_ - 1; i >= 0; --i) {
      idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(modes_));
      flat /= static_cast<std::size_t>(modes_);
    }
    return idx;
  }

  Complex at(std::span<const int> idx) const { return entries_[flat_index(idx)]; }
  Complex& at(std::span<const int> idx) { return entries_[flat_index(idx)]; }
  Complex at(std::initializer_list<int> idx) const { return at(std::span<const int>(idx.begin(), idx.size())); }
  Complex& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& q : entries_) s += std::norm(q);
    return s;
  }

 private:
  Statistics statistics_;
  int modes_;
  int particles_;
  std::vector<Complex> entries_;
};

/// Largest deviation from q(..ki..kj..) = +-q(..kj..ki..) over adjacent transpositions.
inline double symmetry_violation(const ProductTensor& t) {
  const double sign = t.statistics() == Statistics::fermionic ? -1.0 : 1.0;
  double worst = 0.0;
  const auto entries = t.entries();
  for (std::size_t f = 0; f < entries.size(); ++f) {
    auto idx = t.multi_index(f);
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
      std::swap(idx[i], idx[i + 1]);
      worst = std::max(worst, std::abs(entries[f] - sign * t.at(idx)));
      std::swap(idx[i], idx[i + 1]);
    }
  }
  return worst;
}

/// Projects a raw tensor onto the (anti)symmetric subspace: (1/N!) sum_P (+-1)^P P(raw).
inline ProductTensor symmetrize(const ProductTensor& raw, Statistics statistics) {
  ProductTensor out(statistics, raw.modes(), raw.particles());
  const auto n = static_cast<std::size_t>(raw.particles());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const double inv_count = 1.0 / detail::factorial(raw.particles());
  std::vector<int> src(n);
  do {
    const double sign =
        statistics == Statistics::fermionic ? static_cast<double>(detail::sort_parity(perm)) : 1.0;
    for (std::size_t f = 0; f < raw.entries().size(); ++f) {
      const auto idx = out.multi_index(f);
      for (std::size_t i = 0; i < n; ++i) src[i] = idx[static_cast<std::size_t>(perm[i])];
      out.entries()[f] += sign * inv_count * raw.at(src);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// q(k) = sign(k) * sqrt(prod n! / N!) * f(occ(k)), sign the sorting parity for fermions.
inline ProductTensor to_product_tensor(const FockState& state) {
  ProductTensor out(state.statistics(), state.modes(), state.particles());
  const double nfact = detail::factorial(state.particles());
  const bool fermi = state.statistics() == Statistics::fermionic;
  for (const auto& [occ, f] : state.amplitudes()) {
    const Complex c = f * std::sqrt(detail::occupation_factorial_product(occ) / nfact);
    auto idx = occ.mode_indices();
    // next_permutation over the sorted multiset visits each distinct ordering once.
    do {
      const double sign = fermi ? static_cast<double>(detail::sort_parity(idx)) : 1.0;
      out.at(idx) = sign * c;
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  return out;
}

inline FockState from_product_tensor(const ProductTensor& tensor) {
  const double violation = symmetry_violation(tensor);
  if (violation > kSymmetryTolerance)
    throw Error(ErrorKind::NotSymmetric,
                "tensor is not " +
                    std::string(tensor.statistics() == Statistics::fermionic ? "antisymmetric" : "symmetric") +
                    " (violation " + std::to_string(violation) + ")");
  const double nfact = detail::factorial(tensor.particles());
  std::vector<std::pair<OccupationVector, Complex>> terms;
  for (const auto& occ : enumerate_basis(tensor.statistics(), tensor.modes(), tensor.particles())) {
    const auto idx = occ.mode_indices();
    const Complex f = tensor.at(idx) * std::sqrt(nfact / detail::occupation_factorial_product(occ));
    if (std::abs(f) >= kPruneThreshold) terms.emplace_back(occ, f);
  }
  return make_fock_state(tensor.statistics(), tensor.modes(), terms, false);
}

// ---------------------------------------------------------------------------
// Coefficients over (anti)symmetrized bases.
//
// |k>^(+-) = sum over all N! permutations (+-1)^P |k_P>     (unnormalized, coefficients g)
// |k>^(s)  = |k>^(+-) / sqrt(N! prod n!)                    (unit norm, coefficients h)
//
// |k>^(s) coincides with the occupation basis state, so h = f and g = f / sqrt(N! prod n!).

struct SymmetrizedCoefficients {
  enum class Flavor { g_unnormalized, h_normalized };
  Flavor flavor;
  /// Keyed by the sorted tuple of mode indices.
  std::map<std::vector<int>, Complex> entries;
};

inline SymmetrizedCoefficients extract_coefficients(const FockState& state, SymmetrizedCoefficients::Flavor flavor) {
  SymmetrizedCoefficients out{flavor, {}};
  const double nfact = detail::factorial(state.particles());
  for (const auto& [occ, f] : state.amplitudes()) {
    Complex c = f;
    if (flavor == SymmetrizedCoefficients::Flavor::g_unnormalized)
      c /= std::sqrt(nfact * detail::occupation_factorial_product(occ));
    out.entries.emplace(occ.mode_indices(), c);
  }
  return out;
}

}  // namespace fockent
