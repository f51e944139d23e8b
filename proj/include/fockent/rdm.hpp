#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fockent/first_quant.hpp"
#include "fockent/fock_state.hpp"
#include "fockent/linalg.hpp"

namespace fockent {

inline constexpr double kHermitianTolerance = 1e-10;

struct DensityMatrix {
  enum class Kind { n_particle, mode };

  Kind kind;
  /// Mode-index tuples (n-particle) or occupation patterns of the kept modes (mode RDM).
  std::vector<std::vector<int>> labels;
  Matrix entries;
  /// Expected trace: N!/(N-n)! for n-particle matrices, 1 for mode matrices.
  double trace_convention;

  double trace() const { return entries.trace().real(); }
};

namespace detail {

/// All n-tuples over 0..M-1 in lexicographic order.
inline std::vector<std::vector<int>> all_tuples(int modes, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(t);
    int pos = n - 1;
    while (pos >= 0 && ++t[static_cast<std::size_t>(pos)] == modes) t[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
  return out;
}

inline void check_order(const FockState& state, int n) {
  if (n < 1 || n > state.particles())
    throw Error(ErrorKind::BadOrder, "reduction order " + std::to_string(n) + " outside 1.." +
                                         std::to_string(state.particles()));
}

inline double falling_factorial(int n, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= n - i;
  return p;
}

}  // namespace detail

/// <k'|rho^(n)|k> = Tr(a_{k'_1}..a_{k'_n} rho a^+_{k_n}..a^+_{k_1})
///               = <phi(k)|phi(k')>,  phi(k) = a_{k_1}..a_{k_n}|psi>.
/// Rows and columns run over all ordered n-tuples, so the trace is N!/(N-n)!.
inline DensityMatrix n_particle_rdm(const FockState& state, int n) {
  detail::check_order(state, n);
  auto labels = detail::all_tuples(state.modes(), n);
  std::vector<FockState> reduced;
  reduced.reserve(labels.size());
  for (const auto& k : labels) {
    OperatorString ops;
    for (auto it = k.rbegin(); it != k.rend(); ++it) ops.push_back(LadderOp::annihilate(*it));
    reduced.push_back(apply_operator_string(state, ops));
  }
  const auto dim = static_cast<Eigen::Index>(labels.size());
  Matrix rho = Matrix::Zero(dim, dim);
  for (Eigen::Index row = 0; row < dim; ++row)
    for (Eigen::Index col = 0; col <= row; ++col) {
      const Complex v = inner_product(reduced[static_cast<std::size_t>(col)], reduced[static_cast<std::size_t>(row)]);
      rho(row, col) = v;
      rho(col, row) = std::conj(v);
    }
  return {DensityMatrix::Kind::n_particle, std::move(labels), std::move(rho),
          detail::falling_factorial(state.particles(), n)};
}

/// Same matrix from the first-quantized tensor:
///   <k'|rho^(n)|k> = 1/(N-n)! sum_{k_{n+1}..k_N} <k' rest|psi><psi|k rest>,
/// where |x> = a^+_{x_1}..a^+_{x_N}|0> = (1/sqrt(N!)) sum_P (+-1)^P |x_P> in the product basis.
inline DensityMatrix n_particle_rdm_via_symmetrized_sum(const FockState& state, int n) {
  detail::check_order(state, n);
  const ProductTensor q = to_product_tensor(state);
  const int big_n = state.particles();
  const bool fermi = state.statistics() == Statistics::fermionic;

  // Overlap of the (anti)symmetrized vector |x> with psi, summed literally over permutations.
  std::vector<int> perm(static_cast<std::size_t>(big_n));
  const double inv_sqrt_nfact = 1.0 / std::sqrt(detail::factorial(big_n));
  std::vector<Complex> overlap(q.entries().size());
  std::vector<int> permuted(static_cast<std::size_t>(big_n));
  for (std::size_t f = 0; f < q.entries().size(); ++f) {
    const auto x = q.multi_index(f);
    std::iota(perm.begin(), perm.end(), 0);
    Complex s{};
    do {
      for (std::size_t i = 0; i < perm.size(); ++i) permuted[i] = x[static_cast<std::size_t>(perm[i])];
      s += (fermi ? static_cast<double>(detail::sort_parity(perm)) : 1.0) * q.at(permuted);
    } while (std::next_permutation(perm.begin(), perm.end()));
    overlap[f] = inv_sqrt_nfact * s;
  }

  auto labels = detail::all_tuples(state.modes(), n);
  const auto rests = big_n > n ? detail::all_tuples(state.modes(), big_n - n) : std::vector<std::vector<int>>{{}};
  const auto dim = static_cast<Eigen::Index>(labels.size());
  const double prefactor = 1.0 / detail::factorial(big_n - n);
  Matrix rho = Matrix::Zero(dim, dim);
  std::vector<int> full(static_cast<std::size_t>(big_n));
  auto flat = [&](const std::vector<int>& head, const std::vector<int>& tail) {
    std::copy(head.begin(), head.end(), full.begin());
    std::copy(tail.begin(), tail.end(), full.begin() + n);
    return q.flat_index(full);
  };
  for (Eigen::Index row = 0; row < dim; ++row)
    for (Eigen::Index col = 0; col < dim; ++col) {
      Complex s{};
      for (const auto& rest : rests)
        s += overlap[flat(labels[static_cast<std::size_t>(row)], rest)] *
             std::conj(overlap[flat(labels[static_cast<std::size_t>(col)], rest)]);
      rho(row, col) = prefactor * s;
    }
  return {DensityMatrix::Kind::n_particle, std::move(labels), std::move(rho),
          detail::falling_factorial(big_n, n)};
}

/// Validates a mode subset and returns the order that lists it first, then the rest ascending.
inline std::vector<int> partition_first_order(int modes, const std::vector<int>& partition) {
  if (partition.empty()) throw Error(ErrorKind::BadPartition, "partition is empty");
  if (static_cast<int>(partition.size()) >= modes)
    throw Error(ErrorKind::BadPartition, "partition must be a strict subset of the modes");
  std::vector<bool> seen(static_cast<std::size_t>(modes), false);
  for (int m : partition) {
    if (m < 0 || m >= modes) throw Error(ErrorKind::BadPartition, "mode " + std::to_string(m) + " out of range");
    if (seen[static_cast<std::size_t>(m)]) throw Error(ErrorKind::BadPartition, "mode " + std::to_string(m) + " repeated");
    seen[static_cast<std::size_t>(m)] = true;
  }
  std::vector<int> order = partition;
  for (int m = 0; m < modes; ++m)
    if (!seen[static_cast<std::size_t>(m)]) order.push_back(m);
  return order;
}

/// Occupation patterns of `modes` modes holding 0..max_particles particles, grouped by
/// particle number.
inline std::vector<OccupationVector> occupation_patterns(Statistics statistics, int modes, int max_particles) {
  std::vector<OccupationVector> out;
  for (int k = 0; k <= max_particles; ++k)
    for (auto& occ : enumerate_basis(statistics, modes, k)) out.push_back(std::move(occ));
  return out;
}

/// Density matrix of the occupation numbers of `partition`, the other modes summed over:
///   <n'|rho_A|n> = sum_rest f(n', rest) conj f(n, rest)
/// after relabelling so the partition modes come first (fermionic signs included).
/// Entries between different partition particle numbers are exactly zero.
inline DensityMatrix mode_rdm(const FockState& state, const std::vector<int>& partition) {
  const auto order = partition_first_order(state.modes(), partition);
  const FockState moved = permute_modes(state, order);
  const int l = static_cast<int>(partition.size());

  const auto patterns = occupation_patterns(state.statistics(), l, state.particles());
  std::map<OccupationVector, Eigen::Index> row_of;
  for (std::size_t i = 0; i < patterns.size(); ++i) row_of.emplace(patterns[i], static_cast<Eigen::Index>(i));

  std::map<std::vector<int>, std::vector<std::pair<Eigen::Index, Complex>>> by_rest;
  for (const auto& [occ, f] : moved.amplitudes()) {
    std::vector<int> head(occ.begin(), occ.begin() + l);
    std::vector<int> rest(occ.begin() + l, occ.end());
    by_rest[rest].emplace_back(row_of.at(OccupationVector(std::move(head))), f);
  }

  const auto dim = static_cast<Eigen::Index>(patterns.size());
  Matrix rho = Matrix::Zero(dim, dim);
  for (const auto& [rest, column] : by_rest)
    for (const auto& [r1, f1] : column)
      for (const auto& [r2, f2] : column) rho(r1, r2) += f1 * std::conj(f2);

  std::vector<std::vector<int>> labels;
  labels.reserve(patterns.size());
  for (const auto& p : patterns) labels.push_back(p.values());
  return {DensityMatrix::Kind::mode, std::move(labels), std::move(rho), 1.0};
}

/// Matrix elements <i'_1..i'_n|O|i_1..i_n> keyed by (i', i).
using NBodyElements = std::map<std::pair<std::vector<int>, std::vector<int>>, Complex>;

/// <psi| sum O(i';i) a^+_{i'_1}..a^+_{i'_n} a_{i_n}..a_{i_1} |psi>.
inline Complex expectation_n_body(const FockState& state, int n, const NBodyElements& elements) {
  detail::check_order(state, n);
  for (const auto& [key, value] : elements) {
    const auto& [out_idx, in_idx] = key;
    if (static_cast<int>(out_idx.size()) != n || static_cast<int>(in_idx.size()) != n)
      throw Error(ErrorKind::BadOrder, "operator element has the wrong number of indices");
    auto partner = elements.find({in_idx, out_idx});
    const Complex mirrored = partner == elements.end() ? Complex{} : partner->second;
    if (std::abs(mirrored - std::conj(value)) > kHermitianTolerance)
      throw Error(ErrorKind::NotHermitian, "operator table is not Hermitian");
  }
  Complex total{};
  for (const auto& [key, value] : elements) {
    const auto& [out_idx, in_idx] = key;
    OperatorString ops;
    for (int m : in_idx) ops.push_back(LadderOp::annihilate(m));
    for (auto it = out_idx.rbegin(); it != out_idx.rend(); ++it) ops.push_back(LadderOp::create(*it));
    total += value * inner_product(state, apply_operator_string(state, ops));
  }
  return total;
}

}  // namespace fockent
