#pragma once

#include <map>
#include <string>
#include <vector>

#include "fockent/measures.hpp"

namespace fockent {

/// Modes grouped by orbit: orbits[o] lists the modes (o, s) of orbit o, s = position in the list.
struct OrbitGrouping {
  std::vector<std::vector<int>> orbits;

  void validate(int modes) const {
    std::vector<bool> seen(static_cast<std::size_t>(modes), false);
    for (const auto& group : orbits) {
      if (group.empty()) throw Error(ErrorKind::BadPartition, "orbit group is empty");
      for (int m : group) {
        if (m < 0 || m >= modes) throw Error(ErrorKind::BadPartition, "mode " + std::to_string(m) + " out of range");
        if (seen[static_cast<std::size_t>(m)])
          throw Error(ErrorKind::BadPartition, "mode " + std::to_string(m) + " appears in two orbits");
        seen[static_cast<std::size_t>(m)] = true;
      }
    }
  }

  /// Orbit modes contiguously in orbit order, then the remaining modes ascending.
  std::vector<int> grouped_order(int modes) const {
    std::vector<int> order;
    std::vector<bool> used(static_cast<std::size_t>(modes), false);
    for (const auto& group : orbits)
      for (int m : group) {
        order.push_back(m);
        used[static_cast<std::size_t>(m)] = true;
      }
    for (int m = 0; m < modes; ++m)
      if (!used[static_cast<std::size_t>(m)]) order.push_back(m);
    return order;
  }

  std::vector<int> modes_of(const std::vector<int>& orbit_subset) const {
    std::vector<int> out;
    for (int o : orbit_subset)
      for (int m : orbits.at(static_cast<std::size_t>(o))) out.push_back(m);
    return out;
  }
};

/// Effective-spin state: one spin label S_o per orbit.
struct SpinRegister {
  /// Number of spin states of each orbit.
  std::vector<int> spin_states;
  std::map<std::vector<int>, Complex> amplitudes;

  double norm_squared() const {
    double s = 0.0;
    for (const auto& [k, a] : amplitudes) s += std::norm(a);
    return s;
  }
};

namespace detail {

inline bool one_per_orbit(const OccupationVector& occ, const OrbitGrouping& grouping) {
  for (const auto& group : grouping.orbits) {
    int n = 0;
    for (int m : group) n += occ[static_cast<std::size_t>(m)];
    if (n != 1) return false;
  }
  return true;
}

}  // namespace detail

/// Every configuration with non-negligible amplitude has exactly one particle per orbit, and
/// no particle outside the orbits.
inline bool check_half_filling(const FockState& state, const OrbitGrouping& grouping) {
  grouping.validate(state.modes());
  if (static_cast<int>(grouping.orbits.size()) != state.particles()) return false;
  for (const auto& [occ, a] : state.amplitudes())
    if (std::abs(a) > kConfigurationThreshold && !detail::one_per_orbit(occ, grouping)) return false;
  return true;
}

/// Rewrites prod_s |n_{o,s}> as |S_o>. Fermionic amplitudes are taken in the mode order that
/// lists each orbit's modes contiguously, orbit by orbit.
inline SpinRegister to_spin_register(const FockState& state, const OrbitGrouping& grouping) {
  if (!check_half_filling(state, grouping))
    throw Error(ErrorKind::NotHalfFilled, "state is not singly occupied in every orbit");
  const FockState moved = permute_modes(state, grouping.grouped_order(state.modes()));
  SpinRegister reg;
  for (const auto& group : grouping.orbits) reg.spin_states.push_back(static_cast<int>(group.size()));
  for (const auto& [occ, a] : moved.amplitudes()) {
    if (std::abs(a) <= kConfigurationThreshold) continue;
    std::vector<int> spins;
    std::size_t offset = 0;
    for (int size : reg.spin_states) {
      for (int s = 0; s < size; ++s)
        if (occ[offset + static_cast<std::size_t>(s)]) spins.push_back(s);
      offset += static_cast<std::size_t>(size);
    }
    reg.amplitudes.emplace(std::move(spins), a);
  }
  return reg;
}

inline FockState from_spin_register(const SpinRegister& reg, const OrbitGrouping& grouping, int modes) {
  grouping.validate(modes);
  const auto order = grouping.grouped_order(modes);
  AmplitudeMap grouped;
  for (const auto& [spins, a] : reg.amplitudes) {
    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    std::size_t offset = 0;
    for (std::size_t o = 0; o < spins.size(); ++o) {
      occ[offset + static_cast<std::size_t>(spins[o])] = 1;
      offset += static_cast<std::size_t>(reg.spin_states[o]);
    }
    grouped.emplace(OccupationVector(std::move(occ)), a);
  }
  const FockState in_grouped_order = FockState::from_amplitudes(
      Statistics::fermionic, modes, static_cast<int>(reg.spin_states.size()), std::move(grouped));
  std::vector<int> inverse(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) inverse[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
  return permute_modes(in_grouped_order, inverse);
}

/// Entanglement entropy of the spins of `orbit_subset` with the remaining orbits.
inline EntropyReport register_entropy(const SpinRegister& reg, const std::vector<int>& orbit_subset) {
  const auto orbits = static_cast<int>(reg.spin_states.size());
  std::vector<bool> in_a(static_cast<std::size_t>(orbits), false);
  for (int o : orbit_subset) {
    if (o < 0 || o >= orbits || in_a[static_cast<std::size_t>(o)])
      throw Error(ErrorKind::BadPartition, "bad orbit subset");
    in_a[static_cast<std::size_t>(o)] = true;
  }
  std::map<std::vector<int>, Eigen::Index> row_of;
  std::map<std::vector<int>, std::vector<std::pair<Eigen::Index, Complex>>> by_rest;
  for (const auto& [spins, a] : reg.amplitudes) {
    std::vector<int> head, rest;
    for (int o : orbit_subset) head.push_back(spins[static_cast<std::size_t>(o)]);
    for (int o = 0; o < orbits; ++o)
      if (!in_a[static_cast<std::size_t>(o)]) rest.push_back(spins[static_cast<std::size_t>(o)]);
    auto [it, inserted] = row_of.emplace(head, static_cast<Eigen::Index>(row_of.size()));
    by_rest[rest].emplace_back(it->second, a);
  }
  const auto dim = static_cast<Eigen::Index>(row_of.size());
  Matrix rho = Matrix::Zero(dim, dim);
  for (const auto& [rest, column] : by_rest)
    for (const auto& [r1, a1] : column)
      for (const auto& [r2, a2] : column) rho(r1, r2) += a1 * std::conj(a2);
  std::vector<std::vector<int>> labels(static_cast<std::size_t>(dim));
  for (const auto& [head, row] : row_of) labels[static_cast<std::size_t>(row)] = head;
  return von_neumann_entropy({DensityMatrix::Kind::mode, std::move(labels), std::move(rho), 1.0},
                             "orbits " + describe_partition(orbit_subset));
}

enum class DoubleDotState { singlet, triplet0, product_up_down, double_occ_dot1 };

/// Modes (dot1 up, dot1 down, dot2 up, dot2 down).
inline OrbitGrouping double_dot_grouping() { return {{{0, 1}, {2, 3}}}; }

inline FockState build_double_dot_state(DoubleDotState kind) {
  const OccupationVector up_down{1, 0, 0, 1};   // a^+_{1up} a^+_{2down} |0>
  const OccupationVector down_up{0, 1, 1, 0};   // a^+_{1down} a^+_{2up} |0>
  const OccupationVector both_in_dot1{1, 1, 0, 0};
  switch (kind) {
    case DoubleDotState::singlet:
      return make_fock_state(Statistics::fermionic, 4, {{up_down, 1.0}, {down_up, -1.0}}, true);
    case DoubleDotState::triplet0:
      return make_fock_state(Statistics::fermionic, 4, {{up_down, 1.0}, {down_up, 1.0}}, true);
    case DoubleDotState::product_up_down:
      return basis_state(Statistics::fermionic, up_down);
    case DoubleDotState::double_occ_dot1:
      return basis_state(Statistics::fermionic, both_in_dot1);
  }
  throw Error(ErrorKind::IncompatibleStates, "unknown double-dot state");
}

}  // namespace fockent
