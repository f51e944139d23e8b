#include <catch2/catch_amalgamated.hpp>

#include "fockent/measures.hpp"
#include "fockent/spinmap.hpp"
#include "oracles.hpp"

using namespace fockent;
using Catch::Approx;

namespace {

const OrbitGrouping kThreeOrbits{{{0, 1}, {2, 3}, {4, 5}}};

FockState random_half_filled(const OrbitGrouping& g, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  std::vector<std::pair<OccupationVector, Complex>> terms;
  for (const auto& occ : enumerate_basis(Statistics::fermionic, 6, 3)) {
    bool ok = true;
    for (const auto& group : g.orbits) {
      int n = 0;
      for (int m : group) n += occ[static_cast<std::size_t>(m)];
      ok = ok && n == 1;
    }
    if (ok) terms.emplace_back(occ, Complex(gauss(rng), gauss(rng)));
  }
  return make_fock_state(Statistics::fermionic, 6, terms, true);
}

}  // namespace

TEST_CASE("double-dot states") {
  const auto g = double_dot_grouping();
  const auto singlet = build_double_dot_state(DoubleDotState::singlet);
  CHECK(check_half_filling(singlet, g));
  const auto reg = to_spin_register(singlet, g);
  CHECK(reg.amplitudes.size() == 2);
  CHECK(register_entropy(reg, {0}).value_bits == Approx(1.0).margin(1e-10));
  CHECK(mode_entanglement_entropy(singlet, {0, 1}).value_bits == Approx(1.0).margin(1e-10));

  const auto product = build_double_dot_state(DoubleDotState::product_up_down);
  CHECK(register_entropy(to_spin_register(product, g), {0}).value_bits == Approx(0.0).margin(1e-12));
  CHECK(register_entropy(to_spin_register(build_double_dot_state(DoubleDotState::triplet0), g), {0}).value_bits ==
        Approx(1.0).margin(1e-10));

  const auto doubly = build_double_dot_state(DoubleDotState::double_occ_dot1);
  CHECK_FALSE(check_half_filling(doubly, g));
  try {
    to_spin_register(doubly, g);
    FAIL("expected NotHalfFilled");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotHalfFilled);
  }
}

TEST_CASE("half-filled subspace of the double dot has dimension 4 of 6") {
  const auto g = double_dot_grouping();
  int half = 0;
  const auto basis = enumerate_basis(Statistics::fermionic, 4, 2);
  for (const auto& occ : basis) half += check_half_filling(basis_state(Statistics::fermionic, occ), g);
  CHECK(basis.size() == 6);
  CHECK(half == 4);
}

TEST_CASE("spin and mode entropies agree under half filling") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_half_filled(kThreeOrbits, rng);
    const auto reg = to_spin_register(s, kThreeOrbits);
    CHECK(reg.norm_squared() == Approx(1.0).margin(1e-12));
    for (const std::vector<int>& subset : {std::vector<int>{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}})
      CHECK(register_entropy(reg, subset).value_bits ==
            Approx(mode_entanglement_entropy(s, kThreeOrbits.modes_of(subset)).value_bits).margin(1e-9));

    const auto back = from_spin_register(reg, kThreeOrbits, 6);
    for (const auto& [occ, f] : s.amplitudes()) CHECK(std::abs(back.amplitude(occ) - f) < 1e-14);
  }
}

TEST_CASE("interleaved orbit groupings") {
  // orbits {0,3} and {1,2}: relabelling signs must not leak into the entropy
  const OrbitGrouping g{{{0, 3}, {1, 2}}};
  std::mt19937 rng(3);
  std::normal_distribution<double> gauss;
  std::vector<std::pair<OccupationVector, Complex>> terms;
  for (const auto& occ : enumerate_basis(Statistics::fermionic, 4, 2))
    if (occ[0] + occ[3] == 1) terms.emplace_back(occ, Complex(gauss(rng), gauss(rng)));
  const auto s = make_fock_state(Statistics::fermionic, 4, terms, true);
  const auto reg = to_spin_register(s, g);
  CHECK(register_entropy(reg, {0}).value_bits == Approx(mode_entanglement_entropy(s, {0, 3}).value_bits).margin(1e-9));
  const auto back = from_spin_register(reg, g, 4);
  for (const auto& [occ, f] : s.amplitudes()) CHECK(std::abs(back.amplitude(occ) - f) < 1e-14);
}

TEST_CASE("orbit groupings are validated") {
  const auto s = build_double_dot_state(DoubleDotState::singlet);
  try {
    to_spin_register(s, OrbitGrouping{{{0, 1}, {1, 2}}});
    FAIL("expected BadPartition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadPartition);
  }
  CHECK_FALSE(check_half_filling(s, OrbitGrouping{{{0, 1, 2, 3}}}));
}
