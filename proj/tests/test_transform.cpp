#include <catch2/catch_amalgamated.hpp>

#include "fockent/measures.hpp"
#include "fockent/transform.hpp"
#include "oracles.hpp"

using namespace fockent;
using Catch::Approx;

namespace {

// Builds sum_n f(n) prod_i (sum_j U(i,j) c_j^+)^{n_i} / sqrt(n_i!) |0> in the dense new-mode space.
oracle::DenseFock dense_transformed(const FockState& s, const Matrix& u) {
  const int cutoff = std::max(1, s.particles());
  oracle::DenseFock total(s.statistics(), s.modes(), cutoff);
  for (const auto& [occ, f] : s.amplitudes()) {
    oracle::DenseFock v(s.statistics(), s.modes(), cutoff);
    v.amp[0] = f;
    for (int i = s.modes() - 1; i >= 0; --i)
      for (int c = 0; c < occ[static_cast<std::size_t>(i)]; ++c) {
        oracle::DenseFock next(s.statistics(), s.modes(), cutoff);
        for (int j = 0; j < s.modes(); ++j) {
          const auto part = v.apply(true, j);
          for (std::size_t k = 0; k < next.amp.size(); ++k) next.amp[k] += u(i, j) * part.amp[k];
        }
        for (auto& a : next.amp) a /= std::sqrt(c + 1.0);
        v = std::move(next);
      }
    for (std::size_t k = 0; k < v.amp.size(); ++k) total.amp[k] += v.amp[k];
  }
  return total;
}

double max_amp_diff(const FockState& a, const FockState& b) {
  double worst = 0.0;
  for (const auto& [occ, f] : a.amplitudes()) worst = std::max(worst, std::abs(f - b.amplitude(occ)));
  for (const auto& [occ, f] : b.amplitudes()) worst = std::max(worst, std::abs(f - a.amplitude(occ)));
  return worst;
}

FockState momentum_pair() { return make_fock_state(Statistics::bosonic, 4, {{{1, 0, 1, 0}, 1.0}}, false); }

}  // namespace

TEST_CASE("unitaries are validated") {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = 0.1;
  try {
    SingleParticleUnitary u(bad);
    FAIL("expected NotUnitary");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotUnitary);
  }
  try {
    apply_single_particle_unitary(basis_state(Statistics::fermionic, {1, 0}), SingleParticleUnitary::identity(3));
    FAIL("expected IncompatibleStates");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IncompatibleStates);
  }
}

TEST_CASE("identity and mode swap") {
  std::mt19937 rng(1);
  const auto s = oracle::random_state(Statistics::fermionic, 4, 2, rng);
  CHECK(max_amp_diff(apply_single_particle_unitary(s, SingleParticleUnitary::identity(4)), s) < 1e-15);

  Matrix swap = Matrix::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  const auto f = apply_single_particle_unitary(basis_state(Statistics::fermionic, {1, 1}), SingleParticleUnitary(swap));
  CHECK(f.amplitude({1, 1}).real() == Approx(-1.0).margin(1e-15));
  const auto b = apply_single_particle_unitary(basis_state(Statistics::bosonic, {1, 1}), SingleParticleUnitary(swap));
  CHECK(b.amplitude({1, 1}).real() == Approx(1.0).margin(1e-15));
}

TEST_CASE("DFT matrices") {
  CHECK(std::abs(dft_unitary(1).matrix()(0, 0) - Complex(1.0)) < 1e-15);
  const auto d2 = dft_unitary(2).matrix();
  CHECK(std::abs(d2(1, 1) + 1.0 / std::sqrt(2.0)) < 1e-15);
  const auto d4 = dft_unitary(4).matrix();
  CHECK(std::abs(d4(1, 1) - Complex(0.0, 0.5)) < 1e-15);
  CHECK(std::abs(d4(3, 3) - Complex(0.0, 0.5)) < 1e-15);
  CHECK(max_abs(d4.adjoint() * d4 - Matrix::Identity(4, 4)) < 1e-14);
}

TEST_CASE("fully filled fermionic states pick up det U") {
  std::mt19937 rng(4);
  for (int m : {2, 3})
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix u = oracle::random_unitary(m, rng);
      const OccupationVector full(std::vector<int>(static_cast<std::size_t>(m), 1));
      const auto out = apply_single_particle_unitary(basis_state(Statistics::fermionic, full), SingleParticleUnitary(u));
      CHECK(std::abs(out.amplitude(full) - u.determinant()) < 1e-10);
    }
}

TEST_CASE("minor route matches the dense operator oracle and the tensor route") {
  std::mt19937 rng(8);
  for (auto stats : {Statistics::fermionic, Statistics::bosonic})
    for (int m = 2; m <= 4; ++m)
      for (int n = 1; n <= 3; ++n) {
        if (stats == Statistics::fermionic && n > m) continue;
        const auto s = oracle::random_state(stats, m, n, rng);
        const SingleParticleUnitary u(oracle::random_unitary(m, rng));
        const auto minors = apply_single_particle_unitary(s, u);
        const auto tensor = apply_single_particle_unitary_via_tensor(s, u);
        CHECK(max_amp_diff(minors, tensor) < 1e-12);
        CHECK(minors.norm_squared() == Approx(1.0).margin(1e-12));

        const auto expected = dense_transformed(s, u.matrix());
        const auto got = oracle::dense_state(minors);
        for (std::size_t k = 0; k < got.amp.size(); ++k) CHECK(std::abs(expected.amp[k] - got.amp[k]) < 1e-12);
      }
}

TEST_CASE("composition and inversion") {
  std::mt19937 rng(12);
  const auto s = oracle::random_state(Statistics::bosonic, 3, 3, rng);
  const SingleParticleUnitary u1(oracle::random_unitary(3, rng)), u2(oracle::random_unitary(3, rng));
  const auto stepwise = apply_single_particle_unitary(apply_single_particle_unitary(s, u1), u2);
  CHECK(max_amp_diff(stepwise, apply_single_particle_unitary(s, compose(u1, u2))) < 1e-12);
  CHECK(max_amp_diff(apply_single_particle_unitary(apply_single_particle_unitary(s, u1), u1.adjoint()), s) < 1e-12);
}

TEST_CASE("configuration count depends on the single-particle basis") {
  const auto p = momentum_pair();
  CHECK(configuration_count(p) == 1);
  const auto x = apply_single_particle_unitary(p, dft_unitary(4));
  CHECK(configuration_count(x) > 1);
  double best = 0.0;
  for (const std::vector<int>& part : {std::vector<int>{0}, {1}, {0, 1}, {0, 2}})
    best = std::max(best, mode_entanglement_entropy(x, part).value_bits);
  CHECK(best > 0.1);
  const auto back = apply_single_particle_unitary(x, dft_unitary(4).adjoint());
  CHECK(configuration_count(back) == 1);
  CHECK(max_amp_diff(back, p) < 1e-10);
}
