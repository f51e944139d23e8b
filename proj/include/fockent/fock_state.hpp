#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fockent/error.hpp"

namespace fockent {

using Complex = std::complex<double>;

enum class Statistics { fermionic, bosonic };

inline std::string to_string(Statistics s) {
  return s == Statistics::fermionic ? "fermionic" : "bosonic";
}

/// Amplitudes smaller than this are dropped after arithmetic.
inline constexpr double kPruneThreshold = 1e-14;
/// Tolerance on |<psi|psi> - 1| for a state to count as normalized.
inline constexpr double kNormTolerance = 1e-9;

/// Occupation numbers (n_0, ..., n_{M-1}) of M modes.
class OccupationVector {
 public:
  OccupationVector() = default;
  explicit OccupationVector(std::vector<int> occ) : occ_(std::move(occ)) {}
  OccupationVector(std::initializer_list<int> occ) : occ_(occ) {}

  std::size_t size() const noexcept { return occ_.size(); }
  int operator[](std::size_t i) const { return occ_[i]; }
  int& operator[](std::size_t i) { return occ_[i]; }
  auto begin() const noexcept { return occ_.begin(); }
  auto end() const noexcept { return occ_.end(); }
  const std::vector<int>& values() const noexcept { return occ_; }

  int total() const { return std::accumulate(occ_.begin(), occ_.end(), 0); }

  /// Sorted multiset of occupied mode indices, e.g. (2,0,1) -> (0,0,2).
  std::vector<int> mode_indices() const {
    std::vector<int> out;
    for (std::size_t j = 0; j < occ_.size(); ++j)
      for (int c = 0; c < occ_[j]; ++c) out.push_back(static_cast<int>(j));
    return out;
  }

  static OccupationVector from_mode_indices(std::span<const int> indices, int modes) {
    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    for (int k : indices) ++occ[static_cast<std::size_t>(k)];
    return OccupationVector(std::move(occ));
  }

  auto operator<=>(const OccupationVector&) const = default;
  bool operator==(const OccupationVector&) const = default;

 private:
  std::vector<int> occ_;
};

inline std::string to_string(const OccupationVector& occ) {
  std::string out = "(";
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(occ[i]);
  }
  return out + ")";
}

using AmplitudeMap = std::map<OccupationVector, Complex>;

/// Fixed-particle-number state in the occupation-number basis.
///
/// Basis state |n_0,...,n_{M-1}> is (a_0^+)^{n_0} ... (a_{M-1}^+)^{n_{M-1}} |0>, creation
/// operators applied in increasing mode order, each bosonic factor divided by sqrt(n!) so
/// every basis state has unit norm. All fermionic signs follow from this ordering.
class FockState {
 public:
  Statistics statistics() const noexcept { return statistics_; }
  int modes() const noexcept { return modes_; }
  int particles() const noexcept { return particles_; }
  const AmplitudeMap& amplitudes() const noexcept { return amplitudes_; }
  bool is_zero() const noexcept { return amplitudes_.empty(); }

  Complex amplitude(const OccupationVector& occ) const {
    auto it = amplitudes_.find(occ);
    return it == amplitudes_.end() ? Complex{} : it->second;
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& [occ, a] : amplitudes_) s += std::norm(a);
    return s;
  }

  bool is_normalized() const { return std::abs(norm_squared() - 1.0) <= kNormTolerance; }

  /// Trusted constructor used by library operations: validates shape, prunes tiny amplitudes.
  static FockState from_amplitudes(Statistics statistics, int modes, int particles, AmplitudeMap amps) {
    FockState s;
    s.statistics_ = statistics;
    s.modes_ = modes;
    s.particles_ = particles;
    for (auto& [occ, a] : amps) {
      if (std::abs(a) < kPruneThreshold) continue;
      s.amplitudes_.emplace(occ, a);
    }
    return s;
  }

  FockState scaled(Complex factor) const {
    AmplitudeMap out;
    for (const auto& [occ, a] : amplitudes_) out.emplace(occ, a * factor);
    return from_amplitudes(statistics_, modes_, particles_, std::move(out));
  }

  friend FockState operator+(const FockState& a, const FockState& b) { return a.combine(b, 1.0); }
  friend FockState operator-(const FockState& a, const FockState& b) { return a.combine(b, -1.0); }
  friend FockState operator*(Complex c, const FockState& s) { return s.scaled(c); }

 private:
  FockState combine(const FockState& other, double sign) const {
    if (statistics_ != other.statistics_ || modes_ != other.modes_)
      throw Error(ErrorKind::IncompatibleStates, "cannot add states of different shape");
    if (particles_ != other.particles_ && !is_zero() && !other.is_zero())
      throw Error(ErrorKind::MixedParticleNumber, "cannot add states of different particle number");
    AmplitudeMap out = amplitudes_;
    for (const auto& [occ, a] : other.amplitudes_) out[occ] += sign * a;
    int n = is_zero() ? other.particles_ : particles_;
    return from_amplitudes(statistics_, modes_, n, std::move(out));
  }

  Statistics statistics_ = Statistics::fermionic;
  int modes_ = 1;
  int particles_ = 0;
  AmplitudeMap amplitudes_;
};

/// Builds a validated state. Terms with equal occupation vectors are summed.
/// Error terms are reported 1-based.
inline FockState make_fock_state(Statistics statistics, int modes,
                                 const std::vector<std::pair<OccupationVector, Complex>>& terms,
                                 bool normalize) {
  if (modes < 1) throw Error(ErrorKind::IncompatibleStates, "mode count must be positive");
  if (terms.empty()) throw Error(ErrorKind::ZeroState, "no terms given");
  const int particles = terms.front().first.total();
  AmplitudeMap amps;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& [occ, a] = terms[t];
    if (occ.size() != static_cast<std::size_t>(modes))
      throw Error(ErrorKind::IncompatibleStates,
                  "term " + std::to_string(t + 1) + " has " + std::to_string(occ.size()) +
                      " occupation numbers, expected " + std::to_string(modes),
                  t + 1);
    for (int n : occ) {
      if (n < 0)
        throw Error(ErrorKind::IncompatibleStates,
                    "term " + std::to_string(t + 1) + " has a negative occupation", t + 1);
      if (statistics == Statistics::fermionic && n > 1)
        throw Error(ErrorKind::PauliViolation,
                    "term " + std::to_string(t + 1) + " " + to_string(occ) + " puts two fermions in one mode",
                    t + 1);
    }
    if (occ.total() != particles)
      throw Error(ErrorKind::MixedParticleNumber,
                  "term " + std::to_string(t + 1) + " has " + std::to_string(occ.total()) +
                      " particles, term 1 has " + std::to_string(particles),
                  t + 1);
    amps[occ] += a;
  }
  FockState s = FockState::from_amplitudes(statistics, modes, particles, std::move(amps));
  if (normalize) {
    const double n2 = s.norm_squared();
    if (n2 == 0.0) throw Error(ErrorKind::ZeroState, "cannot normalize the zero state");
    s = s.scaled(1.0 / std::sqrt(n2));
  }
  return s;
}

inline FockState basis_state(Statistics statistics, const OccupationVector& occ) {
  return make_fock_state(statistics, static_cast<int>(occ.size()), {{occ, 1.0}}, false);
}

inline FockState vacuum(Statistics statistics, int modes) {
  return basis_state(statistics, OccupationVector(std::vector<int>(static_cast<std::size_t>(modes), 0)));
}

// ---------------------------------------------------------------------------
// Ladder operators

struct LadderOp {
  enum class Action { create, annihilate };
  Action action;
  int mode;

  static LadderOp create(int mode) { return {Action::create, mode}; }
  static LadderOp annihilate(int mode) { return {Action::annihilate, mode}; }
};

/// Ladder operators in order of application: the first factor acts first, so
/// {create 1, create 0} is a_0^+ a_1^+.
using OperatorString = std::vector<LadderOp>;

namespace detail {

/// Applies one ladder operator to a basis vector in place. Returns the factor, 0 when the
/// result vanishes.
inline double apply_ladder(Statistics statistics, OccupationVector& occ, LadderOp op) {
  const auto j = static_cast<std::size_t>(op.mode);
  double factor = 1.0;
  if (statistics == Statistics::fermionic) {
    int below = 0;
    for (std::size_t i = 0; i < j; ++i) below += occ[i];
    if (below % 2) factor = -1.0;
    if (op.action == LadderOp::Action::create) {
      if (occ[j] == 1) return 0.0;
      occ[j] = 1;
    } else {
      if (occ[j] == 0) return 0.0;
      occ[j] = 0;
    }
    return factor;
  }
  if (op.action == LadderOp::Action::create) {
    factor = std::sqrt(static_cast<double>(occ[j] + 1));
    ++occ[j];
  } else {
    if (occ[j] == 0) return 0.0;
    factor = std::sqrt(static_cast<double>(occ[j]));
    --occ[j];
  }
  return factor;
}

}  // namespace detail

inline FockState apply_operator_string(const FockState& state, const OperatorString& ops) {
  int particles = state.particles();
  for (const auto& op : ops) {
    if (op.mode < 0 || op.mode >= state.modes())
      throw Error(ErrorKind::IncompatibleStates, "operator mode " + std::to_string(op.mode) + " out of range");
    particles += op.action == LadderOp::Action::create ? 1 : -1;
  }
  AmplitudeMap out;
  if (particles >= 0) {
    for (const auto& [occ, a] : state.amplitudes()) {
      OccupationVector cur = occ;
      double factor = 1.0;
      for (auto it = ops.begin(); it != ops.end() && factor != 0.0; ++it)
        factor *= detail::apply_ladder(state.statistics(), cur, *it);
      if (factor != 0.0) out[cur] += factor * a;
    }
  }
  return FockState::from_amplitudes(state.statistics(), state.modes(), std::max(particles, 0), std::move(out));
}

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner_product(const FockState& a, const FockState& b) {
  if (a.statistics() != b.statistics() || a.modes() != b.modes())
    throw Error(ErrorKind::IncompatibleStates, "inner product of states with different statistics or mode count");
  if (a.particles() != b.particles()) {
    if (a.is_zero() || b.is_zero()) return {};
    throw Error(ErrorKind::IncompatibleStates, "inner product of states with different particle number");
  }
  Complex s{};
  const auto& small = a.amplitudes().size() <= b.amplitudes().size() ? a.amplitudes() : b.amplitudes();
  for (const auto& [occ, unused] : small) {
    (void)unused;
    s += std::conj(a.amplitude(occ)) * b.amplitude(occ);
  }
  return s;
}

/// All occupation vectors of `particles` particles in `modes` modes, ordered by the sorted
/// tuple of occupied mode indices: (1,1,0,0), (1,0,1,0), ... for fermions.
inline std::vector<OccupationVector> enumerate_basis(Statistics statistics, int modes, int particles) {
  std::vector<OccupationVector> out;
  if (modes < 1 || particles < 0) return out;
  if (statistics == Statistics::fermionic && particles > modes) return out;
  std::vector<int> idx;
  const bool fermi = statistics == Statistics::fermionic;
  // Depth-first over non-decreasing (bosons) or increasing (fermions) index tuples.
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(idx.size()) == particles) {
      out.push_back(OccupationVector::from_mode_indices(idx, modes));
      return;
    }
    for (int k = start; k < modes; ++k) {
      idx.push_back(k);
      self(self, fermi ? k + 1 : k);
      idx.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Sign picked up by a fermionic basis vector when modes are relabelled so that old mode
/// `order[p]` becomes new mode p.
inline int reorder_sign(const OccupationVector& occ, std::span<const int> new_position) {
  int inversions = 0;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (!occ[i]) continue;
    for (std::size_t j = i + 1; j < occ.size(); ++j)
      if (occ[j] && new_position[i] > new_position[j]) ++inversions;
  }
  return inversions % 2 ? -1 : 1;
}

/// Relabels modes: new mode p is old mode order[p]. `order` must be a permutation of 0..M-1.
/// Fermionic amplitudes pick up the sign of reordering the creation operators.
inline FockState permute_modes(const FockState& state, std::span<const int> order) {
  const auto m = static_cast<std::size_t>(state.modes());
  if (order.size() != m) throw Error(ErrorKind::BadPartition, "mode order has the wrong length");
  std::vector<int> new_position(m, -1);
  for (std::size_t p = 0; p < m; ++p) {
    const int old = order[p];
    if (old < 0 || static_cast<std::size_t>(old) >= m || new_position[static_cast<std::size_t>(old)] != -1)
      throw Error(ErrorKind::BadPartition, "mode order is not a permutation");
    new_position[static_cast<std::size_t>(old)] = static_cast<int>(p);
  }
  AmplitudeMap out;
  for (const auto& [occ, a] : state.amplitudes()) {
    std::vector<int> moved(m);
    for (std::size_t p = 0; p < m; ++p) moved[p] = occ[static_cast<std::size_t>(order[p])];
    const int sign = state.statistics() == Statistics::fermionic ? reorder_sign(occ, new_position) : 1;
    out.emplace(OccupationVector(std::move(moved)), static_cast<double>(sign) * a);
  }
  return FockState::from_amplitudes(state.statistics(), state.modes(), state.particles(), std::move(out));
}

}  // namespace fockent
