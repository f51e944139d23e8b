#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fockent/rdm.hpp"

namespace fockent {

/// Eigenvalues in [-kClampTolerance, 0) are treated as zero; anything lower is NotPSD.
inline constexpr double kClampTolerance = 1e-10;
/// Amplitude magnitude above which an occupation configuration counts as present.
inline constexpr double kConfigurationThreshold = 1e-10;

struct EntropyReport {
  double value_bits = 0.0;
  /// Trace-normalized spectrum, descending.
  std::vector<double> eigenvalues;
  std::string partition;
};

/// -sum p log2 p with 0 log 0 = 0.
inline double shannon_bits(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log2(x);
  return s;
}

/// Entropy in bits of rho / Tr rho.
inline EntropyReport von_neumann_entropy(const DensityMatrix& rho, std::string partition = {}) {
  if (hermiticity_violation(rho.entries) > kHermitianTolerance)
    throw Error(ErrorKind::NotHermitian, "density matrix is not Hermitian");
  const double tr = rho.trace();
  if (!(tr > 0.0)) throw Error(ErrorKind::NotPSD, "density matrix has nonpositive trace");
  const RealVector ev = hermitian_eigenvalues(rho.entries / tr);
  EntropyReport report;
  report.partition = std::move(partition);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double v = ev(i);
    if (v < -kClampTolerance)
      throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(v) + " below clamp tolerance");
    report.eigenvalues.push_back(std::max(v, 0.0));
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), std::greater<>());
  report.value_bits = shannon_bits(report.eigenvalues);
  return report;
}

/// Number of occupation configurations carrying non-negligible amplitude.
inline std::size_t configuration_count(const FockState& state) {
  return static_cast<std::size_t>(std::count_if(state.amplitudes().begin(), state.amplitudes().end(),
                                                [](const auto& kv) { return std::abs(kv.second) > kConfigurationThreshold; }));
}

/// True for a single Slater determinant (fermions) or permanent (bosons) in the current basis.
inline bool is_single_configuration(const FockState& state) { return configuration_count(state) == 1; }

inline std::string describe_partition(const std::vector<int>& modes) {
  std::string out;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(modes[i]);
  }
  return out;
}

/// Bipartite entanglement between the occupation numbers of `partition` and of the other modes.
inline EntropyReport mode_entanglement_entropy(const FockState& state, const std::vector<int>& partition) {
  return von_neumann_entropy(mode_rdm(state, partition), describe_partition(partition));
}

/// Entropy of the trace-normalized one-particle matrix.
inline EntropyReport one_particle_entropy(const FockState& state) {
  return von_neumann_entropy(n_particle_rdm(state, 1), "one-particle");
}

}  // namespace fockent
