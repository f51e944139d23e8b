#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fockent/measures.hpp"
#include "fockent/spinmap.hpp"
#include "fockent/state_io.hpp"
#include "fockent/transform.hpp"
#include "fockent/yang.hpp"

namespace fockent::cli {

inline constexpr const char* kToolName = "fockent";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalFailure = 2 };

using Report = nlohmann::ordered_json;

/// Rounds to 12 significant digits so reports only carry digits above tolerance noise.
inline double num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

inline Report complex_num(Complex c) { return Report::array({num(c.real()), num(c.imag())}); }

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

/// "0,2,3" -> {0,2,3}
inline std::vector<int> parse_mode_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error(ErrorKind::ParseError, "bad mode list \"" + text + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::ParseError, "empty mode list");
  return out;
}

/// "0,1;2,3" -> {{0,1},{2,3}}
inline OrbitGrouping parse_orbits(const std::string& text) {
  OrbitGrouping g;
  std::stringstream ss(text);
  std::string group;
  while (std::getline(ss, group, ';')) g.orbits.push_back(parse_mode_list(group));
  if (g.orbits.empty()) throw Error(ErrorKind::ParseError, "empty orbit grouping");
  return g;
}

inline Report matrix_table(const Matrix& m) {
  Report real = Report::array(), imag = Report::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Report rr = Report::array(), ii = Report::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(num(m(r, c).real()));
      ii.push_back(num(m(r, c).imag()));
    }
    real.push_back(std::move(rr));
    imag.push_back(std::move(ii));
  }
  return Report{{"real", std::move(real)}, {"imag", std::move(imag)}};
}

inline Report spectrum(const std::vector<double>& values) {
  Report out = Report::array();
  for (double v : values) out.push_back(num(v));
  return out;
}

inline Report entropy_entry(const EntropyReport& e) {
  return Report{{"partition", e.partition}, {"bits", num(e.value_bits)}, {"eigenvalues", spectrum(e.eigenvalues)}};
}

struct Input {
  std::string bytes;
  FockState state;
};

inline Input load(const std::string& path) {
  std::string bytes = io::read_file(path);
  FockState state = io::as_fock_state(io::parse_state_text(bytes));
  return {std::move(bytes), std::move(state)};
}

inline Report header(const std::string& command, const Input& in) {
  Report r;
  r["command"] = command;
  r["metadata"] = Report{{"tool", kToolName}, {"version", kToolVersion}, {"input_sha256", sha256_hex(in.bytes)}};
  r["statistics"] = to_string(in.state.statistics());
  r["modes"] = in.state.modes();
  r["particles"] = in.state.particles();
  return r;
}

inline Report analyze(const Input& in, const std::vector<std::string>& partitions) {
  Report r = header("analyze", in);
  r["configuration_count"] = configuration_count(in.state);
  r["single_configuration"] = is_single_configuration(in.state);
  if (in.state.particles() >= 1) {
    const auto e = one_particle_entropy(in.state);
    r["one_particle_entropy_bits"] = num(e.value_bits);
    r["one_particle_spectrum"] = spectrum(e.eigenvalues);
  }
  Report entropies = Report::array();
  for (const auto& p : partitions) entropies.push_back(entropy_entry(mode_entanglement_entropy(in.state, parse_mode_list(p))));
  r["entropies"] = std::move(entropies);
  return r;
}

inline Report rdm_report(const Input& in, int n, const std::string& partition) {
  Report r = header("rdm", in);
  const DensityMatrix rho = partition.empty() ? n_particle_rdm(in.state, n) : mode_rdm(in.state, parse_mode_list(partition));
  r["kind"] = rho.kind == DensityMatrix::Kind::n_particle ? "n_particle" : "mode";
  if (partition.empty())
    r["order"] = n;
  else
    r["partition"] = partition;
  r["labels"] = rho.labels;
  r["trace"] = num(rho.trace());
  r["trace_convention"] = num(rho.trace_convention);
  r["matrix"] = matrix_table(rho.entries);
  r["entropy_bits"] = num(von_neumann_entropy(rho).value_bits);
  return r;
}

inline Report yang_report(const Input& in) {
  Report r = header("yang", in);
  const CoefficientMatrix cm = coefficient_matrix(in.state);
  const YangForm form = yang_decompose(cm);
  r["values"] = spectrum(form.values);
  r["rank"] = form.rank;
  r["reconstruction_residual"] = num(reconstruction_residual(cm, form));
  r["basis_change"] = matrix_table(form.basis_change.matrix());
  const DensityMatrix rho = n_particle_rdm(apply_single_particle_unitary(in.state, form.basis_change), 1);
  double off = 0.0;
  std::vector<double> diag;
  for (Eigen::Index i = 0; i < rho.entries.rows(); ++i) {
    diag.push_back(rho.entries(i, i).real());
    for (Eigen::Index j = 0; j < rho.entries.cols(); ++j)
      if (i != j) off = std::max(off, std::abs(rho.entries(i, j)));
  }
  r["rho1_yang_diagonal"] = spectrum(diag);
  r["rho1_yang_max_offdiagonal"] = num(off);
  return r;
}

inline Report spinmap_report(const Input& in, const std::string& orbits_text) {
  Report r = header("spinmap", in);
  const OrbitGrouping grouping = parse_orbits(orbits_text);
  r["orbits"] = orbits_text;
  r["half_filled"] = check_half_filling(in.state, grouping);
  const SpinRegister reg = to_spin_register(in.state, grouping);
  Report table = Report::array();
  for (const auto& [spins, a] : reg.amplitudes) table.push_back(Report{{"spins", spins}, {"amplitude", complex_num(a)}});
  r["register"] = std::move(table);
  // Bipartitions of the orbits, each listed once by the side containing orbit 0.
  Report entropies = Report::array();
  const auto orbits = static_cast<int>(grouping.orbits.size());
  for (int mask = 1; mask < (1 << orbits) - 1; ++mask) {
    if (!(mask & 1)) continue;
    std::vector<int> subset;
    for (int o = 0; o < orbits; ++o)
      if (mask & (1 << o)) subset.push_back(o);
    entropies.push_back(Report{{"orbits", describe_partition(subset)},
                               {"spin_bits", num(register_entropy(reg, subset).value_bits)},
                               {"mode_bits", num(mode_entanglement_entropy(in.state, grouping.modes_of(subset)).value_bits)}});
  }
  r["entropies"] = std::move(entropies);
  return r;
}

/// Runs one subcommand; `args` excludes the program name. Reports go to `out`, diagnostics
/// to `err`. Returns 0 on success, 1 on input errors, 2 on numerical failure.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Occupation-number entanglement analysis for identical particles", kToolName};
  app.require_subcommand(1);

  std::string state_path, unitary_path, out_path, orbits;
  std::vector<std::string> partitions;
  std::string partition;
  int order = 0;
  bool dft = false, inverse = false;

  auto* analyze_cmd = app.add_subcommand("analyze", "configuration count and entropies");
  analyze_cmd->add_option("--state", state_path, "state file")->required();
  analyze_cmd->add_option("--partition", partitions, "comma-separated modes; may repeat");

  auto* transform_cmd = app.add_subcommand("transform", "change the single-particle basis");
  transform_cmd->add_option("--state", state_path, "state file")->required();
  auto* unitary_opt = transform_cmd->add_option("--unitary", unitary_path, "unitary file");
  auto* dft_opt = transform_cmd->add_flag("--dft", dft, "discrete Fourier transform");
  unitary_opt->excludes(dft_opt);
  transform_cmd->add_flag("--inverse", inverse, "apply the adjoint instead");
  transform_cmd->add_option("--out", out_path, "write the transformed state here");

  auto* rdm_cmd = app.add_subcommand("rdm", "reduced density matrix");
  rdm_cmd->add_option("--state", state_path, "state file")->required();
  auto* n_opt = rdm_cmd->add_option("--n", order, "n-particle reduced density matrix");
  auto* part_opt = rdm_cmd->add_option("--partition", partition, "mode reduced density matrix");
  n_opt->excludes(part_opt);

  auto* yang_cmd = app.add_subcommand("yang", "Yang / Takagi canonical form of a two-particle state");
  yang_cmd->add_option("--state", state_path, "state file")->required();

  auto* spin_cmd = app.add_subcommand("spinmap", "effective spin register under half filling");
  spin_cmd->add_option("--state", state_path, "state file")->required();
  spin_cmd->add_option("--orbits", orbits, "orbit groups, e.g. 0,1;2,3")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kInputError;
  }

  try {
    const Input in = load(state_path);
    Report report;
    if (analyze_cmd->parsed()) {
      report = analyze(in, partitions);
    } else if (transform_cmd->parsed()) {
      if (!dft && unitary_path.empty()) throw Error(ErrorKind::ParseError, "transform needs --dft or --unitary");
      SingleParticleUnitary u = dft ? dft_unitary(in.state.modes()) : io::parse_unitary_file(unitary_path);
      if (inverse) u = u.adjoint();
      const FockState result = apply_single_particle_unitary(in.state, u);
      if (out_path.empty()) {
        out << io::emit_state(result);
        return kOk;
      }
      std::ofstream file(out_path, std::ios::binary);
      file << io::emit_state(result);
      if (!file) throw Error(ErrorKind::ParseError, "cannot write " + out_path);
      report = header("transform", in);
      report["unitary"] = dft ? "dft" : unitary_path;
      report["inverse"] = inverse;
      report["configuration_count_before"] = configuration_count(in.state);
      report["configuration_count_after"] = configuration_count(result);
      report["out"] = out_path;
    } else if (rdm_cmd->parsed()) {
      if (partition.empty() && order == 0) throw Error(ErrorKind::ParseError, "rdm needs --n or --partition");
      report = rdm_report(in, order, partition);
    } else if (yang_cmd->parsed()) {
      report = yang_report(in);
    } else {
      report = spinmap_report(in, orbits);
    }
    out << report.dump(2) << "\n";
    return kOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return is_numerical(e.kind()) ? kNumericalFailure : kInputError;
  }
}

}  // namespace fockent::cli
