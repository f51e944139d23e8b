#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "fockent/cli.hpp"
#include "oracles.hpp"

using namespace fockent;
using Catch::Approx;
using nlohmann::json;

namespace {

const std::string kSamples = FOCKENT_SAMPLES_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return kSamples + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fockent_test_" + name)).string();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

ErrorKind parse_error_kind(const std::string& text, std::optional<std::size_t>* term = nullptr) {
  try {
    io::as_fock_state(io::parse_state_text(text));
  } catch (const Error& e) {
    if (term) *term = e.term();
    return e.kind();
  }
  FAIL("expected a parse failure");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("state files are parsed and validated") {
  std::optional<std::size_t> term;
  CHECK(parse_error_kind(R"({"statistics":"bosonic","modes":3,"representation":"occupation",
      "terms":[{"index":[1,0,0],"amplitude":[1,0]},{"index":[1,1,0],"amplitude":[1,0]}]})",
                         &term) == ErrorKind::MixedParticleNumber);
  CHECK(term == std::optional<std::size_t>(2));

  CHECK(parse_error_kind(R"({"statistics":"fermionic","modes":2,"representation":"first_quantized",
      "terms":[{"index":[0,1],"amplitude":[1,0]}]})") == ErrorKind::NotSymmetric);
  CHECK(parse_error_kind(R"({"statistics":"fermionic","modes":2,"representation":"occupation",
      "terms":[{"index":[2,0],"amplitude":[1,0]}]})") == ErrorKind::PauliViolation);
  CHECK(parse_error_kind(R"({"statistics":"fermionic","modes":2,"representation":"occupation",
      "terms":[{"index":[1,0],"amplitude":[0,0]}], "normalize": true})") == ErrorKind::ZeroState);
  CHECK(parse_error_kind(R"({"statistics":"anyonic","modes":2,"representation":"occupation","terms":[]})") ==
        ErrorKind::ParseError);

  try {
    io::parse_state_text("{\n  \"modes\": 2,\n  oops\n}");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  const auto fq = io::as_fock_state(io::parse_state_file(sample("first_quantized_pair.json")));
  CHECK(fq.amplitude({1, 0, 1}).real() == Approx(1.0).margin(1e-15));
}

TEST_CASE("emit then parse reproduces amplitudes exactly") {
  std::mt19937 rng(99);
  for (auto stats : {Statistics::fermionic, Statistics::bosonic})
    for (int trial = 0; trial < 10; ++trial) {
      const auto s = oracle::random_state(stats, 5, 3, rng);
      const auto back = io::as_fock_state(io::parse_state_text(io::emit_state(s)));
      REQUIRE(back.amplitudes().size() == s.amplitudes().size());
      for (const auto& [occ, f] : s.amplitudes()) CHECK(std::abs(back.amplitude(occ) - f) <= 1e-15);
    }

  const auto u = dft_unitary(3);
  const auto v = io::parse_unitary_text(io::emit_unitary(u));
  CHECK(max_abs(u.matrix() - v.matrix()) == 0.0);
}

TEST_CASE("analyze reports entropies") {
  const auto r = run({"analyze", "--state", sample("boson_pair.json"), "--partition", "0", "--partition", "0,1"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["configuration_count"] == 1);
  CHECK(j["one_particle_entropy_bits"].get<double>() == 1.0);
  CHECK(j["entropies"].size() == 2);
  CHECK(j["metadata"]["input_sha256"].get<std::string>().size() == 64);
}

TEST_CASE("transform, inverse transform and reports") {
  const auto moved = temp_path("moved.json");
  const auto r = run({"transform", "--state", sample("boson_pair.json"), "--dft", "--out", moved});
  REQUIRE(r.code == 0);
  const auto report = json::parse(r.out);
  CHECK(report["configuration_count_before"] == 1);
  CHECK(report["configuration_count_after"].get<int>() > 1);

  const auto a = json::parse(run({"analyze", "--state", moved, "--partition", "0,1"}).out);
  CHECK(a["entropies"][0]["bits"].get<double>() > 0.1);

  const auto back = temp_path("back.json");
  REQUIRE(run({"transform", "--state", moved, "--dft", "--inverse", "--out", back}).code == 0);
  const auto restored = io::as_fock_state(io::parse_state_file(back));
  CHECK(std::abs(restored.amplitude({1, 0, 1, 0}) - Complex(1.0)) < 1e-10);

  const auto printed = run({"transform", "--state", sample("fermion_pair.json"), "--unitary", sample("hadamard_pair_unitary.json")});
  CHECK(printed.code == 1);  // dimension 2 against 4 modes
  CHECK(printed.err.find("IncompatibleStates") != std::string::npos);
}

TEST_CASE("rdm, yang and spinmap subcommands") {
  const auto rho = json::parse(run({"rdm", "--state", sample("boson_pair.json"), "--n", "1"}).out);
  CHECK(rho["trace"].get<double>() == 2.0);
  CHECK(rho["matrix"]["real"][0][0].get<double>() == 1.0);
  CHECK(rho["entropy_bits"].get<double>() == 1.0);

  const auto mode = json::parse(run({"rdm", "--state", sample("double_dot_singlet.json"), "--partition", "0,1"}).out);
  CHECK(mode["kind"] == "mode");
  CHECK(mode["entropy_bits"].get<double>() == 1.0);

  const auto y = json::parse(run({"yang", "--state", sample("yang_fermion_pair.json")}).out);
  CHECK(y["values"].size() == 3);
  CHECK(y["rho1_yang_max_offdiagonal"].get<double>() < 1e-8);

  const auto s = json::parse(run({"spinmap", "--state", sample("double_dot_singlet.json"), "--orbits", "0,1;2,3"}).out);
  CHECK(s["half_filled"] == true);
  CHECK(s["entropies"][0]["spin_bits"].get<double>() == 1.0);
  CHECK(s["entropies"][0]["mode_bits"].get<double>() == 1.0);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 1);
  CHECK(run({"analyze"}).code == 1);
  CHECK(run({"analyze", "--state", temp_path("missing.json")}).code == 1);
  CHECK(run({"rdm", "--state", sample("boson_pair.json"), "--n", "3"}).code == 1);
  CHECK(run({"rdm", "--state", sample("boson_pair.json"), "--partition", "0,x"}).code == 1);
  CHECK(run({"yang", "--state", sample("m_family_2.json")}).code == 0);
  CHECK(run({"spinmap", "--state", sample("boson_pair.json"), "--orbits", "0,1;2,3"}).code == 0);
  CHECK(run({"spinmap", "--state", sample("m_family_2.json"), "--orbits", "0,1;2"}).code == 1);
  CHECK(run({"analyze", "--help"}).code == 0);

  const auto bad = temp_path("bad.json");
  write(bad, R"({"statistics":"fermionic","modes":2,"representation":"occupation","terms":[{"index":[1],"amplitude":[1,0]}]})");
  CHECK(run({"analyze", "--state", bad}).code == 1);
}
