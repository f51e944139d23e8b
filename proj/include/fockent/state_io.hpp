#pragma once

// Text formats for states and unitaries.
//
// State file:
//   {
//     "statistics": "fermionic" | "bosonic",
//     "modes": M,
//     "representation": "occupation" | "first_quantized",
//     "normalize": false,                       (optional)
//     "terms": [ {"index": [...], "amplitude": [re, im]}, ... ]
//   }
// For "occupation", index is the occupation vector (length M). For "first_quantized",
// index is (k_1, ..., k_N) and unspecified tensor entries are zero.
//
// Unitary file:
//   { "modes": M, "entries": [[re, im], ...] }      row-major, M*M entries

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "fockent/first_quant.hpp"
#include "fockent/transform.hpp"
#include "json.hpp"

namespace fockent::io {

using Json = nlohmann::json;
using ParsedState = std::variant<FockState, ProductTensor>;

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte is one past the offending character.
    throw Error(ErrorKind::ParseError, line_column(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
}

inline const Json& field(const Json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name))
    throw Error(ErrorKind::ParseError, std::string("missing field \"") + name + "\"");
  return obj.at(name);
}

inline Complex parse_complex(const Json& pair, std::size_t term) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
    throw Error(ErrorKind::ParseError, "term " + std::to_string(term) + ": amplitude must be [real, imaginary]", term);
  return {pair[0].get<double>(), pair[1].get<double>()};
}

inline std::vector<int> parse_index(const Json& idx, std::size_t term) {
  if (!idx.is_array()) throw Error(ErrorKind::ParseError, "term " + std::to_string(term) + ": index must be a list", term);
  std::vector<int> out;
  for (const auto& v : idx) {
    if (!v.is_number_integer())
      throw Error(ErrorKind::ParseError, "term " + std::to_string(term) + ": index entries must be integers", term);
    out.push_back(v.get<int>());
  }
  return out;
}

inline Statistics parse_statistics(const Json& j) {
  const auto s = j.is_string() ? j.get<std::string>() : std::string{};
  if (s == "fermionic") return Statistics::fermionic;
  if (s == "bosonic") return Statistics::bosonic;
  throw Error(ErrorKind::ParseError, "statistics must be \"fermionic\" or \"bosonic\"");
}

inline int parse_positive(const Json& j, const char* name) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw Error(ErrorKind::ParseError, std::string(name) + " must be a positive integer");
  return j.get<int>();
}

inline Json complex_pair(Complex c) { return Json::array({c.real(), c.imag()}); }

}  // namespace detail

inline ParsedState parse_state_text(const std::string& text) {
  const Json doc = detail::parse_json(text);
  const Statistics statistics = detail::parse_statistics(detail::field(doc, "statistics"));
  const int modes = detail::parse_positive(detail::field(doc, "modes"), "modes");
  const Json& rep = detail::field(doc, "representation");
  const std::string representation = rep.is_string() ? rep.get<std::string>() : std::string{};
  const bool normalize = doc.contains("normalize") && doc.at("normalize").is_boolean() && doc.at("normalize").get<bool>();
  const Json& terms = detail::field(doc, "terms");
  if (!terms.is_array()) throw Error(ErrorKind::ParseError, "terms must be a list");

  if (representation == "occupation") {
    std::vector<std::pair<OccupationVector, Complex>> parsed;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::size_t number = t + 1;
      parsed.emplace_back(OccupationVector(detail::parse_index(detail::field(terms[t], "index"), number)),
                          detail::parse_complex(detail::field(terms[t], "amplitude"), number));
    }
    return make_fock_state(statistics, modes, parsed, normalize);
  }
  if (representation == "first_quantized") {
    if (terms.empty()) throw Error(ErrorKind::ZeroState, "no terms given");
    const auto rank = detail::parse_index(detail::field(terms[0], "index"), 1).size();
    ProductTensor tensor(statistics, modes, static_cast<int>(rank));
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::size_t number = t + 1;
      const auto idx = detail::parse_index(detail::field(terms[t], "index"), number);
      if (idx.size() != rank)
        throw Error(ErrorKind::MixedParticleNumber, "term " + std::to_string(number) + " has rank " +
                                                        std::to_string(idx.size()) + ", term 1 has rank " +
                                                        std::to_string(rank),
                    number);
      for (int k : idx)
        if (k < 0 || k >= modes)
          throw Error(ErrorKind::IncompatibleStates, "term " + std::to_string(number) + ": mode index out of range", number);
      tensor.at(idx) += detail::parse_complex(detail::field(terms[t], "amplitude"), number);
    }
    const double violation = symmetry_violation(tensor);
    if (violation > kSymmetryTolerance)
      throw Error(ErrorKind::NotSymmetric, std::string("tensor is not ") +
                                               (statistics == Statistics::fermionic ? "antisymmetric" : "symmetric"));
    if (normalize) {
      const double n2 = tensor.norm_squared();
      if (n2 == 0.0) throw Error(ErrorKind::ZeroState, "cannot normalize the zero tensor");
      for (auto& q : tensor.entries()) q /= std::sqrt(n2);
    }
    return tensor;
  }
  throw Error(ErrorKind::ParseError, "representation must be \"occupation\" or \"first_quantized\"");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ParsedState parse_state_file(const std::string& path) { return parse_state_text(read_file(path)); }

/// Either representation, as an occupation-number state.
inline FockState as_fock_state(const ParsedState& parsed) {
  if (const auto* s = std::get_if<FockState>(&parsed)) return *s;
  return from_product_tensor(std::get<ProductTensor>(parsed));
}

inline Json state_to_json(const FockState& state) {
  Json terms = Json::array();
  for (const auto& [occ, a] : state.amplitudes())
    terms.push_back({{"index", occ.values()}, {"amplitude", detail::complex_pair(a)}});
  Json doc;
  doc["statistics"] = to_string(state.statistics());
  doc["modes"] = state.modes();
  doc["representation"] = "occupation";
  doc["terms"] = std::move(terms);
  return doc;
}

/// Shortest round-trip decimal for every amplitude, so parsing reproduces them bit for bit.
inline std::string emit_state(const FockState& state) { return state_to_json(state).dump(2) + "\n"; }

inline SingleParticleUnitary parse_unitary_text(const std::string& text) {
  const Json doc = detail::parse_json(text);
  const int modes = detail::parse_positive(detail::field(doc, "modes"), "modes");
  const Json& entries = detail::field(doc, "entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(modes) * static_cast<std::size_t>(modes))
    throw Error(ErrorKind::ParseError, "entries must hold modes*modes [real, imaginary] pairs");
  Matrix u(modes, modes);
  for (int r = 0; r < modes; ++r)
    for (int c = 0; c < modes; ++c) {
      const auto flat = static_cast<std::size_t>(r * modes + c);
      u(r, c) = detail::parse_complex(entries[flat], flat + 1);
    }
  return SingleParticleUnitary(std::move(u));
}

inline SingleParticleUnitary parse_unitary_file(const std::string& path) { return parse_unitary_text(read_file(path)); }

inline std::string emit_unitary(const SingleParticleUnitary& u) {
  Json entries = Json::array();
  for (int r = 0; r < u.dimension(); ++r)
    for (int c = 0; c < u.dimension(); ++c) entries.push_back(detail::complex_pair(u.matrix()(r, c)));
  return Json{{"modes", u.dimension()}, {"entries", std::move(entries)}}.dump(2) + "\n";
}

}  // namespace fockent::io
