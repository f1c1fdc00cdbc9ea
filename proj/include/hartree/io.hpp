#pragma once

// State-file and report serialization for the CLI.
//
// Files are UTF-8 JSON. Every floating-point number is printed with %.17g,
// which round-trips doubles exactly and keeps reports byte-stable across
// runs, so saved states reload bit-identically and identical seeded runs
// diff clean.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hartree/builtin_states.hpp"
#include "hartree/sigma_search.hpp"
#include "hartree/state.hpp"

namespace hartree {

inline constexpr const char* kStateSchema = "hartree-state/1";
inline constexpr const char* kReportSchema = "hartree-report/1";

/// Thrown for unreadable, unparsable, or ill-formed input documents.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("format_double: non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline bool json_is_primitive(const nlohmann::ordered_json& j) {
  return !j.is_object() && !j.is_array();
}

inline void dump_primitive(const nlohmann::ordered_json& j, std::ostream& os) {
  if (j.is_number_float())
    os << format_double(j.get<double>());
  else
    os << j.dump();  // strings get escaped, ints/bools/null print as-is
}

}  // namespace detail

/// Deterministic serializer: objects and nested arrays go multiline with
/// two-space indent, arrays of primitives stay inline, floats use %.17g.
inline void dump_json(const nlohmann::ordered_json& j, std::ostream& os, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string pad2(static_cast<std::size_t>(indent + 2), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : j.items()) {
      os << pad2 << nlohmann::ordered_json(key).dump() << ": ";
      dump_json(value, os, indent + 2);
      if (++i < j.size()) os << ",";
      os << "\n";
    }
    os << pad << "}";
  } else if (j.is_array()) {
    bool flat = true;
    for (const auto& e : j) flat = flat && detail::json_is_primitive(e);
    if (j.empty()) {
      os << "[]";
    } else if (flat) {
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ", ";
        detail::dump_primitive(j[i], os);
      }
      os << "]";
    } else {
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << pad2;
        dump_json(j[i], os, indent + 2);
        if (i + 1 < j.size()) os << ",";
        os << "\n";
      }
      os << pad << "]";
    }
  } else {
    detail::dump_primitive(j, os);
  }
}

inline std::string json_to_string(const nlohmann::ordered_json& j) {
  std::ostringstream os;
  dump_json(j, os);
  os << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// StateFile
// ---------------------------------------------------------------------------

inline std::string save_state(const StateTensor& t) {
  nlohmann::ordered_json j;
  j["schema"] = kStateSchema;
  j["dims"] = t.dims().dims();
  nlohmann::ordered_json amps = nlohmann::ordered_json::array();
  for (const cplx& a : t.amplitudes())
    amps.push_back(nlohmann::ordered_json::array({a.real(), a.imag()}));
  j["amplitudes"] = std::move(amps);
  return json_to_string(j);
}

inline void save_state_file(const std::string& path, const StateTensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  out << save_state(t);
  if (!out) throw InputError("write failed: " + path);
}

inline StateTensor load_state(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j.contains("amplitudes"))
    throw InputError("state file needs 'dims' and 'amplitudes' fields");

  std::vector<int> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<std::int64_t>() < 1)
      throw InputError("dims must be positive integers");
    dims.push_back(d.get<int>());
  }
  if (dims.size() < 2) throw InputError("dims needs at least two modes");

  const auto& amps_json = j["amplitudes"];
  if (!amps_json.is_array() ||
      static_cast<std::int64_t>(amps_json.size()) != dim_product(dims))
    throw InputError("amplitude count does not match the product of dims");

  std::vector<cplx> amps;
  amps.reserve(amps_json.size());
  for (const auto& pair : amps_json) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
      throw InputError("amplitudes must be [re, im] number pairs");
    const double re = pair[0].get<double>();
    const double im = pair[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
      throw InputError("non-finite amplitude rejected");
    amps.emplace_back(re, im);
  }
  return StateTensor(DimProfile(dims), std::move(amps));
}

inline StateTensor load_state_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open state file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_state(buf.str());
}

// ---------------------------------------------------------------------------
// Digest and named-state specs
// ---------------------------------------------------------------------------

/// FNV-1a 64-bit over the raw bytes, rendered as 16 hex digits.
inline std::string digest64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct LoadedState {
  StateTensor tensor;
  std::string digest;  // file bytes for paths, canonical serialization for names
  std::string source;
};

namespace detail {

inline int parse_positive_int(const std::string& s, const char* what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw InputError(std::string("bad ") + what + ": '" + s + "'");
  }
  if (pos != s.size() || v < 1)
    throw InputError(std::string("bad ") + what + ": '" + s + "'");
  return v;
}

}  // namespace detail

inline std::vector<int> parse_dims_list(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    dims.push_back(detail::parse_positive_int(item, "dimension"));
  if (dims.size() < 2) throw InputError("need at least two comma-separated dims");
  return dims;
}

/// Accepts `bell`, `ghz:N`, `w:N`, `diag:D1,D2`, or a state-file path.
inline LoadedState parse_state_spec(const std::string& spec) {
  auto named = [&](StateTensor t) {
    std::string canonical = save_state(t);
    return LoadedState{std::move(t), digest64(canonical), spec};
  };
  if (spec == "bell") return named(make_bell());
  if (spec.rfind("ghz:", 0) == 0) {
    const int n = detail::parse_positive_int(spec.substr(4), "ghz party count");
    if (n < 2 || n > 12) throw InputError("ghz:N supports 2 <= N <= 12");
    return named(make_ghz(n));
  }
  if (spec.rfind("w:", 0) == 0) {
    const int n = detail::parse_positive_int(spec.substr(2), "w party count");
    if (n < 2 || n > 12) throw InputError("w:N supports 2 <= N <= 12");
    return named(make_w(n));
  }
  if (spec.rfind("diag:", 0) == 0) {
    std::vector<int> dims = parse_dims_list(spec.substr(5));
    if (dims.size() != 2) throw InputError("diag:D1,D2 takes exactly two dims");
    return named(diagonal_extremal_state(DimProfile(dims)));
  }

  std::ifstream in(spec, std::ios::binary);
  if (!in) throw InputError("cannot open state file: " + spec);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string bytes = buf.str();
  return LoadedState{load_state(bytes), digest64(bytes), spec};
}

}  // namespace hartree
