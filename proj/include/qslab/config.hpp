#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qslab/params.hpp"

namespace qslab {

struct Budgets {
  uint64_t leaf = 2000000;   // enumerated leaf cells before BudgetError
  uint64_t chains = 10000;   // sampled descent chains
  uint64_t samples = 1000;   // sampled pairs/triples per check
};

// Parsed run description. Pipeline-mode alpha is resolved at parse time so
// the hash keys the numbers actually used.
struct Config {
  Params params;
  bool pipeline_alpha = false;      // alpha came from the (d, s, epsilon) pipeline
  uint32_t alpha_bits = 64;
  bool derived_index = true;
  std::vector<uint32_t> custom_members;
  std::optional<Rational> carleson_C;  // empty = analytic constant of the ladder
  Budgets budgets;
  uint64_t seed = 1;
};

// Strict JSON parse: unknown keys, malformed rationals, or out-of-range
// values throw ConfigError naming the key. Rationals are written as
// {"num": "...", "den": "..."} with decimal strings (bare integers allowed).
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

// Deterministic byte encoding of everything that affects computation.
std::string canonical_bytes(const Config& c);
uint64_t fnv1a(const std::string& bytes);
inline uint64_t config_hash(const Config& c) { return fnv1a(canonical_bytes(c)); }
std::string hash_hex(uint64_t h);

// {"num": "...", "den": "...", "value": <double>}
nlohmann::ordered_json rational_json(const Rational& q);
nlohmann::ordered_json config_json(const Config& c);  // canonical echo for reports

// Report header carried by every output file. No clocks: reruns are
// byte-identical.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::string params_hash;
  uint64_t seed = 0;
};

nlohmann::ordered_json manifest_json(const RunManifest& m);

// Writes with a trailing newline, creating parent directories.
void write_json(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace qslab
