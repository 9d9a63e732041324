#include "qslab/config.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace qslab {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError("config key \"" + key + "\": " + what);
}

Rational rational_field(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_number_integer()) return Rational(static_cast<long>(v.get<int64_t>()));
  if (!v.is_object()) bad(key, "expected integer or {num, den}");
  for (auto it = v.begin(); it != v.end(); ++it)
    if (it.key() != "num" && it.key() != "den") bad(key, "unknown field " + it.key());
  auto part = [&](const char* name) -> BigInt {
    if (!v.contains(name)) bad(key, std::string("missing ") + name);
    const json& p = v.at(name);
    try {
      if (p.is_number_integer()) return BigInt(static_cast<long>(p.get<int64_t>()));
      if (p.is_string()) return BigInt(p.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
    bad(key, std::string(name) + " must be a decimal integer or string");
  };
  BigInt num = part("num"), den = part("den");
  if (den == 0) bad(key, "zero denominator");
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Dyadic dyadic_field(const json& j, const std::string& key) {
  Rational q = rational_field(j, key);
  if (q <= 0 || q >= 1) bad(key, "must lie in (0,1)");
  BigInt den = q.get_den();
  uint32_t m = 0;
  while (mpz_even_p(den.get_mpz_t())) {
    den /= 2;
    ++m;
  }
  if (den != 1) bad(key, "denominator must be a power of 2");
  if (!q.get_num().fits_ulong_p()) bad(key, "numerator too large");
  return Dyadic{q.get_num().get_ui(), m == 0 ? 1 : m};
}

uint64_t uint_field(const json& j, const std::string& key, uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0))
    bad(key, "expected a non-negative integer");
  return v.get<uint64_t>();
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown config key \"" + (where.empty() ? it.key() : where + "." + it.key()) + "\"");
}

}  // namespace

Config parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  check_keys(j, {"s", "alpha", "alpha_bits", "scales", "depth", "n_alpha", "dims", "cover_M",
                 "epsilon", "index_set", "carleson_C", "budgets", "seed"},
             "");

  Config c;
  if (!j.contains("s")) throw ConfigError("config key \"s\" is required");
  c.params.s = dyadic_field(j, "s");

  if (j.contains("epsilon")) {
    c.params.epsilon = rational_field(j, "epsilon");
    if (c.params.epsilon <= 0 || c.params.epsilon >= 1) bad("epsilon", "must lie in (0,1)");
  }
  c.params.dims = static_cast<uint32_t>(uint_field(j, "dims", 2));
  if (c.params.dims < 2) bad("dims", "must be at least 2");
  c.params.n_alpha = static_cast<uint32_t>(uint_field(j, "n_alpha", 0));
  c.params.cover_M = static_cast<uint32_t>(uint_field(j, "cover_M", 0));
  c.alpha_bits = static_cast<uint32_t>(uint_field(j, "alpha_bits", 64));

  if (!j.contains("alpha")) throw ConfigError("config key \"alpha\" is required");
  if (j.at("alpha").is_string()) {
    if (j.at("alpha").get<std::string>() != "pipeline")
      bad("alpha", "string form must be \"pipeline\"");
    c.pipeline_alpha = true;
    Pipeline pip = derive_pipeline(c.params.dims, c.params.s, c.params.epsilon, c.alpha_bits);
    c.params.alpha = pip.alpha;
    if (c.params.cover_M == 0) c.params.cover_M = pip.M;
  } else {
    c.params.alpha = rational_field(j, "alpha");
    if (c.params.alpha < 0 || c.params.alpha >= 1) bad("alpha", "must lie in [0,1)");
  }

  if (!j.contains("scales")) throw ConfigError("config key \"scales\" is required");
  const json& sc = j.at("scales");
  if (sc.is_string()) {
    if (sc.get<std::string>() != "canonical") bad("scales", "string form must be \"canonical\"");
    if (!j.contains("depth")) throw ConfigError("canonical scales need \"depth\"");
    c.params.depth = static_cast<uint32_t>(uint_field(j, "depth", 0));
    if (c.params.depth == 0) bad("depth", "must be at least 1");
    c.params.scale_mode = ScaleMode::canonical;
    c.params.exponents = canonical_exponents(c.params.s.m, c.params.depth);
  } else if (sc.is_array()) {
    c.params.scale_mode = ScaleMode::custom;
    for (const json& e : sc) {
      if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<int64_t>() >= 0))
        bad("scales", "entries must be non-negative integers");
      c.params.exponents.push_back(e.get<uint64_t>());
    }
    if (c.params.exponents.size() < 2) bad("scales", "need at least e_0 and e_1");
    c.params.depth = static_cast<uint32_t>(c.params.exponents.size() - 1);
    if (j.contains("depth") && uint_field(j, "depth", 0) != c.params.depth)
      bad("depth", "does not match the scale list");
  } else {
    bad("scales", "expected \"canonical\" or an array");
  }

  if (j.contains("index_set")) {
    const json& is = j.at("index_set");
    if (is.is_string()) {
      if (is.get<std::string>() != "derived") bad("index_set", "string form must be \"derived\"");
    } else if (is.is_object()) {
      check_keys(is, {"members"}, "index_set");
      if (!is.contains("members") || !is.at("members").is_array())
        bad("index_set", "custom form needs a members array");
      c.derived_index = false;
      for (const json& e : is.at("members")) {
        if (!e.is_number_integer() || e.get<int64_t>() <= 0 ||
            e.get<int64_t>() > std::numeric_limits<uint32_t>::max())
          bad("index_set", "members must be positive integers");
        c.custom_members.push_back(static_cast<uint32_t>(e.get<uint64_t>()));
      }
    } else {
      bad("index_set", "expected \"derived\" or {members: [...]}");
    }
  }

  if (j.contains("carleson_C")) {
    Rational C = rational_field(j, "carleson_C");
    if (C <= 0) bad("carleson_C", "must be positive");
    c.carleson_C = C;
  }

  if (j.contains("budgets")) {
    const json& b = j.at("budgets");
    if (!b.is_object()) bad("budgets", "expected an object");
    check_keys(b, {"leaf", "chains", "samples"}, "budgets");
    c.budgets.leaf = uint_field(b, "leaf", c.budgets.leaf);
    c.budgets.chains = uint_field(b, "chains", c.budgets.chains);
    c.budgets.samples = uint_field(b, "samples", c.budgets.samples);
  }
  c.seed = uint_field(j, "seed", 1);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_bytes(const Config& c) {
  std::ostringstream os;
  os << "s=" << c.params.s.p << "/2^" << c.params.s.m << ";alpha=" << rat_str(c.params.alpha)
     << ";mode=" << (c.params.scale_mode == ScaleMode::canonical ? "canonical" : "custom")
     << ";e=";
  for (size_t i = 0; i < c.params.exponents.size(); ++i)
    os << (i ? "," : "") << c.params.exponents[i];
  os << ";n_alpha=" << c.params.n_alpha << ";dims=" << c.params.dims
     << ";depth=" << c.params.depth << ";M=" << c.params.cover_M
     << ";eps=" << rat_str(c.params.epsilon) << ";J=";
  if (c.derived_index) {
    os << "derived";
  } else {
    for (size_t i = 0; i < c.custom_members.size(); ++i)
      os << (i ? "," : "") << c.custom_members[i];
  }
  os << ";C=" << (c.carleson_C ? rat_str(*c.carleson_C) : "auto")
     << ";leaf=" << c.budgets.leaf << ";chains=" << c.budgets.chains
     << ";samples=" << c.budgets.samples << ";seed=" << c.seed;
  return os.str();
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

nlohmann::ordered_json rational_json(const Rational& q) {
  ordered_json j;
  j["num"] = num_str(q);
  j["den"] = den_str(q);
  j["value"] = to_double(q);
  return j;
}

nlohmann::ordered_json config_json(const Config& c) {
  ordered_json j;
  j["s"] = rational_json(c.params.s.value());
  j["alpha"] = rational_json(c.params.alpha);
  if (c.pipeline_alpha) j["alpha_source"] = "pipeline";
  j["scales"] = c.params.exponents;
  j["scale_mode"] = c.params.scale_mode == ScaleMode::canonical ? "canonical" : "custom";
  j["depth"] = c.params.depth;
  j["n_alpha"] = c.params.n_alpha;
  j["dims"] = c.params.dims;
  j["cover_M"] = c.params.cover_M;
  j["epsilon"] = rational_json(c.params.epsilon);
  if (c.derived_index)
    j["index_set"] = "derived";
  else
    j["index_set"] = ordered_json{{"members", c.custom_members}};
  if (c.carleson_C) j["carleson_C"] = rational_json(*c.carleson_C);
  j["budgets"] = ordered_json{
      {"leaf", c.budgets.leaf}, {"chains", c.budgets.chains}, {"samples", c.budgets.samples}};
  j["seed"] = c.seed;
  return j;
}

nlohmann::ordered_json manifest_json(const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["config"] = m.config_path;
  j["params_hash"] = m.params_hash;
  j["seed"] = m.seed;
  return j;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw CheckError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qslab
