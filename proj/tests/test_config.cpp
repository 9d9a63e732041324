#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "qslab/config.hpp"

using namespace qslab;
using nlohmann::json;

namespace {

json base_config() {
  return json::parse(R"({
    "s": {"num": "1", "den": "2"},
    "alpha": {"num": "1", "den": "2"},
    "scales": "canonical",
    "depth": 2,
    "index_set": "derived",
    "budgets": {"leaf": 2000000, "chains": 10000, "samples": 1000},
    "seed": 1
  })");
}

Config parse(const json& j) { return parse_config(j.dump()); }

}  // namespace

TEST_CASE("reference fields parse") {
  Config c = parse(base_config());
  CHECK(c.params.s.p == 1);
  CHECK(c.params.s.m == 1);
  CHECK(c.params.s.value() == Rational(1, 2));
  CHECK(c.params.alpha == Rational(1, 2));
  CHECK(c.params.depth == 2);
  CHECK(c.params.exponents == std::vector<uint64_t>{0, 4, 8});
  CHECK(c.params.dims == 2);
  CHECK(c.params.n_alpha == 0);
  CHECK(c.derived_index);
  CHECK_FALSE(c.pipeline_alpha);
  CHECK_FALSE(c.carleson_C.has_value());
  CHECK(c.budgets.leaf == 2000000);
  CHECK(c.budgets.chains == 10000);
  CHECK(c.budgets.samples == 1000);
  CHECK(c.seed == 1);
}

TEST_CASE("strict key checking") {
  json j = base_config();
  j["typo_key"] = 1;
  CHECK_THROWS_AS(parse(j), ConfigError);

  j = base_config();
  j["budgets"]["leafs"] = 5;
  CHECK_THROWS_AS(parse(j), ConfigError);

  j = base_config();
  j["index_set"] = {{"members", {1}}, {"extra", 2}};
  CHECK_THROWS_AS(parse(j), ConfigError);

  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("similarity exponent must be dyadic in (0,1)") {
  json j = base_config();
  j["s"] = {{"num", "1"}, {"den", "3"}};
  CHECK_THROWS_AS(parse(j), ConfigError);
  j["s"] = {{"num", "1"}, {"den", "1"}};
  CHECK_THROWS_AS(parse(j), ConfigError);
  j["s"] = {{"num", "0"}, {"den", "2"}};
  CHECK_THROWS_AS(parse(j), ConfigError);
  j["s"] = {{"num", "3"}, {"den", "4"}};
  Config c = parse(j);
  CHECK(c.params.s.value() == Rational(3, 4));
}

TEST_CASE("oscillation amplitude range") {
  json j = base_config();
  j["alpha"] = 0;
  CHECK(parse(j).params.alpha == 0);
  j["alpha"] = 1;
  CHECK_THROWS_AS(parse(j), ConfigError);
  j["alpha"] = {{"num", "-1"}, {"den", "8"}};
  CHECK_THROWS_AS(parse(j), ConfigError);
  j["alpha"] = "bogus";
  CHECK_THROWS_AS(parse(j), ConfigError);
}

TEST_CASE("pipeline amplitude resolution") {
  json j = base_config();
  j["alpha"] = "pipeline";
  j["depth"] = 3;
  j["epsilon"] = {{"num", "1"}, {"den", "2"}};
  Config c = parse(j);
  CHECK(c.pipeline_alpha);
  Pipeline pip = derive_pipeline(2, {1, 1}, Rational(1, 2));
  CHECK(c.params.alpha == pip.alpha);
  CHECK(c.params.cover_M == pip.M);  // backfilled
  // explicit cover_M wins
  j["cover_M"] = 5;
  CHECK(parse(j).params.cover_M == 5);
}

TEST_CASE("custom scales and members") {
  json j = base_config();
  j["scales"] = {0, 2};
  j.erase("depth");
  j["index_set"] = {{"members", {1}}};
  Config c = parse(j);
  CHECK(c.params.scale_mode == ScaleMode::custom);
  CHECK(c.params.exponents == std::vector<uint64_t>{0, 2});
  CHECK(c.params.depth == 1);
  CHECK_FALSE(c.derived_index);
  CHECK(c.custom_members == std::vector<uint32_t>{1});

  j["depth"] = 1;
  CHECK(parse(j).params.depth == 1);
  j["depth"] = 2;
  CHECK_THROWS_AS(parse(j), ConfigError);
  j.erase("depth");
  j["scales"] = {0};
  CHECK_THROWS_AS(parse(j), ConfigError);
  j["scales"] = "weekly";
  CHECK_THROWS_AS(parse(j), ConfigError);
  j["scales"] = {0, 2};
  j["index_set"] = {{"members", {0}}};
  CHECK_THROWS_AS(parse(j), ConfigError);
}

TEST_CASE("series constant override") {
  json j = base_config();
  j["carleson_C"] = {{"num", "20"}, {"den", "1"}};
  Config c = parse(j);
  REQUIRE(c.carleson_C.has_value());
  CHECK(*c.carleson_C == 20);
  j["carleson_C"] = {{"num", "0"}, {"den", "1"}};
  CHECK_THROWS_AS(parse(j), ConfigError);
}

TEST_CASE("canonical bytes key every effective input") {
  Config a = parse(base_config());
  Config b = parse(base_config());
  CHECK(canonical_bytes(a) == canonical_bytes(b));
  CHECK(config_hash(a) == config_hash(b));

  json j = base_config();
  j["seed"] = 2;
  CHECK(canonical_bytes(parse(j)) != canonical_bytes(a));
  j = base_config();
  j["budgets"]["leaf"] = 999;
  CHECK(canonical_bytes(parse(j)) != canonical_bytes(a));
  j = base_config();
  j["alpha"] = {{"num", "1"}, {"den", "4"}};
  CHECK(config_hash(parse(j)) != config_hash(a));
}

TEST_CASE("hashing primitives are the reference fnv-1a") {
  // reference vectors of 64-bit FNV-1a
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
  CHECK(hash_hex(0) == "0000000000000000");
  CHECK(hash_hex(0xaf63dc4c8601ec8cull) == "af63dc4c8601ec8c");
}

TEST_CASE("rational echo carries exact and float forms") {
  nlohmann::ordered_json j = rational_json(Rational(-3, 4));
  CHECK(j.at("num") == "-3");
  CHECK(j.at("den") == "4");
  CHECK(j.at("value") == -0.75);
}

TEST_CASE("report writing round trip") {
  nlohmann::ordered_json j;
  j["b"] = 1;
  j["a"] = {{"nested", "x"}};
  std::string path = "cfgtest_dir/out.json";
  write_json(path, j);
  std::ifstream is(path);
  REQUIRE(is.good());
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  CHECK(text.back() == '\n');
  CHECK(nlohmann::ordered_json::parse(text) == j);
  // insertion order survives, keys are not resorted
  CHECK(text.find("\"b\"") < text.find("\"a\""));
  std::remove(path.c_str());
  std::remove("cfgtest_dir");

  // the report echo spells out everything the run used
  Config c = parse(base_config());
  nlohmann::ordered_json echo = config_json(c);
  CHECK(echo.at("seed") == 1);
  CHECK(echo.at("scale_mode") == "canonical");
  CHECK(echo.at("scales") == std::vector<uint64_t>{0, 4, 8});
  CHECK(echo.at("index_set") == "derived");
  CHECK(echo.at("alpha").at("value") == 0.5);

  RunManifest m{"measure", "cfg.json", hash_hex(config_hash(c)), c.seed};
  nlohmann::ordered_json mj = manifest_json(m);
  CHECK(mj.at("command") == "measure");
  CHECK(mj.at("params_hash").get<std::string>().size() == 16);
}
