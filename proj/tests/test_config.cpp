// Copyright 2026 The gtdlab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "gtdlab/config.hpp"
#include "gtdlab/error.hpp"
#include "gtdlab/report.hpp"

using namespace gtdlab;

namespace {

Json minimal() {
  return Json::parse(R"({
    "model": {
      "n_states": 2,
      "target_P": [[0.9, 0.1], [0.1, 0.9]],
      "behavior_P": 0.5,
      "discount": 0.8,
      "reward_mean": [[1, 2], [1, 2]],
      "features": [[1], [2]]
    },
    "lambda": {"kind": "state", "values": [0.3, 0.7]},
    "algorithm": {
      "variant": "GTDa2TS", "r_theta": 20, "r_x": "sufficient",
      "stepsize": {"alpha": {"kind": "power", "a": 1, "c": 0.8},
                   "beta": {"kind": "power", "a": 1, "c": 0.6}}
    },
    "horizon": 100, "seeds": [1, 2], "checkpoint_every": 10
  })");
}

std::string load_error(const Json& doc) {
  try {
    load_config(doc, "");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal document loads") {
  const LoadedConfig c = load_config(minimal(), "");
  CHECK(c.experiment.mdp.n_states() == 2);
  CHECK(c.experiment.mdp.behavior_P(1, 0) == 0.5);
  CHECK(c.experiment.seeds.size() == 2);
  CHECK(c.experiment.algorithm.r_x == doctest::Approx((1320.0 / 1211.0 * 20 + 23025.0 / 4844.0) / 2.5));
  CHECK(c.sweep.empty());
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}", "cfg.json");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("cfg.json:3:", 0) == 0);
  }
}

TEST_CASE("schema errors name the key") {
  Json d = minimal();
  d["algorithm"]["stepsize"]["alpha"]["c"] = "fast";
  CHECK(load_error(d).find("algorithm.stepsize.alpha.c") != std::string::npos);

  d = minimal();
  d["algorithm"]["r_thta"] = 3;
  CHECK(load_error(d).find("algorithm.r_thta: unknown key") != std::string::npos);

  d = minimal();
  d["model"]["target_P"][1] = Json::array({0.1, 0.8});
  const std::string row = load_error(d);
  CHECK(row.find("target_rows_stochastic") != std::string::npos);
  CHECK(row.find("row 1") != std::string::npos);

  d = minimal();
  d["model"]["target_P"][1] = Json::array({0.1});
  CHECK(load_error(d).find("model.target_P[1]") != std::string::npos);

  d = minimal();
  d["lambda"] = Json::parse(R"({"kind": "state", "values": [0.3]})");
  CHECK(load_error(d).find("lambda") != std::string::npos);
}

TEST_CASE("stepsize compatibility is enforced at load") {
  Json d = minimal();
  d["algorithm"]["stepsize"]["alpha"]["c"] = 0.6;
  CHECK(load_error(d).find("stepsize compatibility") != std::string::npos);
  d["algorithm"]["variant"] = "GTDa1TS";
  CHECK(load_error(d).empty());
}

TEST_CASE("sweep paths") {
  Json d = minimal();
  set_json_path(&d, "algorithm.K", 4);
  CHECK(d["algorithm"]["K"] == 4);
  set_json_path(&d, "new.deep.key", "v");
  CHECK(d["new"]["deep"]["key"] == "v");
  CHECK_THROWS_AS(set_json_path(&d, "horizon.x", 1), ConfigError);
  d = minimal();
  d["sweep"] = Json::parse(R"({"axes": [{"path": "algorithm.K", "values": [1, 4, 16]}]})");
  d["algorithm"]["variant"] = "BiasedGTDa2TS";
  d["algorithm"]["K"] = 1;
  const LoadedConfig c = load_config(d, "");
  REQUIRE(c.sweep.size() == 1);
  CHECK(c.sweep[0].values.size() == 3);
}

TEST_CASE("validation report lists every condition") {
  Json d = minimal();
  d["model"]["discount"] = 1.0;
  d["model"]["target_P"] = Json::parse("[[1, 0], [0, 1]]");
  const Json r = validate_document(d, "");
  CHECK_FALSE(r["ok"].get<bool>());
  CHECK(r["model"]["conditions"].size() == 7);
  bool spectral_failed = false;
  for (const auto& c : r["model"]["conditions"]) {
    if (c["name"] == "spectral_radius_below_one") spectral_failed = !c["passed"].get<bool>();
  }
  CHECK(spectral_failed);
}

TEST_CASE("check section defaults and overrides") {
  Json d = minimal();
  LoadedConfig c = load_config(d, "");
  CHECK(c.check.stationary);
  CHECK(c.check.trace_options.coupling_lambda.size() == 2);
  d["check"] = Json::parse(R"({"stationary": false, "gradients": {"points": 3}})");
  c = load_config(d, "");
  CHECK_FALSE(c.check.stationary);
  CHECK(c.check.gradient_points == 3);
}

}
