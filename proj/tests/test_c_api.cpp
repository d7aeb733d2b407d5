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

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "gtdlab/gtdlab.h"

namespace {

const char* kConfig = R"({
  "model": {
    "target_P": [[0.5, 0.5], [0.5, 0.5]],
    "behavior_P": [[0.5, 0.5], [0.5, 0.5]],
    "discount": 0.9,
    "reward_mean": 1.0,
    "features": [[1], [1]]
  },
  "lambda": {"kind": "state", "values": [0, 0]},
  "algorithm": {
    "variant": "GTDa2TS", "r_theta": 20, "r_x": "sufficient",
    "stepsize": {"alpha": {"kind": "power", "a": 1, "c": 0.8},
                 "beta": {"kind": "power", "a": 1, "c": 0.6}}
  },
  "horizon": 1000, "seeds": [1], "checkpoint_every": 100,
  "check": {"stationary": {"horizon": 20000}, "reductions": {"horizon": 500},
            "trace_conditions": {"steps": 10000, "samples": 1000}}
})";

std::string take(char* s) {
  std::string out = s ? s : "";
  gtdlab_free_string(s);
  return out;
}

}  // namespace

TEST_SUITE("c_api") {

TEST_CASE("session lifecycle and model quantities") {
  gtdlab_session* s = nullptr;
  REQUIRE(gtdlab_session_open_json(kConfig, nullptr, &s) == GTDLAB_OK);
  int n = 0, d = 0;
  CHECK(gtdlab_session_dims(s, &n, &d) == GTDLAB_OK);
  CHECK(n == 2);
  CHECK(d == 1);
  double v[2];
  size_t count = 0;
  CHECK(gtdlab_value_function(s, v, 2, &count) == GTDLAB_OK);
  CHECK(count == 2);
  CHECK(v[0] == doctest::Approx(10.0));
  CHECK(gtdlab_stationary_distribution(s, v, 1, &count) == GTDLAB_ERR_INVALID_ARGUMENT);
  CHECK(gtdlab_stationary_distribution(s, v, 2, &count) == GTDLAB_OK);
  CHECK(v[1] == doctest::Approx(0.5));

  char* doc = nullptr;
  CHECK(gtdlab_oracle(s, &doc) == GTDLAB_OK);
  const auto oracle = nlohmann::json::parse(take(doc));
  CHECK(oracle["mdtd"]["theta_td"][0].get<double>() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(oracle["A"][0][0].get<double>() == doctest::Approx(-0.1).epsilon(1e-12));

  const uint64_t seeds[] = {3, 4};
  CHECK(gtdlab_session_set_seeds(s, seeds, 2) == GTDLAB_OK);
  CHECK(gtdlab_session_set_seeds(s, seeds, 0) == GTDLAB_ERR_INVALID_ARGUMENT);
  CHECK(gtdlab_session_set_workers(s, 2) == GTDLAB_OK);
  const auto dir = std::filesystem::temp_directory_path() / "gtdlab_c_api_run";
  std::filesystem::remove_all(dir);
  char* summary = nullptr;
  CHECK(gtdlab_run(s, dir.string().c_str(), &summary) == GTDLAB_OK);
  CHECK(take(summary).find("\"n_seeds\": 2") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "run_seed3.csv"));
  CHECK(std::filesystem::exists(dir / "run_seed4.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));

  CHECK(gtdlab_sweep(s, dir.string().c_str(), &summary) == GTDLAB_ERR_INVALID_ARGUMENT);

  char* report = nullptr;
  CHECK(gtdlab_check(s, &report) == GTDLAB_OK);
  CHECK(take(report).find("\"ok\": true") != std::string::npos);
  gtdlab_session_close(s);
}

TEST_CASE("errors map onto status codes") {
  gtdlab_session* s = nullptr;
  CHECK(gtdlab_session_open_json("{ not json", nullptr, &s) == GTDLAB_ERR_VALIDATION);
  CHECK(s == nullptr);
  CHECK(std::string(gtdlab_last_error()).find("<json>:1:") == 0);
  CHECK(gtdlab_session_open_file("/nonexistent/config.json", &s) == GTDLAB_ERR_RUNTIME);
  CHECK(gtdlab_session_open_json(nullptr, nullptr, &s) == GTDLAB_ERR_INVALID_ARGUMENT);

  std::string bad = kConfig;
  bad.replace(bad.find("[[0.5, 0.5], [0.5, 0.5]]"), 24, "[[0.5, 0.5], [0.5, 0.6]]");
  CHECK(gtdlab_session_open_json(bad.c_str(), nullptr, &s) == GTDLAB_ERR_VALIDATION);
  CHECK(std::string(gtdlab_last_error()).find("row 1") != std::string::npos);
  char* report = nullptr;
  CHECK(gtdlab_validate_json(bad.c_str(), nullptr, &report) == GTDLAB_ERR_VALIDATION);
  CHECK(take(report).find("target_rows_stochastic") != std::string::npos);
  CHECK(gtdlab_validate_json(kConfig, nullptr, &report) == GTDLAB_OK);
  take(report);
  CHECK(std::string(gtdlab_version()) == "0.1.0");
}

TEST_CASE("failing checks return the check status") {
  std::string strict = kConfig;
  strict.replace(strict.find("\"horizon\": 20000"), 16, "\"horizon\": 20000, \"z\": 1e-9");
  // A sticky target makes rho random; the uniform one keeps every average exact.
  strict.replace(strict.find("[[0.5, 0.5], [0.5, 0.5]]"), 24, "[[0.9, 0.1], [0.1, 0.9]]");
  gtdlab_session* s = nullptr;
  REQUIRE(gtdlab_session_open_json(strict.c_str(), nullptr, &s) == GTDLAB_OK);
  char* report = nullptr;
  CHECK(gtdlab_check(s, &report) == GTDLAB_ERR_CHECK_FAILED);
  CHECK(take(report).find("\"ok\": false") != std::string::npos);
  gtdlab_session_close(s);
}

}
