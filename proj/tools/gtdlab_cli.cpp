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

// gtdlab command-line shell over the C API.
//
//   gtdlab validate|oracle|run|sweep|check --config <path> --out <dir>
//          [--seeds s1,s2,...] [--workers n] [-v]
//
// Exit status: 0 success, 1 validation failure, 2 runtime failure (also bad
// usage), 3 check failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gtdlab/gtdlab.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::vector<std::uint64_t> seeds;
  int workers = 1;
  bool verbose = false;
};

int exit_code(int status) {
  switch (status) {
    case GTDLAB_OK:
      return 0;
    case GTDLAB_ERR_VALIDATION:
      return 1;
    case GTDLAB_ERR_CHECK_FAILED:
      return 3;
    default:
      return 2;
  }
}

int report_failure(const char* what, int status) {
  std::fprintf(stderr, "gtdlab %s: %s\n", what, gtdlab_last_error());
  return exit_code(status);
}

// Takes ownership of a C API string.
std::string take(char* s) {
  if (!s) return {};
  std::string out(s);
  gtdlab_free_string(s);
  return out;
}

bool write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary | std::ios::trunc);
  f << text << '\n';
  if (!f) {
    std::fprintf(stderr, "gtdlab: cannot write %s in %s\n", name.c_str(), dir.c_str());
    return false;
  }
  return true;
}

// Extracts a number following "key": in a JSON summary for a short status line.
std::string field(const std::string& json, const std::string& key) {
  const std::string needle = "\"" + key + "\": ";
  const auto pos = json.find(needle);
  if (pos == std::string::npos) return "?";
  const auto start = pos + needle.size();
  const auto end = json.find_first_of(",\n}", start);
  return json.substr(start, end - start);
}

int cmd_validate(const Options& o) {
  char* raw = nullptr;
  const int st = gtdlab_validate_file(o.config.c_str(), &raw);
  const std::string report = take(raw);
  if (!report.empty()) {
    std::cout << report << '\n';
    if (!o.out.empty() && !write_file(o.out, "validation.json", report)) return 2;
  }
  if (st != GTDLAB_OK) return report_failure("validate", st);
  return 0;
}

int with_session(const Options& o, const char* what, int (*body)(gtdlab_session*, const Options&)) {
  gtdlab_session* s = nullptr;
  int st = gtdlab_session_open_file(o.config.c_str(), &s);
  if (st != GTDLAB_OK) return report_failure(what, st);
  if (!o.seeds.empty()) st = gtdlab_session_set_seeds(s, o.seeds.data(), o.seeds.size());
  if (st == GTDLAB_OK) st = gtdlab_session_set_workers(s, o.workers);
  if (st != GTDLAB_OK) {
    gtdlab_session_close(s);
    return report_failure(what, st);
  }
  const int code = body(s, o);
  gtdlab_session_close(s);
  return code;
}

int body_oracle(gtdlab_session* s, const Options& o) {
  char* raw = nullptr;
  const int st = gtdlab_oracle(s, &raw);
  const std::string doc = take(raw);
  if (st != GTDLAB_OK) return report_failure("oracle", st);
  std::cout << doc << '\n';
  if (!o.out.empty() && !write_file(o.out, "oracle.json", doc)) return 2;
  return 0;
}

int body_run(gtdlab_session* s, const Options& o) {
  char* raw = nullptr;
  const int st = gtdlab_run(s, o.out.c_str(), &raw);
  const std::string summary = take(raw);
  if (st != GTDLAB_OK) return report_failure("run", st);
  if (o.verbose) {
    std::cout << summary << '\n';
  } else {
    std::cout << "seeds " << field(summary, "n_seeds") << ", diverged "
              << field(summary, "diverged") << ", median final dist_theta_opt "
              << field(summary, "dist_theta_opt") << "\n"
              << "wrote " << (std::filesystem::path(o.out) / "summary.json").string() << '\n';
  }
  return 0;
}

int body_sweep(gtdlab_session* s, const Options& o) {
  char* raw = nullptr;
  const int st = gtdlab_sweep(s, o.out.c_str(), &raw);
  const std::string summary = take(raw);
  if (st != GTDLAB_OK) return report_failure("sweep", st);
  if (o.verbose) std::cout << summary << '\n';
  std::cout << "cells " << field(summary, "n_cells") << "\nwrote "
            << (std::filesystem::path(o.out) / "sweep_summary.csv").string() << '\n';
  return 0;
}

int body_check(gtdlab_session* s, const Options& o) {
  char* raw = nullptr;
  const int st = gtdlab_check(s, &raw);
  const std::string report = take(raw);
  if (!report.empty()) {
    std::cout << report << '\n';
    if (!o.out.empty() && !write_file(o.out, "check_report.json", report)) return 2;
  }
  if (st != GTDLAB_OK) return report_failure("check", st);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gtdlab: off-policy gradient TD lab"};
  app.require_subcommand(1);
  Options o;
  std::string seeds_text;
  auto add_common = [&](CLI::App* sub, bool need_out) {
    sub->add_option("--config", o.config, "experiment config (JSON)")->required()->check(
        CLI::ExistingFile);
    auto* out = sub->add_option("--out", o.out, "output directory");
    if (need_out) out->required();
    sub->add_option("--seeds", seeds_text, "comma-separated seed override");
    sub->add_option("--workers", o.workers, "concurrent runs")->check(CLI::PositiveNumber);
    sub->add_flag("-v,--verbose", o.verbose, "print full JSON output");
  };
  auto* validate = app.add_subcommand("validate", "check the model and config");
  auto* oracle = app.add_subcommand("oracle", "exact or estimated reference quantities");
  auto* run = app.add_subcommand("run", "run the experiment over its seeds");
  auto* sweep = app.add_subcommand("sweep", "run every cell of the sweep grid");
  auto* check = app.add_subcommand("check", "verification checks");
  add_common(validate, false);
  add_common(oracle, false);
  add_common(run, true);
  add_common(sweep, true);
  add_common(check, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!seeds_text.empty()) {
    std::size_t start = 0;
    while (start <= seeds_text.size()) {
      const auto comma = seeds_text.find(',', start);
      const std::string tok = seeds_text.substr(start, comma - start);
      try {
        std::size_t used = 0;
        o.seeds.push_back(std::stoull(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        std::fprintf(stderr, "gtdlab: bad seed '%s'\n", tok.c_str());
        return 2;
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }

  if (*validate) return cmd_validate(o);
  if (*oracle) return with_session(o, "oracle", body_oracle);
  if (*run) return with_session(o, "run", body_run);
  if (*sweep) return with_session(o, "sweep", body_sweep);
  return with_session(o, "check", body_check);
}
