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

#include "gtdlab/gtdlab.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "gtdlab/config.hpp"
#include "gtdlab/error.hpp"
#include "gtdlab/report.hpp"

struct gtdlab_session {
  gtdlab::LoadedConfig loaded;
  bool seeds_overridden = false;
  int workers = 1;
};

namespace {

thread_local std::string g_last_error;

int status_for(const gtdlab::Error& e) {
  switch (e.kind()) {
    case gtdlab::ErrorKind::kDimension:
    case gtdlab::ErrorKind::kValidation:
    case gtdlab::ErrorKind::kConfig:
      return GTDLAB_ERR_VALIDATION;
    case gtdlab::ErrorKind::kNumerical:
    case gtdlab::ErrorKind::kIo:
      return GTDLAB_ERR_RUNTIME;
  }
  return GTDLAB_ERR_RUNTIME;
}

template <class F>
int guard(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const gtdlab::Error& e) {
    g_last_error = e.what();
    return status_for(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GTDLAB_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return GTDLAB_ERR_RUNTIME;
  }
}

int invalid(const char* message) {
  g_last_error = message;
  return GTDLAB_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int copy_vector(const gtdlab::Vec& v, double* out, size_t cap, size_t* n) {
  if (n) *n = static_cast<size_t>(v.size());
  if (out == nullptr) return GTDLAB_OK;
  if (cap < static_cast<size_t>(v.size())) return invalid("output buffer too small");
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v(i);
  return GTDLAB_OK;
}

int validate_impl(const gtdlab::Json& doc, const std::string& base_dir, char** report_json) {
  const gtdlab::Json report = gtdlab::validate_document(doc, base_dir);
  *report_json = dup_string(report.dump(2));
  if (report["ok"].get<bool>()) return GTDLAB_OK;
  if (report.contains("error")) {
    g_last_error = report["error"].get<std::string>();
  } else {
    g_last_error = "model violates a standing condition";
  }
  return GTDLAB_ERR_VALIDATION;
}

}  // namespace

extern "C" {

const char* gtdlab_version(void) { return "0.1.0"; }

const char* gtdlab_last_error(void) { return g_last_error.c_str(); }

void gtdlab_free_string(char* s) { std::free(s); }

int gtdlab_session_open_file(const char* path, gtdlab_session** out) {
  if (!path || !out) return invalid("null argument");
  *out = nullptr;
  return guard([&] {
    auto s = std::make_unique<gtdlab_session>();
    s->loaded = gtdlab::load_config_file(path);
    *out = s.release();
    return GTDLAB_OK;
  });
}

int gtdlab_session_open_json(const char* json, const char* base_dir, gtdlab_session** out) {
  if (!json || !out) return invalid("null argument");
  *out = nullptr;
  return guard([&] {
    auto s = std::make_unique<gtdlab_session>();
    s->loaded = gtdlab::load_config(gtdlab::parse_json_text(json, "<json>"),
                                    base_dir ? base_dir : "");
    *out = s.release();
    return GTDLAB_OK;
  });
}

void gtdlab_session_close(gtdlab_session* session) { delete session; }

int gtdlab_session_set_seeds(gtdlab_session* session, const uint64_t* seeds, size_t n) {
  if (!session || (!seeds && n > 0)) return invalid("null argument");
  if (n == 0) return invalid("at least one seed is required");
  session->loaded.experiment.seeds.assign(seeds, seeds + n);
  session->seeds_overridden = true;
  return GTDLAB_OK;
}

int gtdlab_session_set_workers(gtdlab_session* session, int workers) {
  if (!session) return invalid("null argument");
  session->workers = workers < 1 ? 1 : workers;
  return GTDLAB_OK;
}

int gtdlab_session_dims(const gtdlab_session* session, int* n_states, int* feature_dim) {
  if (!session) return invalid("null argument");
  if (n_states) *n_states = session->loaded.experiment.mdp.n_states();
  if (feature_dim) *feature_dim = session->loaded.experiment.features.dim();
  return GTDLAB_OK;
}

int gtdlab_validate_file(const char* path, char** report_json) {
  if (!path || !report_json) return invalid("null argument");
  *report_json = nullptr;
  return guard([&] {
    return validate_impl(gtdlab::read_json_file(path),
                         std::filesystem::path(path).parent_path().string(), report_json);
  });
}

int gtdlab_validate_json(const char* json, const char* base_dir, char** report_json) {
  if (!json || !report_json) return invalid("null argument");
  *report_json = nullptr;
  return guard([&] {
    return validate_impl(gtdlab::parse_json_text(json, "<json>"), base_dir ? base_dir : "",
                         report_json);
  });
}

int gtdlab_oracle(gtdlab_session* session, char** oracle_json) {
  if (!session || !oracle_json) return invalid("null argument");
  *oracle_json = nullptr;
  return guard([&] {
    const auto& c = session->loaded.experiment;
    const gtdlab::OracleReference ref = gtdlab::compute_oracle(c);
    *oracle_json = dup_string(gtdlab::oracle_document(c, ref).dump(2));
    return GTDLAB_OK;
  });
}

int gtdlab_run(gtdlab_session* session, const char* out_dir, char** summary_json) {
  if (!session || !out_dir) return invalid("null argument");
  if (summary_json) *summary_json = nullptr;
  return guard([&] {
    const gtdlab::Json summary =
        gtdlab::run_command(session->loaded.experiment, out_dir, session->workers);
    if (summary_json) *summary_json = dup_string(summary.dump(2));
    return GTDLAB_OK;
  });
}

int gtdlab_sweep(gtdlab_session* session, const char* out_dir, char** summary_json) {
  if (!session || !out_dir) return invalid("null argument");
  if (summary_json) *summary_json = nullptr;
  if (session->loaded.sweep.empty()) return invalid("config has no sweep axes");
  return guard([&] {
    const auto* seeds =
        session->seeds_overridden ? &session->loaded.experiment.seeds : nullptr;
    const gtdlab::Json summary =
        gtdlab::sweep_command(session->loaded, seeds, out_dir, session->workers);
    if (summary_json) *summary_json = dup_string(summary.dump(2));
    return GTDLAB_OK;
  });
}

int gtdlab_check(gtdlab_session* session, char** report_json) {
  if (!session || !report_json) return invalid("null argument");
  *report_json = nullptr;
  return guard([&] {
    const gtdlab::Json report = gtdlab::check_command(session->loaded);
    *report_json = dup_string(report.dump(2));
    if (report["ok"].get<bool>()) return static_cast<int>(GTDLAB_OK);
    g_last_error = std::to_string(report["failures"].get<int>()) + " check(s) failed";
    return static_cast<int>(GTDLAB_ERR_CHECK_FAILED);
  });
}

int gtdlab_stationary_distribution(const gtdlab_session* session, double* out, size_t cap,
                                   size_t* n) {
  if (!session) return invalid("null argument");
  return guard([&] {
    return copy_vector(gtdlab::stationary_distribution(session->loaded.experiment.mdp), out,
                       cap, n);
  });
}

int gtdlab_value_function(const gtdlab_session* session, double* out, size_t cap, size_t* n) {
  if (!session) return invalid("null argument");
  return guard([&] {
    return copy_vector(gtdlab::true_value_function(session->loaded.experiment.mdp), out, cap,
                       n);
  });
}

}  // extern "C"
