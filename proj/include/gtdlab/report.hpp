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

#ifndef GTDLAB_REPORT_HPP_
#define GTDLAB_REPORT_HPP_

#include <string>
#include <vector>

#include "gtdlab/config.hpp"
#include "gtdlab/sim_harness.hpp"
#include "gtdlab/verification.hpp"

namespace gtdlab {

Json to_json(const Vec& v);
Json to_json(const Mat& m);
Json to_json(const MetricValues& m);
Json to_json(const CheckReport& report);
Json to_json(const ValidationReport& report);

// Every standing condition of the model plus the outcome of a full load.
// Never throws for model or config problems; "ok" is false instead.
Json validate_document(const Json& document, const std::string& base_dir);

Json oracle_document(const ExperimentConfig& config, const OracleReference& oracle);

// Writes run_seed<seed>.csv per seed and summary.json into out_dir.
Json run_command(const ExperimentConfig& config, const std::string& out_dir, int workers);

// One cell per point of the sweep grid; cells whose config fails to load are
// skipped with the reason. Writes cell_<i>/ run outputs, sweep_summary.csv
// and sweep_summary.json.
Json sweep_command(const LoadedConfig& loaded, const std::vector<std::uint64_t>* seeds,
                   const std::string& out_dir, int workers);

// Runs the checks named in the plan; "ok" reflects CheckReport::ok().
Json check_command(const LoadedConfig& loaded);

// Medians over seeds of the final-checkpoint metrics, skipping NaN.
MetricValues median_final_metrics(const std::vector<RunRecord>& records);

}  // namespace gtdlab

#endif  // GTDLAB_REPORT_HPP_
