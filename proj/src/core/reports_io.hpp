// Copyright 2026 The xling Authors
//
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

#ifndef XLING_CORE_REPORTS_IO_HPP
#define XLING_CORE_REPORTS_IO_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "anc.hpp"
#include "overlap.hpp"
#include "report.hpp"

namespace xling {

// All writers are pure functions of their inputs: no timestamps, no worker
// counts, shortest round-trip number formatting.

std::string ilo_layer_report_json(const IloLayerReport& report, const ReportHeader& header);
// One row per language per report: layer,k,tau,metric,language,bridge,reachability,ilo
std::string ilo_reports_csv(std::span<const IloLayerReport> reports, const ReportHeader& header);
// One row per report: layer,k,tau,metric,aggregate
std::string ilo_aggregates_csv(std::span<const IloLayerReport> reports, const ReportHeader& header);
std::string curve_csv(const CurveSeries& curve, const IloParams& params,
                      const ReportHeader& header);

std::string ilo_run_json(const IloRun& run);
// Throws kInvalidReport on malformed input.
IloRun parse_ilo_run_json(std::string_view text);
IloRun read_ilo_run(const std::filesystem::path& path);

std::string anc_matrix_csv(const AncMatrix& matrix, const ReportHeader& header);
// One row per layer per group: layer,group,pairs,mean (mean "NA" when empty)
std::string group_summary_csv(std::span<const GroupSummary> summaries,
                              const ReportHeader& header);
std::string peak_report_tsv(const PeakReport& report, std::size_t n, const ReportHeader& header);

std::string delta_json(const DeltaReport& delta, const ReportHeader& baseline,
                       const ReportHeader& candidate);
// layer,scope,baseline,candidate,delta with scope "aggregate" or a language code
std::string delta_csv(const DeltaReport& delta, const ReportHeader& baseline,
                      const ReportHeader& candidate);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace xling

#endif  // XLING_CORE_REPORTS_IO_HPP
