// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>
#include <string>

#include "core/run_config.hpp"

namespace numasim {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "numasim-report/1";

// Report layout (keys always appear in this order):
//
//   schema   "numasim-report/1"
//   command  "run" | "compare"
//   config   every RunConfig key, kebab-case, typed; unset optionals are null
//   results  [{policy, t_local, t_remote, stats}]
//   deltas   compare only: [{policy, misses, remote_c2c_misses, total_cost}]
//
// stats = {accesses, hits, misses, misses_by_source{remote_c2c, local_dram,
// remote_dram}, writebacks, bias_events, counter_resets, total_cost,
// adaptive_toggles[{seq, socket, bias_enabled}], windows[{seq, socket,
// remote_misses, misses, remote_miss_fraction}], per_socket[{socket, ...}]}
ordered_json stats_to_json(const SimStats& s);
ordered_json config_to_json(const RunConfig& cfg, bool compare);

ordered_json run_report(const RunConfig& cfg, const SimStats& stats);
ordered_json compare_report(const RunConfig& cfg, const Comparison& cmp);

// Rebuilds a RunConfig from the "config" object of a report.
RunConfig config_from_json(const ordered_json& config);

// Stable serialization: two-space indent, trailing newline.
std::string render_json(const ordered_json& report);
std::string render_table(const ordered_json& report);

}  // namespace numasim
