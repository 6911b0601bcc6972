// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/sim_engine.hpp"

namespace numasim {

enum class ReportFormat : std::uint8_t { Json, Table };

// Everything needed to reproduce a run. Keys accepted by set() are the CLI
// flag names without the leading dashes.
struct RunConfig {
  TopologyConfig topology;
  PolicyKind policy = PolicyKind::LruOnly;
  // compare only; the first entry is the delta baseline
  std::vector<PolicyKind> policies{PolicyKind::LruOnly, PolicyKind::BiasedAlways, PolicyKind::BiasedAdaptive};
  std::optional<std::uint32_t> t_local;
  std::optional<std::uint32_t> t_remote;
  AdaptiveParams adaptive;
  LatencyModel latency;

  std::optional<std::string> trace_path;
  std::optional<GeneratorKind> gen_kind;
  std::uint64_t gen_lines = 64;
  std::uint64_t gen_iterations = 16;
  std::vector<SocketPair> gen_pairs;
  std::optional<SocketId> gen_home;
  std::uint64_t seed = 1;

  ReportFormat report = ReportFormat::Table;
  bool validate_mode = false;

  // Throws ConfigError for unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);
  // key=value per line; '#' comments and blank lines are ignored.
  void load(std::istream& in);

  static const std::vector<std::string>& keys();

  PolicyConfig policy_config(PolicyKind kind) const;
  GeneratorSpec generator_spec() const;
  SimOptions sim_options(PolicyKind kind) const;

  // Checks every sub-config. Does not require a trace source.
  void validate() const;
  // Exactly one of trace_path / gen_kind must be present.
  void require_single_trace_source() const;
};

}  // namespace numasim
