// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "core/adaptive.hpp"
#include "core/coherence.hpp"
#include "core/workload.hpp"

namespace numasim {

// Abstract per-access costs. Only the ordering carries meaning:
// llc_hit < remote_c2c <= remote_dram and local_dram < remote_dram.
struct LatencyModel {
  std::uint64_t llc_hit = 30;
  std::uint64_t remote_c2c = 150;
  std::uint64_t local_dram = 200;
  std::uint64_t remote_dram = 350;

  void validate() const;
  std::uint64_t cost(ServiceSource source) const;

  bool operator==(const LatencyModel&) const = default;
};

struct SourceCounts {
  std::uint64_t remote_c2c = 0;
  std::uint64_t local_dram = 0;
  std::uint64_t remote_dram = 0;

  std::uint64_t total() const { return remote_c2c + local_dram + remote_dram; }
  bool operator==(const SourceCounts&) const = default;
};

struct Counters {
  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  SourceCounts misses_by_source;
  std::uint64_t writebacks = 0;
  std::uint64_t bias_events = 0;
  std::uint64_t counter_resets = 0;
  std::uint64_t total_cost = 0;

  bool operator==(const Counters&) const = default;
};

struct ToggleEvent {
  SeqNo seq = 0;
  SocketId socket = 0;
  bool bias_enabled = false;

  bool operator==(const ToggleEvent&) const = default;
};

// One closed remote-miss-fraction window.
struct WindowSample {
  SeqNo seq = 0;
  SocketId socket = 0;
  std::uint64_t remote_misses = 0;
  std::uint64_t misses = 0;

  double fraction() const { return misses == 0 ? 0.0 : static_cast<double>(remote_misses) / static_cast<double>(misses); }
  bool operator==(const WindowSample&) const = default;
};

struct SimStats {
  Counters total;
  std::vector<Counters> per_socket;
  // Only actual flips of a socket's bias flag, adaptive policy only.
  std::vector<ToggleEvent> adaptive_toggles;
  // Windows are tracked under every policy so reports stay comparable.
  std::vector<WindowSample> windows;

  bool operator==(const SimStats&) const = default;
};

struct SimOptions {
  TopologyConfig topology;
  PolicyConfig policy;
  AdaptiveParams adaptive;
  LatencyModel latency;
  // Check global coherence invariants after every record.
  bool validate = false;
};

class Simulator {
 public:
  explicit Simulator(const SimOptions& opts);

  // Processes one record. Throws InternalError in validation mode if any
  // coherence invariant is broken afterwards.
  FillOutcome step(const AccessRecord& rec);

  const SimStats& stats() const { return stats_; }
  const CoherenceSystem& system() const { return system_; }
  bool bias_enabled(SocketId socket) const;
  const AdaptiveController& controller(SocketId socket) const { return controllers_.at(socket); }

 private:
  SimOptions opts_;
  CoherenceSystem system_;
  std::vector<AdaptiveController> controllers_;
  SimStats stats_;
};

SimStats run(std::span<const AccessRecord> trace, const SimOptions& opts);

struct PolicyRun {
  PolicyConfig policy;
  SimStats stats;
};

struct PolicyDelta {
  std::int64_t misses = 0;
  std::int64_t remote_c2c_misses = 0;
  std::int64_t total_cost = 0;
};

struct Comparison {
  std::vector<PolicyRun> runs;
  // Relative to runs[0]; deltas[0] is always zero.
  std::vector<PolicyDelta> deltas;
};

// Runs every policy on its own fresh system over the same trace. Runs
// execute concurrently and share no state.
Comparison compare(std::span<const AccessRecord> trace, const SimOptions& base, std::span<const PolicyConfig> policies);

}  // namespace numasim
