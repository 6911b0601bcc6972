// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "core/types.hpp"

namespace numasim {

struct LlcLine {
  Tag tag = 0;
  MoesiState state = MoesiState::Invalid;
  // Installed Shared via a cross-socket supply whose supplier kept the line
  // in Owner state.
  bool remote_shared = false;
  // 0 = MRU. Meaningful only for valid ways.
  std::uint32_t recency = 0;

  bool valid() const { return state != MoesiState::Invalid; }
};

struct CacheSet {
  explicit CacheSet(std::uint32_t assoc = 0) : ways(assoc) {}

  std::vector<LlcLine> ways;
  std::uint32_t remote_sharing_local_home_counter = 0;
  std::uint32_t remote_sharing_remote_home_counter = 0;

  std::uint32_t valid_count() const;
  // Lowest-index Invalid way, or ways.size() when the set is full.
  WayId first_invalid() const;
};

enum class PolicyKind : std::uint8_t { LruOnly, BiasedAlways, BiasedAdaptive };

const char* to_string(PolicyKind k);
// Accepts the CLI names `lru`, `biased`, `adaptive`.
PolicyKind parse_policy_kind(const std::string& name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::LruOnly;
  std::uint32_t t_local = 0;
  std::uint32_t t_remote = 0;

  // floor(A/4) and floor(A/2), each clamped to >= 1.
  static PolicyConfig with_defaults(PolicyKind kind, std::uint32_t assoc);
  void validate(std::uint32_t assoc) const;
};

enum class CounterEvent : std::uint8_t { None, IncrementLocal, IncrementRemote, ResetLocal, ResetRemote };

const char* to_string(CounterEvent e);

struct VictimDecision {
  WayId way = 0;
  bool biased = false;
  CounterEvent counter_event = CounterEvent::None;

  bool operator==(const VictimDecision&) const = default;
};

// Moves `way` to MRU, shifting every more-recent way down by one.
void touch(CacheSet& set, WayId way);

// Installs a line at MRU. remote_shared is forced off unless state is Shared.
void on_fill(CacheSet& set, WayId way, Tag tag, MoesiState state, bool remote_shared);

// Drops a line and closes the gap it leaves in the recency order.
void invalidate(CacheSet& set, WayId way);

WayId lru_way(const CacheSet& set);

// Chooses the way to evict from a full set and applies the resulting counter
// update. `way_homes[w]` is the home socket of the line in way w.
VictimDecision select_victim(CacheSet& set, SocketId local_socket, std::span<const SocketId> way_homes,
                             const PolicyConfig& cfg, bool bias_enabled);

}  // namespace numasim
