// SPDX-License-Identifier: Apache-2.0

#include "core/replacement_policy.hpp"

#include <algorithm>
#include <optional>

namespace numasim {

std::uint32_t CacheSet::valid_count() const {
  return static_cast<std::uint32_t>(std::count_if(ways.begin(), ways.end(), [](const LlcLine& l) { return l.valid(); }));
}

WayId CacheSet::first_invalid() const {
  for (WayId w = 0; w < ways.size(); ++w)
    if (!ways[w].valid()) return w;
  return static_cast<WayId>(ways.size());
}

const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::LruOnly: return "lru";
    case PolicyKind::BiasedAlways: return "biased";
    case PolicyKind::BiasedAdaptive: return "adaptive";
  }
  return "?";
}

PolicyKind parse_policy_kind(const std::string& name) {
  if (name == "lru") return PolicyKind::LruOnly;
  if (name == "biased") return PolicyKind::BiasedAlways;
  if (name == "adaptive") return PolicyKind::BiasedAdaptive;
  throw ConfigError("unknown policy '" + name + "' (expected lru, biased or adaptive)");
}

const char* to_string(CounterEvent e) {
  switch (e) {
    case CounterEvent::None: return "none";
    case CounterEvent::IncrementLocal: return "increment_local";
    case CounterEvent::IncrementRemote: return "increment_remote";
    case CounterEvent::ResetLocal: return "reset_local";
    case CounterEvent::ResetRemote: return "reset_remote";
  }
  return "?";
}

PolicyConfig PolicyConfig::with_defaults(PolicyKind kind, std::uint32_t assoc) {
  return PolicyConfig{kind, std::max(assoc / 4, 1u), std::max(assoc / 2, 1u)};
}

void PolicyConfig::validate(std::uint32_t assoc) const {
  if (t_local < 1 || t_local > assoc) throw ConfigError("t-local must be in [1, assoc]");
  if (t_remote < 1 || t_remote > assoc) throw ConfigError("t-remote must be in [1, assoc]");
}

void touch(CacheSet& set, WayId way) {
  if (way >= set.ways.size() || !set.ways[way].valid()) throw InternalError("touch on an invalid way");
  const std::uint32_t old_rank = set.ways[way].recency;
  for (auto& l : set.ways)
    if (l.valid() && l.recency < old_rank) ++l.recency;
  set.ways[way].recency = 0;
}

void on_fill(CacheSet& set, WayId way, Tag tag, MoesiState state, bool remote_shared) {
  if (way >= set.ways.size()) throw InternalError("fill way out of range");
  if (set.ways[way].valid()) invalidate(set, way);
  for (auto& l : set.ways)
    if (l.valid()) ++l.recency;
  set.ways[way] = LlcLine{tag, state, remote_shared && state == MoesiState::Shared, 0};
}

void invalidate(CacheSet& set, WayId way) {
  if (way >= set.ways.size() || !set.ways[way].valid()) throw InternalError("invalidate on an invalid way");
  const std::uint32_t rank = set.ways[way].recency;
  for (auto& l : set.ways)
    if (l.valid() && l.recency > rank) --l.recency;
  set.ways[way] = LlcLine{};
}

namespace {

// Deepest valid way in the LRU stack satisfying pred.
template <typename Pred>
std::optional<WayId> worst_recency(const CacheSet& set, Pred pred) {
  std::optional<WayId> best;
  for (WayId w = 0; w < set.ways.size(); ++w) {
    const auto& l = set.ways[w];
    if (!l.valid() || !pred(l)) continue;
    if (!best || l.recency > set.ways[*best].recency) best = w;
  }
  return best;
}

}  // namespace

WayId lru_way(const CacheSet& set) {
  auto w = worst_recency(set, [](const LlcLine&) { return true; });
  if (!w) throw InternalError("no evictable way in set");
  return *w;
}

VictimDecision select_victim(CacheSet& set, SocketId local_socket, std::span<const SocketId> way_homes,
                             const PolicyConfig& cfg, bool bias_enabled) {
  if (set.ways.empty() || set.valid_count() != set.ways.size())
    throw InternalError("select_victim requires a full set");
  if (way_homes.size() != set.ways.size()) throw InternalError("way_homes size mismatch");

  const WayId candidate = lru_way(set);
  if (cfg.kind == PolicyKind::LruOnly || !bias_enabled || !set.ways[candidate].remote_shared)
    return {candidate, false, CounterEvent::None};

  const bool local_home = way_homes[candidate] == local_socket;
  std::uint32_t& counter =
      local_home ? set.remote_sharing_local_home_counter : set.remote_sharing_remote_home_counter;
  const std::uint32_t threshold = local_home ? cfg.t_local : cfg.t_remote;

  if (counter >= threshold) {
    counter = 0;
    return {candidate, false, local_home ? CounterEvent::ResetLocal : CounterEvent::ResetRemote};
  }
  auto alt = worst_recency(set, [](const LlcLine& l) { return !l.remote_shared; });
  if (!alt) return {candidate, false, CounterEvent::None};  // every way is remote-shared
  ++counter;
  return {*alt, true, local_home ? CounterEvent::IncrementLocal : CounterEvent::IncrementRemote};
}

}  // namespace numasim
