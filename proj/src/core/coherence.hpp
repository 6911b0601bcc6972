// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/address_map.hpp"
#include "core/replacement_policy.hpp"

namespace numasim {

using SocketMask = std::uint64_t;

inline SocketMask socket_bit(SocketId s) { return SocketMask{1} << s; }

// Global record for one line, kept at its home node.
struct DirectoryEntry {
  std::optional<SocketId> owner;  // holder in M, O or E
  SocketMask sharers = 0;         // every socket holding a non-Invalid copy
  bool valid = false;

  bool operator==(const DirectoryEntry&) const = default;
};

struct Writeback {
  SocketId socket = 0;
  LineAddress line = 0;
  SocketId home = 0;

  bool operator==(const Writeback&) const = default;
};

struct FillOutcome {
  ServiceSource service_source = ServiceSource::LocalHit;
  MoesiState installed_state = MoesiState::Invalid;
  bool set_remote_shared = false;
  std::vector<Writeback> evictions;
  // Present when a full set forced a replacement decision.
  std::optional<VictimDecision> victim;

  bool hit() const { return service_source == ServiceSource::LocalHit; }
};

// One offending line (or set), with every broken rule found for it.
struct Violation {
  std::string subject;
  std::vector<std::string> problems;
};

std::string describe(const Violation& v);

class Llc {
 public:
  Llc(const TopologyConfig& topo) : sets_(topo.llc_sets, CacheSet(topo.llc_assoc)) {}

  CacheSet& set(SetId s) { return sets_.at(s); }
  const CacheSet& set(SetId s) const { return sets_.at(s); }
  std::size_t num_sets() const { return sets_.size(); }

  std::optional<WayId> find(SetId set, Tag tag) const;

 private:
  std::vector<CacheSet> sets_;
};

// Directory-based MOESI across one inclusive LLC per socket. Every access is
// an atomic transaction; no transient states exist.
class CoherenceSystem {
 public:
  CoherenceSystem(const TopologyConfig& topo, const PolicyConfig& policy);

  FillOutcome handle_read(SocketId requestor, PhysicalAddress addr, bool bias_enabled);
  FillOutcome handle_write(SocketId requestor, PhysicalAddress addr, bool bias_enabled);

  // Evicts a valid way. Returns the writeback for dirty (M/O) lines.
  std::optional<Writeback> evict_line(SocketId socket, SetId set, WayId way);

  std::vector<Violation> check_global_invariants() const;

  MoesiState state_of(SocketId socket, PhysicalAddress addr) const;
  const LlcLine* line_of(SocketId socket, PhysicalAddress addr) const;
  std::optional<DirectoryEntry> directory_entry(PhysicalAddress addr) const;

  const TopologyConfig& topology() const { return topo_; }
  const PolicyConfig& policy() const { return policy_; }
  const Llc& llc(SocketId s) const { return llcs_.at(s); }

  // Raw access for fault-injection tests.
  Llc& mutable_llc(SocketId s) { return llcs_.at(s); }
  std::unordered_map<LineAddress, DirectoryEntry>& mutable_directory() { return directory_; }

 private:
  void check_requestor(SocketId requestor, PhysicalAddress addr) const;
  // Drops the copy held by `socket` without a writeback (the data moved or
  // was superseded by a writer).
  void drop_copy(SocketId socket, LineAddress line);
  LlcLine& line_ref(SocketId socket, LineAddress line);
  FillOutcome install(SocketId requestor, LineAddress line, MoesiState state, bool remote_shared,
                      ServiceSource source, bool bias_enabled);

  TopologyConfig topo_;
  PolicyConfig policy_;
  std::vector<Llc> llcs_;
  std::unordered_map<LineAddress, DirectoryEntry> directory_;
};

}  // namespace numasim
