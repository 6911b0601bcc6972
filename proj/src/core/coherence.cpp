// SPDX-License-Identifier: Apache-2.0

#include "core/coherence.hpp"

#include <bit>
#include <cstdio>
#include <map>

namespace numasim {

namespace {

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

bool is_writer_state(MoesiState s) { return s == MoesiState::Modified || s == MoesiState::Exclusive; }

bool is_owning_state(MoesiState s) { return is_writer_state(s) || s == MoesiState::Owner; }

}  // namespace

std::string describe(const Violation& v) {
  std::string out = v.subject + ":";
  for (const auto& p : v.problems) out += " " + p + ";";
  return out;
}

std::optional<WayId> Llc::find(SetId set, Tag tag) const {
  const auto& ways = sets_.at(set).ways;
  for (WayId w = 0; w < ways.size(); ++w)
    if (ways[w].valid() && ways[w].tag == tag) return w;
  return std::nullopt;
}

CoherenceSystem::CoherenceSystem(const TopologyConfig& topo, const PolicyConfig& policy)
    : topo_(topo), policy_(policy) {
  topo_.validate();
  policy_.validate(topo_.llc_assoc);
  llcs_.assign(topo_.num_sockets, Llc(topo_));
}

void CoherenceSystem::check_requestor(SocketId requestor, PhysicalAddress addr) const {
  check_address(addr, topo_);
  if (requestor >= topo_.num_sockets) throw ConfigError("requesting socket out of range");
}

LlcLine& CoherenceSystem::line_ref(SocketId socket, LineAddress line) {
  const SetId s = set_index(line, topo_);
  auto way = llcs_[socket].find(s, line_tag(line, topo_));
  if (!way) throw InternalError("directory lists socket " + std::to_string(socket) + " for " + hex(line) +
                                " but its LLC has no copy");
  return llcs_[socket].set(s).ways[*way];
}

const LlcLine* CoherenceSystem::line_of(SocketId socket, PhysicalAddress addr) const {
  const SetId s = set_index(addr, topo_);
  auto way = llcs_.at(socket).find(s, line_tag(addr, topo_));
  return way ? &llcs_[socket].set(s).ways[*way] : nullptr;
}

MoesiState CoherenceSystem::state_of(SocketId socket, PhysicalAddress addr) const {
  const LlcLine* l = line_of(socket, addr);
  return l ? l->state : MoesiState::Invalid;
}

std::optional<DirectoryEntry> CoherenceSystem::directory_entry(PhysicalAddress addr) const {
  auto it = directory_.find(line_address(addr, topo_));
  if (it == directory_.end()) return std::nullopt;
  return it->second;
}

void CoherenceSystem::drop_copy(SocketId socket, LineAddress line) {
  const SetId s = set_index(line, topo_);
  auto way = llcs_[socket].find(s, line_tag(line, topo_));
  if (!way) throw InternalError("drop_copy: socket holds no copy of " + hex(line));
  invalidate(llcs_[socket].set(s), *way);
}

std::optional<Writeback> CoherenceSystem::evict_line(SocketId socket, SetId set, WayId way) {
  CacheSet& cs = llcs_.at(socket).set(set);
  if (way >= cs.ways.size() || !cs.ways[way].valid()) throw InternalError("evict_line on an invalid way");
  const LlcLine victim = cs.ways[way];
  const LineAddress line = reconstruct_line(victim.tag, set, topo_);

  std::optional<Writeback> wb;
  if (victim.state == MoesiState::Modified || victim.state == MoesiState::Owner)
    wb = Writeback{socket, line, home_node(line, topo_)};

  auto it = directory_.find(line);
  if (it == directory_.end()) throw InternalError("evicted line " + hex(line) + " missing from directory");
  it->second.sharers &= ~socket_bit(socket);
  if (it->second.owner == socket) it->second.owner.reset();
  if (it->second.sharers == 0) directory_.erase(it);

  invalidate(cs, way);
  return wb;
}

FillOutcome CoherenceSystem::install(SocketId requestor, LineAddress line, MoesiState state, bool remote_shared,
                                     ServiceSource source, bool bias_enabled) {
  FillOutcome out;
  out.service_source = source;
  out.installed_state = state;
  out.set_remote_shared = remote_shared && state == MoesiState::Shared;

  const SetId s = set_index(line, topo_);
  CacheSet& cs = llcs_[requestor].set(s);
  WayId way = cs.first_invalid();
  if (way == cs.ways.size()) {
    std::vector<SocketId> homes(cs.ways.size());
    for (WayId w = 0; w < cs.ways.size(); ++w) homes[w] = home_node(reconstruct_line(cs.ways[w].tag, s, topo_), topo_);
    const VictimDecision d = select_victim(cs, requestor, homes, policy_, bias_enabled);
    if (auto wb = evict_line(requestor, s, d.way)) out.evictions.push_back(*wb);
    out.victim = d;
    way = d.way;
  }
  on_fill(cs, way, line_tag(line, topo_), state, out.set_remote_shared);
  return out;
}

FillOutcome CoherenceSystem::handle_read(SocketId requestor, PhysicalAddress addr, bool bias_enabled) {
  check_requestor(requestor, addr);
  const LineAddress line = line_address(addr, topo_);
  const SetId s = set_index(line, topo_);

  if (auto way = llcs_[requestor].find(s, line_tag(line, topo_))) {
    CacheSet& cs = llcs_[requestor].set(s);
    touch(cs, *way);
    FillOutcome hit;
    hit.installed_state = cs.ways[*way].state;
    return hit;
  }

  const SocketId home = home_node(line, topo_);
  const ServiceSource dram = home == requestor ? ServiceSource::LocalDram : ServiceSource::RemoteDram;
  DirectoryEntry entry;
  if (auto it = directory_.find(line); it != directory_.end()) entry = it->second;

  FillOutcome out;
  if (entry.owner) {
    LlcLine& supplier = line_ref(*entry.owner, line);
    switch (supplier.state) {
      case MoesiState::Modified:
        supplier.state = MoesiState::Owner;
        [[fallthrough]];
      case MoesiState::Owner:
        out = install(requestor, line, MoesiState::Shared, true, ServiceSource::RemoteCacheToCache, bias_enabled);
        break;
      case MoesiState::Exclusive:
        supplier.state = MoesiState::Shared;
        entry.owner.reset();
        out = install(requestor, line, MoesiState::Shared, false, ServiceSource::RemoteCacheToCache, bias_enabled);
        break;
      default:
        throw InternalError("directory owner of " + hex(line) + " is not in M, O or E");
    }
  } else if (entry.sharers != 0) {
    out = install(requestor, line, MoesiState::Shared, false, dram, bias_enabled);
  } else {
    out = install(requestor, line, MoesiState::Exclusive, false, dram, bias_enabled);
    entry.owner = requestor;
  }

  entry.sharers |= socket_bit(requestor);
  entry.valid = true;
  directory_[line] = entry;
  return out;
}

FillOutcome CoherenceSystem::handle_write(SocketId requestor, PhysicalAddress addr, bool bias_enabled) {
  check_requestor(requestor, addr);
  const LineAddress line = line_address(addr, topo_);
  const SetId s = set_index(line, topo_);

  DirectoryEntry entry;
  if (auto it = directory_.find(line); it != directory_.end()) entry = it->second;
  const SocketMask others = entry.sharers & ~socket_bit(requestor);
  auto drop_others = [&] {
    for (SocketMask m = others; m != 0; m &= m - 1) drop_copy(static_cast<SocketId>(std::countr_zero(m)), line);
  };

  FillOutcome out;
  if (auto way = llcs_[requestor].find(s, line_tag(line, topo_))) {
    CacheSet& cs = llcs_[requestor].set(s);
    LlcLine& l = cs.ways[*way];
    if (l.state == MoesiState::Shared || l.state == MoesiState::Owner) drop_others();
    l.state = MoesiState::Modified;
    l.remote_shared = false;
    touch(cs, *way);
    out.installed_state = MoesiState::Modified;
  } else {
    const SocketId home = home_node(line, topo_);
    const ServiceSource source = entry.owner ? ServiceSource::RemoteCacheToCache
                                 : home == requestor ? ServiceSource::LocalDram
                                                     : ServiceSource::RemoteDram;
    drop_others();
    out = install(requestor, line, MoesiState::Modified, false, source, bias_enabled);
  }

  directory_[line] = DirectoryEntry{requestor, socket_bit(requestor), true};
  return out;
}

std::vector<Violation> CoherenceSystem::check_global_invariants() const {
  std::vector<Violation> out;

  struct Holder {
    SocketId socket;
    LlcLine line;
  };
  std::map<LineAddress, std::vector<Holder>> holders;

  for (SocketId sock = 0; sock < llcs_.size(); ++sock) {
    for (SetId s = 0; s < llcs_[sock].num_sets(); ++s) {
      const CacheSet& cs = llcs_[sock].set(s);
      std::vector<std::string> problems;
      std::vector<bool> seen(cs.ways.size(), false);
      for (const auto& l : cs.ways) {
        if (!l.valid()) {
          if (l.remote_shared) problems.push_back("invalid way with remote_shared set");
          continue;
        }
        if (l.recency >= cs.valid_count() || seen[l.recency])
          problems.push_back("recency ranks are not a permutation");
        else
          seen[l.recency] = true;
        holders[reconstruct_line(l.tag, s, topo_)].push_back({sock, l});
      }
      if (cs.remote_sharing_local_home_counter > policy_.t_local) problems.push_back("local-home counter above threshold");
      if (cs.remote_sharing_remote_home_counter > policy_.t_remote)
        problems.push_back("remote-home counter above threshold");
      if (!problems.empty())
        out.push_back({"socket " + std::to_string(sock) + " set " + std::to_string(s), std::move(problems)});
    }
  }

  std::map<LineAddress, const DirectoryEntry*> dir_sorted;
  for (const auto& [line, e] : directory_) {
    dir_sorted[line] = &e;
    holders.try_emplace(line);
  }

  for (const auto& [line, hs] : holders) {
    std::vector<std::string> problems;
    SocketMask actual = 0;
    unsigned writers = 0, owners = 0;
    std::optional<SocketId> actual_owner;
    for (const auto& h : hs) {
      if (actual & socket_bit(h.socket)) problems.push_back("duplicate copy in one LLC");
      actual |= socket_bit(h.socket);
      if (is_writer_state(h.line.state)) ++writers;
      if (h.line.state == MoesiState::Owner) ++owners;
      if (is_owning_state(h.line.state)) actual_owner = h.socket;
      if (h.line.remote_shared && h.line.state != MoesiState::Shared)
        problems.push_back("remote_shared set on a non-Shared line");
    }
    if (writers > 1 || (writers == 1 && hs.size() > 1)) problems.push_back("single-writer violated");
    if (owners > 1) problems.push_back("multiple owners");

    auto it = dir_sorted.find(line);
    if (it == dir_sorted.end()) {
      if (!hs.empty()) problems.push_back("no directory entry for cached line");
    } else {
      const DirectoryEntry& e = *it->second;
      if (!e.valid) problems.push_back("directory entry not marked valid");
      if (e.sharers != actual) problems.push_back("directory sharers disagree with caches");
      if (e.owner && !(e.sharers & socket_bit(*e.owner))) problems.push_back("directory owner not among sharers");
      if (writers + owners <= 1 && e.owner != actual_owner) problems.push_back("directory owner disagrees with caches");
    }
    if (!problems.empty()) out.push_back({"line " + hex(line), std::move(problems)});
  }
  return out;
}

}  // namespace numasim
