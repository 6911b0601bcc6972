// SPDX-License-Identifier: Apache-2.0

#include "core/address_map.hpp"

#include <bit>

namespace numasim {

bool is_power_of_two(std::uint64_t v) { return std::has_single_bit(v); }

std::uint32_t log2_exact(std::uint64_t v) { return static_cast<std::uint32_t>(std::countr_zero(v)); }

void TopologyConfig::validate() const {
  if (num_sockets == 0 || !is_power_of_two(num_sockets))
    throw ConfigError("sockets must be a power of two >= 1");
  if (num_sockets > kMaxSockets)
    throw ConfigError("sockets must be <= " + std::to_string(kMaxSockets));
  if (cores_per_socket == 0) throw ConfigError("cores-per-socket must be >= 1");
  if (llc_sets == 0 || !is_power_of_two(llc_sets)) throw ConfigError("sets must be a power of two >= 1");
  if (llc_assoc < 2) throw ConfigError("assoc must be >= 2");
  if (line_size_bytes == 0 || !is_power_of_two(line_size_bytes))
    throw ConfigError("line-size must be a power of two");
  if (address_width == 0 || address_width > 64) throw ConfigError("address-width must be in [1, 64]");
  if (socket_bits() + set_bits() + offset_bits() > address_width)
    throw ConfigError("address-width too small for sockets, sets and line size");
}

std::uint32_t TopologyConfig::socket_bits() const { return log2_exact(num_sockets); }
std::uint32_t TopologyConfig::set_bits() const { return log2_exact(llc_sets); }
std::uint32_t TopologyConfig::offset_bits() const { return log2_exact(line_size_bytes); }

std::uint64_t TopologyConfig::lines_per_home() const {
  const std::uint32_t bits = address_width - socket_bits() - offset_bits();
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits);
}

void check_address(PhysicalAddress addr, const TopologyConfig& topo) {
  if (topo.address_width < 64 && (addr >> topo.address_width) != 0)
    throw ConfigError("address exceeds configured address width");
}

SocketId home_node(PhysicalAddress addr, const TopologyConfig& topo) {
  check_address(addr, topo);
  const std::uint32_t sb = topo.socket_bits();
  if (sb == 0) return 0;
  return static_cast<SocketId>(addr >> (topo.address_width - sb));
}

SetId set_index(PhysicalAddress addr, const TopologyConfig& topo) {
  return static_cast<SetId>((addr >> topo.offset_bits()) & (topo.llc_sets - 1));
}

Tag line_tag(PhysicalAddress addr, const TopologyConfig& topo) {
  const std::uint32_t shift = topo.offset_bits() + topo.set_bits();
  return shift >= 64 ? 0 : addr >> shift;
}

LineAddress line_address(PhysicalAddress addr, const TopologyConfig& topo) {
  return addr & ~(static_cast<std::uint64_t>(topo.line_size_bytes) - 1);
}

LineAddress reconstruct_line(Tag tag, SetId set, const TopologyConfig& topo) {
  const std::uint32_t shift = topo.offset_bits() + topo.set_bits();
  const std::uint64_t hi = shift >= 64 ? 0 : tag << shift;
  return hi | (static_cast<std::uint64_t>(set) << topo.offset_bits());
}

PhysicalAddress make_address(SocketId home, std::uint64_t line_index, const TopologyConfig& topo) {
  if (home >= topo.num_sockets) throw ValidationError("home socket out of range");
  if (line_index >= topo.lines_per_home()) throw ValidationError("working set exceeds address space");
  const std::uint32_t sb = topo.socket_bits();
  const std::uint64_t hi = sb == 0 ? 0 : static_cast<std::uint64_t>(home) << (topo.address_width - sb);
  return hi | (line_index << topo.offset_bits());
}

const char* to_string(MoesiState s) {
  switch (s) {
    case MoesiState::Invalid: return "I";
    case MoesiState::Shared: return "S";
    case MoesiState::Exclusive: return "E";
    case MoesiState::Owner: return "O";
    case MoesiState::Modified: return "M";
  }
  return "?";
}

const char* to_string(ServiceSource s) {
  switch (s) {
    case ServiceSource::LocalHit: return "local_hit";
    case ServiceSource::RemoteCacheToCache: return "remote_c2c";
    case ServiceSource::LocalDram: return "local_dram";
    case ServiceSource::RemoteDram: return "remote_dram";
  }
  return "?";
}

}  // namespace numasim
