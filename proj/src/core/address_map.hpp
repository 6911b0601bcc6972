// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/types.hpp"

namespace numasim {

// Shape of the simulated machine. Home-node bits are the topmost
// log2(num_sockets) address bits; set-index bits sit directly above the
// line offset.
struct TopologyConfig {
  std::uint32_t num_sockets = 2;
  std::uint32_t cores_per_socket = 4;
  std::uint32_t llc_sets = 1024;
  std::uint32_t llc_assoc = 16;
  std::uint32_t line_size_bytes = 64;
  std::uint32_t address_width = 32;

  // Throws ConfigError when any invariant fails.
  void validate() const;

  std::uint32_t socket_bits() const;
  std::uint32_t set_bits() const;
  std::uint32_t offset_bits() const;

  // Number of distinct line addresses that share one home node.
  std::uint64_t lines_per_home() const;
};

bool is_power_of_two(std::uint64_t v);
std::uint32_t log2_exact(std::uint64_t v);

// Throws ConfigError when addr does not fit in topo.address_width bits.
void check_address(PhysicalAddress addr, const TopologyConfig& topo);

SocketId home_node(PhysicalAddress addr, const TopologyConfig& topo);
SetId set_index(PhysicalAddress addr, const TopologyConfig& topo);
Tag line_tag(PhysicalAddress addr, const TopologyConfig& topo);
LineAddress line_address(PhysicalAddress addr, const TopologyConfig& topo);
LineAddress reconstruct_line(Tag tag, SetId set, const TopologyConfig& topo);

// Line address of the index-th line homed at `home`. Used by generators to
// pin home locality.
PhysicalAddress make_address(SocketId home, std::uint64_t line_index, const TopologyConfig& topo);

}  // namespace numasim
