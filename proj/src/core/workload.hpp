// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/address_map.hpp"

namespace numasim {

struct AccessRecord {
  SocketId socket = 0;
  CoreId core = 0;
  AccessOp op = AccessOp::Read;
  PhysicalAddress addr = 0;
  SeqNo seq = 0;

  bool operator==(const AccessRecord&) const = default;
};

using Trace = std::vector<AccessRecord>;

// Streaming reader for the text trace format:
//   <socket> <core> <R|W> <0x-hex-address>
// '#' starts a comment line, blank lines are skipped, fields are separated
// by exactly one space.
class TraceReader {
 public:
  TraceReader(std::istream& in, const TopologyConfig& topo);

  // Throws ParseError (malformed) or ValidationError (out of range).
  std::optional<AccessRecord> next();

  std::size_t line_number() const { return line_no_; }

 private:
  std::istream& in_;
  TopologyConfig topo_;
  std::size_t line_no_ = 0;
  SeqNo seq_ = 0;
};

Trace parse_trace(std::istream& in, const TopologyConfig& topo);
Trace parse_trace(const std::string& text, const TopologyConfig& topo);

void format_record(std::ostream& out, const AccessRecord& r);
void format_trace(std::ostream& out, const Trace& trace);
std::string format_trace(const Trace& trace);

enum class GeneratorKind : std::uint8_t { ProducerConsumer, Migratory, PrivateStream, SharedReadOnly, Uniform };

const char* to_string(GeneratorKind k);
GeneratorKind parse_generator_kind(const std::string& name);

struct SocketPair {
  SocketId producer = 0;
  SocketId consumer = 0;

  bool operator==(const SocketPair&) const = default;
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::ProducerConsumer;
  std::uint64_t working_set_lines = 64;
  std::uint64_t iterations = 16;
  // ProducerConsumer only; empty means socket 0 produces for socket 1.
  std::vector<SocketPair> sharing_socket_pairs;
  std::uint64_t rng_seed = 1;
  // Pins every generated line to one home socket.
  std::optional<SocketId> home_override;

  void validate(const TopologyConfig& topo) const;
};

// "0:1,2:3" -> {{0,1},{2,3}}
std::vector<SocketPair> parse_socket_pairs(const std::string& text);
std::string format_socket_pairs(const std::vector<SocketPair>& pairs);

// Deterministic: a pure function of (spec, topo).
Trace generate(const GeneratorSpec& spec, const TopologyConfig& topo);

}  // namespace numasim
