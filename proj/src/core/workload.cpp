// SPDX-License-Identifier: Apache-2.0

#include "core/workload.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>

namespace numasim {

// ---------------------------------------------------------------------------
// Trace text format

namespace {

template <typename T>
bool parse_uint(std::string_view s, T& out, int base = 10) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

TraceReader::TraceReader(std::istream& in, const TopologyConfig& topo) : in_(in), topo_(topo) {}

std::optional<AccessRecord> TraceReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (line.empty() || line[0] == '#') continue;

    std::string_view rest(line);
    std::string_view fields[4];
    for (int i = 0; i < 4; ++i) {
      const auto sp = rest.find(' ');
      if (i < 3) {
        if (sp == std::string_view::npos) throw ParseError(line_no_, "expected 4 space-separated fields");
        fields[i] = rest.substr(0, sp);
        rest.remove_prefix(sp + 1);
      } else {
        if (sp != std::string_view::npos) throw ParseError(line_no_, "trailing characters after address");
        fields[i] = rest;
      }
    }

    AccessRecord r;
    if (!parse_uint(fields[0], r.socket)) throw ParseError(line_no_, "bad socket field '" + std::string(fields[0]) + "'");
    if (!parse_uint(fields[1], r.core)) throw ParseError(line_no_, "bad core field '" + std::string(fields[1]) + "'");
    if (fields[2] == "R")
      r.op = AccessOp::Read;
    else if (fields[2] == "W")
      r.op = AccessOp::Write;
    else
      throw ParseError(line_no_, "bad op '" + std::string(fields[2]) + "' (expected R or W)");
    const std::string_view a = fields[3];
    if (a.size() < 3 || a[0] != '0' || (a[1] != 'x' && a[1] != 'X') || !parse_uint(a.substr(2), r.addr, 16))
      throw ParseError(line_no_, "bad address '" + std::string(a) + "' (expected 0x-prefixed hex)");

    if (r.socket >= topo_.num_sockets)
      throw ValidationError("line " + std::to_string(line_no_) + ": socket " + std::to_string(r.socket) + " out of range");
    if (r.core >= topo_.cores_per_socket)
      throw ValidationError("line " + std::to_string(line_no_) + ": core " + std::to_string(r.core) + " out of range");
    if (topo_.address_width < 64 && (r.addr >> topo_.address_width) != 0)
      throw ValidationError("line " + std::to_string(line_no_) + ": address exceeds address width");

    r.seq = seq_++;
    return r;
  }
  return std::nullopt;
}

Trace parse_trace(std::istream& in, const TopologyConfig& topo) {
  TraceReader reader(in, topo);
  Trace out;
  while (auto r = reader.next()) out.push_back(*r);
  return out;
}

Trace parse_trace(const std::string& text, const TopologyConfig& topo) {
  std::istringstream in(text);
  return parse_trace(in, topo);
}

void format_record(std::ostream& out, const AccessRecord& r) {
  char buf[24];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, r.addr, 16);
  out << r.socket << ' ' << r.core << ' ' << (r.op == AccessOp::Read ? 'R' : 'W') << " 0x"
      << std::string_view(buf, static_cast<std::size_t>(p - buf)) << '\n';
}

void format_trace(std::ostream& out, const Trace& trace) {
  for (const auto& r : trace) format_record(out, r);
}

std::string format_trace(const Trace& trace) {
  std::ostringstream out;
  format_trace(out, trace);
  return out.str();
}

// ---------------------------------------------------------------------------
// Synthetic generators

const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::ProducerConsumer: return "producer-consumer";
    case GeneratorKind::Migratory: return "migratory";
    case GeneratorKind::PrivateStream: return "private";
    case GeneratorKind::SharedReadOnly: return "shared-readonly";
    case GeneratorKind::Uniform: return "uniform";
  }
  return "?";
}

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "producer-consumer" || name == "pc") return GeneratorKind::ProducerConsumer;
  if (name == "migratory") return GeneratorKind::Migratory;
  if (name == "private") return GeneratorKind::PrivateStream;
  if (name == "shared-readonly" || name == "shared-ro") return GeneratorKind::SharedReadOnly;
  if (name == "uniform") return GeneratorKind::Uniform;
  throw ConfigError("unknown generator kind '" + name +
                    "' (expected producer-consumer, migratory, private, shared-readonly or uniform)");
}

std::vector<SocketPair> parse_socket_pairs(const std::string& text) {
  std::vector<SocketPair> out;
  if (text.empty()) return out;
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto colon = item.find(':');
    SocketPair p;
    if (colon == std::string_view::npos || !parse_uint(item.substr(0, colon), p.producer) ||
        !parse_uint(item.substr(colon + 1), p.consumer))
      throw ConfigError("bad socket pair '" + std::string(item) + "' (expected producer:consumer)");
    out.push_back(p);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_socket_pairs(const std::vector<SocketPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    if (!out.empty()) out += ',';
    out += std::to_string(p.producer) + ':' + std::to_string(p.consumer);
  }
  return out;
}

namespace {

std::vector<SocketPair> effective_pairs(const GeneratorSpec& spec, const TopologyConfig& topo) {
  if (!spec.sharing_socket_pairs.empty()) return spec.sharing_socket_pairs;
  return {SocketPair{0, 1 % topo.num_sockets}};
}

// Highest line index (exclusive) a generator places inside one home.
std::uint64_t lines_needed_per_home(const GeneratorSpec& spec, const TopologyConfig& topo) {
  const std::uint64_t ws = spec.working_set_lines;
  switch (spec.kind) {
    case GeneratorKind::ProducerConsumer: return effective_pairs(spec, topo).size() * ws;
    case GeneratorKind::PrivateStream: return topo.num_sockets * ws;
    case GeneratorKind::Migratory:
    case GeneratorKind::SharedReadOnly:
    case GeneratorKind::Uniform:
      return spec.home_override ? ws : (ws + topo.num_sockets - 1) / topo.num_sockets;
  }
  return ws;
}

class Emitter {
 public:
  Emitter(const GeneratorSpec& spec, const TopologyConfig& topo) : spec_(spec), topo_(topo), rng_(spec.rng_seed) {}

  std::uint64_t draw(std::uint64_t bound) { return rng_() % bound; }

  void emit(SocketId socket, AccessOp op, PhysicalAddress addr) {
    const auto core = static_cast<CoreId>(draw(topo_.cores_per_socket));
    out_.push_back(AccessRecord{socket, core, op, addr, out_.size()});
  }

  // Lines that are spread over homes round-robin unless a home is pinned.
  PhysicalAddress spread_line(std::uint64_t idx) const {
    if (spec_.home_override) return make_address(*spec_.home_override, idx, topo_);
    return make_address(static_cast<SocketId>(idx % topo_.num_sockets), idx / topo_.num_sockets, topo_);
  }

  PhysicalAddress region_line(SocketId default_home, std::uint64_t region, std::uint64_t idx) const {
    return make_address(spec_.home_override.value_or(default_home), region * spec_.working_set_lines + idx, topo_);
  }

  std::vector<std::uint64_t> shuffled_order() {
    std::vector<std::uint64_t> order(spec_.working_set_lines);
    std::iota(order.begin(), order.end(), 0);
    // Fisher-Yates on raw engine output keeps the sequence portable across
    // standard libraries.
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[draw(i)]);
    return order;
  }

  Trace take() { return std::move(out_); }

 private:
  const GeneratorSpec& spec_;
  const TopologyConfig& topo_;
  std::mt19937_64 rng_;
  Trace out_;
};

}  // namespace

void GeneratorSpec::validate(const TopologyConfig& topo) const {
  topo.validate();
  if (working_set_lines < 1) throw ValidationError("working set must be >= 1 line");
  if (iterations < 1) throw ValidationError("iterations must be >= 1");
  if (home_override && *home_override >= topo.num_sockets) throw ValidationError("home socket out of range");
  for (const auto& p : sharing_socket_pairs)
    if (p.producer >= topo.num_sockets || p.consumer >= topo.num_sockets)
      throw ValidationError("socket pair " + std::to_string(p.producer) + ":" + std::to_string(p.consumer) +
                            " out of range");
  if (lines_needed_per_home(*this, topo) > topo.lines_per_home())
    throw ValidationError("working set exceeds address space");
}

Trace generate(const GeneratorSpec& spec, const TopologyConfig& topo) {
  spec.validate(topo);
  Emitter e(spec, topo);
  const std::uint64_t ws = spec.working_set_lines;
  const SocketId n = topo.num_sockets;

  switch (spec.kind) {
    case GeneratorKind::ProducerConsumer: {
      const auto pairs = effective_pairs(spec, topo);
      for (std::uint64_t it = 0; it < spec.iterations; ++it) {
        const auto order = e.shuffled_order();
        for (std::size_t p = 0; p < pairs.size(); ++p)
          for (auto idx : order) {
            const PhysicalAddress a = e.region_line(pairs[p].producer, p, idx);
            e.emit(pairs[p].producer, AccessOp::Write, a);
            e.emit(pairs[p].consumer, AccessOp::Read, a);
          }
      }
      break;
    }
    case GeneratorKind::Migratory:
      for (std::uint64_t it = 0; it < spec.iterations; ++it) {
        const auto socket = static_cast<SocketId>(it % n);
        for (auto idx : e.shuffled_order()) {
          const PhysicalAddress a = e.spread_line(idx);
          e.emit(socket, AccessOp::Read, a);
          e.emit(socket, AccessOp::Write, a);
        }
      }
      break;
    case GeneratorKind::PrivateStream:
      for (std::uint64_t it = 0; it < spec.iterations; ++it)
        for (std::uint64_t idx = 0; idx < ws; ++idx)
          for (SocketId s = 0; s < n; ++s) {
            const AccessOp op = e.draw(4) == 0 ? AccessOp::Write : AccessOp::Read;
            e.emit(s, op, e.region_line(s, s, idx));
          }
      break;
    case GeneratorKind::SharedReadOnly:
      for (std::uint64_t idx = 0; idx < ws; ++idx) e.emit(0, AccessOp::Write, e.spread_line(idx));
      for (std::uint64_t it = 0; it < spec.iterations; ++it)
        for (auto idx : e.shuffled_order())
          for (SocketId s = 0; s < n; ++s) e.emit(s, AccessOp::Read, e.spread_line(idx));
      break;
    case GeneratorKind::Uniform:
      for (std::uint64_t it = 0; it < spec.iterations; ++it) {
        const auto socket = static_cast<SocketId>(e.draw(n));
        const AccessOp op = e.draw(2) == 0 ? AccessOp::Read : AccessOp::Write;
        e.emit(socket, op, e.spread_line(e.draw(ws)));
      }
      break;
  }
  return e.take();
}

}  // namespace numasim
