// SPDX-License-Identifier: Apache-2.0

#include "core/run_config.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>

namespace numasim {

namespace {

template <typename T>
T to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size() || out > std::numeric_limits<T>::max())
    throw ConfigError("--" + key + ": expected an unsigned integer, got '" + v + "'");
  return static_cast<T>(out);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || !std::isfinite(out))
    throw ConfigError("--" + key + ": expected a number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError("--" + key + ": expected on/off, got '" + v + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "sockets",     "cores-per-socket", "sets",       "assoc",     "line-size",       "address-width",
      "policy",      "policies",         "t-local",    "t-remote",  "window",          "high-water",
      "low-water",   "initial-bias",     "remote-miss-def",         "lat-llc",         "lat-c2c",
      "lat-ldram",   "lat-rdram",        "trace",      "gen-kind",  "gen-lines",       "gen-iterations",
      "gen-pairs",   "gen-home",         "seed",       "report",    "validate"};
  return k;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "sockets") topology.num_sockets = to_uint<std::uint32_t>(key, value);
  else if (key == "cores-per-socket") topology.cores_per_socket = to_uint<std::uint32_t>(key, value);
  else if (key == "sets") topology.llc_sets = to_uint<std::uint32_t>(key, value);
  else if (key == "assoc") topology.llc_assoc = to_uint<std::uint32_t>(key, value);
  else if (key == "line-size") topology.line_size_bytes = to_uint<std::uint32_t>(key, value);
  else if (key == "address-width") topology.address_width = to_uint<std::uint32_t>(key, value);
  else if (key == "policy") policy = parse_policy_kind(value);
  else if (key == "policies") {
    policies.clear();
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto comma = value.find(',', start);
      policies.push_back(parse_policy_kind(value.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else if (key == "t-local") t_local = to_uint<std::uint32_t>(key, value);
  else if (key == "t-remote") t_remote = to_uint<std::uint32_t>(key, value);
  else if (key == "window") adaptive.window_size = to_uint<std::uint64_t>(key, value);
  else if (key == "high-water") adaptive.high_water = to_double(key, value);
  else if (key == "low-water") adaptive.low_water = to_double(key, value);
  else if (key == "initial-bias") adaptive.initial_bias = to_bool(key, value);
  else if (key == "remote-miss-def") adaptive.remote_miss_def = parse_remote_miss_definition(value);
  else if (key == "lat-llc") latency.llc_hit = to_uint<std::uint64_t>(key, value);
  else if (key == "lat-c2c") latency.remote_c2c = to_uint<std::uint64_t>(key, value);
  else if (key == "lat-ldram") latency.local_dram = to_uint<std::uint64_t>(key, value);
  else if (key == "lat-rdram") latency.remote_dram = to_uint<std::uint64_t>(key, value);
  else if (key == "trace") trace_path = value;
  else if (key == "gen-kind") gen_kind = parse_generator_kind(value);
  else if (key == "gen-lines") gen_lines = to_uint<std::uint64_t>(key, value);
  else if (key == "gen-iterations") gen_iterations = to_uint<std::uint64_t>(key, value);
  else if (key == "gen-pairs") gen_pairs = parse_socket_pairs(value);
  else if (key == "gen-home") gen_home = to_uint<SocketId>(key, value);
  else if (key == "seed") seed = to_uint<std::uint64_t>(key, value);
  else if (key == "report") {
    if (value == "json") report = ReportFormat::Json;
    else if (value == "table") report = ReportFormat::Table;
    else throw ConfigError("--report: expected json or table, got '" + value + "'");
  } else if (key == "validate") validate_mode = to_bool(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

void RunConfig::load(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(n) + ": expected key=value");
    set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

PolicyConfig RunConfig::policy_config(PolicyKind kind) const {
  PolicyConfig p = PolicyConfig::with_defaults(kind, topology.llc_assoc);
  if (t_local) p.t_local = *t_local;
  if (t_remote) p.t_remote = *t_remote;
  return p;
}

GeneratorSpec RunConfig::generator_spec() const {
  if (!gen_kind) throw ConfigError("no generator kind given (--gen-kind)");
  GeneratorSpec g;
  g.kind = *gen_kind;
  g.working_set_lines = gen_lines;
  g.iterations = gen_iterations;
  g.sharing_socket_pairs = gen_pairs;
  g.rng_seed = seed;
  g.home_override = gen_home;
  return g;
}

SimOptions RunConfig::sim_options(PolicyKind kind) const {
  return SimOptions{topology, policy_config(kind), adaptive, latency, validate_mode};
}

void RunConfig::validate() const {
  topology.validate();
  policy_config(policy).validate(topology.llc_assoc);
  adaptive.validate();
  latency.validate();
  if (gen_kind) generator_spec().validate(topology);
}

void RunConfig::require_single_trace_source() const {
  if (trace_path && gen_kind) throw ConfigError("give either --trace or --gen-kind, not both");
  if (!trace_path && !gen_kind) throw ConfigError("no trace source: give --trace or --gen-kind");
}

}  // namespace numasim
