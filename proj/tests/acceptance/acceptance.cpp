// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/report.hpp"
#include "numasim/numasim.h"
#include "reference/reference_model.hpp"
#include "reference/scenarios.hpp"

using namespace numasim;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

SimOptions options(PolicyKind kind, std::uint32_t sockets, std::uint32_t sets, std::uint32_t assoc) {
  SimOptions o;
  o.topology.num_sockets = sockets;
  o.topology.cores_per_socket = 2;
  o.topology.llc_sets = sets;
  o.topology.llc_assoc = assoc;
  o.policy = PolicyConfig::with_defaults(kind, assoc);
  return o;
}

reference::Params ref_params(const SimOptions& o) {
  reference::Params p;
  p.sockets = o.topology.num_sockets;
  p.sets = o.topology.llc_sets;
  p.assoc = o.topology.llc_assoc;
  p.kind = o.policy.kind == PolicyKind::LruOnly        ? reference::Kind::Lru
           : o.policy.kind == PolicyKind::BiasedAlways ? reference::Kind::Biased
                                                       : reference::Kind::Adaptive;
  p.t_local = o.policy.t_local;
  p.t_remote = o.policy.t_remote;
  p.window = o.adaptive.window_size;
  p.high_water = o.adaptive.high_water;
  p.low_water = o.adaptive.low_water;
  p.initial_bias = o.adaptive.initial_bias;
  p.c2c_only = o.adaptive.remote_miss_def == RemoteMissDefinition::CacheToCacheOnly;
  p.lat_hit = o.latency.llc_hit;
  p.lat_c2c = o.latency.remote_c2c;
  p.lat_ldram = o.latency.local_dram;
  p.lat_rdram = o.latency.remote_dram;
  return p;
}

// 1. Field-for-field agreement with the brute-force model.
Outcome oracle_equivalence() {
  TopologyConfig topo = options(PolicyKind::LruOnly, 2, 4, 4).topology;
  GeneratorSpec g;
  g.kind = GeneratorKind::Uniform;
  g.working_set_lines = 48;
  g.iterations = 10000;
  g.rng_seed = 20240601;
  const Trace trace = generate(g, topo);

  std::vector<std::string> bad;
  std::size_t runs = 0;
  for (auto kind : {PolicyKind::LruOnly, PolicyKind::BiasedAlways, PolicyKind::BiasedAdaptive}) {
    for (std::uint64_t window : {std::uint64_t{1024}, std::uint64_t{64}}) {
      if (kind != PolicyKind::BiasedAdaptive && window != 1024) continue;
      auto o = options(kind, 2, 4, 4);
      o.adaptive.window_size = window;
      ++runs;
      if (!(run(trace, o) == reference::simulate(trace, ref_params(o))))
        bad.push_back(std::string(to_string(kind)) + "/w" + std::to_string(window));
    }
  }
  std::string d = std::to_string(runs) + " runs over " + std::to_string(trace.size()) + " accesses";
  for (const auto& b : bad) d += ", mismatch " + b;
  return {bad.empty(), d};
}

// 2. Invariant fuzz with validation mode on.
Outcome invariant_fuzz() {
  std::size_t violations = 0, accesses = 0;
  std::string first;
  const PolicyKind kinds[] = {PolicyKind::LruOnly, PolicyKind::BiasedAlways, PolicyKind::BiasedAdaptive};
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::uint32_t sockets = i % 4 == 3 ? 4 : 2;
    auto o = options(kinds[i % 3], sockets, 4, 4);
    o.validate = true;
    o.adaptive.window_size = 32;
    const auto trace = scenarios::random_trace(1000 + i, 5000, sockets, 2, 24 + (i % 5) * 12);
    try {
      accesses += run(trace, o).total.accesses;
    } catch (const InternalError& e) {
      ++violations;
      if (first.empty()) first = e.what();
    }
  }
  std::string d = std::to_string(accesses) + " accesses, " + std::to_string(violations) + " violations";
  if (!first.empty()) d += ": " + first;
  return {violations == 0 && accesses == 100 * 5000, d};
}

// 3. Adaptive that can never turn on is LRU.
Outcome lru_reduction() {
  std::size_t diffs = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    RunConfig c;
    c.set("sets", "4");
    c.set("assoc", "4");
    c.set("window", std::to_string(8 + i));
    c.set("high-water", "1.1");
    c.set("initial-bias", "off");
    const auto trace = scenarios::random_trace(500 + i, 3000, 2, 2, 40);
    c.set("policy", "lru");
    const auto lru = run_report(c, run(trace, c.sim_options(c.policy)));
    c.set("policy", "adaptive");
    const auto adaptive = run_report(c, run(trace, c.sim_options(c.policy)));
    // The echoed config names the policy, so the comparison covers the
    // result payload: thresholds and every statistic.
    json a = adaptive["results"][0], l = lru["results"][0];
    a.erase("policy");
    l.erase("policy");
    if (a.dump(2) != l.dump(2)) ++diffs;
  }
  return {diffs == 0, "20 traces, " + std::to_string(diffs) + " differing results payloads"};
}

// 4. Protecting remote-shared lines beats LRU on the protection trace.
Outcome bias_benefit() {
  const auto trace = scenarios::protection_trace(4, 2, 3, 20);
  const std::vector<PolicyConfig> ps = {PolicyConfig::with_defaults(PolicyKind::LruOnly, 4),
                                        PolicyConfig::with_defaults(PolicyKind::BiasedAlways, 4)};
  const auto cmp = compare(trace, options(PolicyKind::LruOnly, 2, 4, 4), ps);
  const auto& lru = cmp.runs[0].stats.total;
  const auto& biased = cmp.runs[1].stats.total;
  // Expected values derived from the reference model.
  const bool frozen = lru.misses_by_source.remote_c2c == 40 && biased.misses_by_source.remote_c2c == 11 &&
                      lru.total_cost == 18400 && biased.total_cost == 14920;
  const bool directional = biased.misses_by_source.remote_c2c < lru.misses_by_source.remote_c2c &&
                           biased.total_cost < lru.total_cost;
  std::ostringstream d;
  d << "c2c lru=" << lru.misses_by_source.remote_c2c << " biased=" << biased.misses_by_source.remote_c2c
    << ", cost lru=" << lru.total_cost << " biased=" << biased.total_cost;
  return {frozen && directional, d.str()};
}

// 5. Watermark hysteresis at hand-predicted boundaries.
//
// Window 16, bias starts off. Phase 1 is 32 rounds of {s0 writes X, s1 reads
// X} on a line homed at socket 0: socket 1 misses remotely on every read
// (seq 1, 3, ..., 63) while socket 0 misses only once. Socket 1's first window
// closes on its 16th miss, seq 31, fraction 1.0: bias on. The window closing
// at seq 63 holds it on. Phase 2 is 16 socket-1 reads of fresh lines homed at
// socket 1 (seq 64..79), all local DRAM misses: fraction 0 at seq 79, bias off.
Outcome hysteresis() {
  scenarios::Builder b;
  const PhysicalAddress x = scenarios::line_in_set(0, 3, 0, 64);
  for (int r = 0; r < 32; ++r) {
    b.write(0, x);
    b.read(1, x);
  }
  for (std::uint64_t k = 0; k < 16; ++k) b.read(1, scenarios::line_in_set(1, k % 64, k / 64 + 1, 64));
  const Trace trace = b.take();

  auto o = options(PolicyKind::BiasedAdaptive, 2, 64, 4);
  o.adaptive.window_size = 16;
  o.adaptive.initial_bias = false;
  o.validate = true;
  const auto s = run(trace, o);

  const std::vector<ToggleEvent> want = {{31, 1, true}, {79, 1, false}};
  std::ostringstream d;
  d << "toggles:";
  for (const auto& t : s.adaptive_toggles) d << " seq " << t.seq << " s" << t.socket << (t.bias_enabled ? " on" : " off") << ";";
  return {s.adaptive_toggles == want && trace.size() == 80, d.str()};
}

// 6. Threshold defaults in reports and the counter bound under fuzz.
Outcome thresholds() {
  RunConfig c;
  c.set("assoc", "16");
  c.set("policy", "biased");
  const auto report = run_report(c, run({}, c.sim_options(c.policy)));
  const bool defaults = report["results"][0]["t_local"] == 4 && report["results"][0]["t_remote"] == 8 &&
                        report["config"]["t-local"] == 4 && report["config"]["t-remote"] == 8;

  std::mt19937_64 rng(606);
  const PolicyConfig cfg = PolicyConfig::with_defaults(PolicyKind::BiasedAlways, 16);
  CacheSet set(16);
  std::vector<SocketId> homes(16);
  for (WayId w = 0; w < 16; ++w) {
    on_fill(set, w, w, MoesiState::Shared, rng() % 2);
    homes[w] = static_cast<SocketId>(rng() % 2);
  }
  std::size_t broken = 0, resets = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto before_l = set.remote_sharing_local_home_counter;
    const auto before_r = set.remote_sharing_remote_home_counter;
    const auto d = select_victim(set, 0, homes, cfg, true);
    const auto after_l = set.remote_sharing_local_home_counter;
    const auto after_r = set.remote_sharing_remote_home_counter;
    if (after_l > cfg.t_local || after_r > cfg.t_remote) ++broken;
    if (d.counter_event == CounterEvent::ResetLocal) {
      ++resets;
      if (before_l != cfg.t_local || after_l != 0) ++broken;
    }
    if (d.counter_event == CounterEvent::ResetRemote) {
      ++resets;
      if (before_r != cfg.t_remote || after_r != 0) ++broken;
    }
    if (after_l < before_l && d.counter_event != CounterEvent::ResetLocal) ++broken;
    if (after_r < before_r && d.counter_event != CounterEvent::ResetRemote) ++broken;
    // Refill the victim with a fresh line, shared about half the time.
    const bool shared = rng() % 2;
    on_fill(set, d.way, 100 + i, shared ? MoesiState::Shared : MoesiState::Exclusive, shared && rng() % 4 != 0);
    homes[d.way] = static_cast<SocketId>(rng() % 2);
    // Random hits reshuffle recency.
    for (int t = static_cast<int>(rng() % 4); t > 0; --t) touch(set, static_cast<WayId>(rng() % 16));
  }
  std::ostringstream d;
  d << "t_local/t_remote reported " << report["results"][0]["t_local"] << "/" << report["results"][0]["t_remote"]
    << ", 10000 selections, " << resets << " resets, " << broken << " bound violations";
  return {defaults && broken == 0 && resets > 0, d.str()};
}

// 7. Determinism through the library interface and the executable.
std::string capture(const std::string& cmd, int& code) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    code = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int status = pclose(p);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string capi_outputs() {
  std::string all;
  numasim_config* cfg = nullptr;
  if (numasim_config_new(&cfg) != NUMASIM_OK) return "config_new failed";
  numasim_config_set(cfg, "sets", "8");
  numasim_config_set(cfg, "assoc", "4");
  numasim_config_set(cfg, "gen-kind", "migratory");
  numasim_config_set(cfg, "gen-lines", "64");
  numasim_config_set(cfg, "seed", "77");
  numasim_config_set(cfg, "window", "16");
  numasim_config_set(cfg, "policy", "adaptive");
  numasim_trace* trace = nullptr;
  if (numasim_trace_generate(cfg, &trace) == NUMASIM_OK) {
    char* s = nullptr;
    size_t n = 0;
    numasim_trace_format(trace, &s, &n);
    all.append(s, n);
    numasim_string_free(s);
    for (auto* fn : {&numasim_run, &numasim_compare}) {
      numasim_report* r = nullptr;
      if (fn(cfg, trace, &r) != NUMASIM_OK) return std::string("run failed: ") + numasim_last_error();
      for (auto f : {NUMASIM_FORMAT_JSON, NUMASIM_FORMAT_TABLE}) {
        numasim_report_render(r, f, &s, &n);
        all.append(s, n);
        numasim_string_free(s);
      }
      numasim_report_free(r);
    }
    numasim_trace_free(trace);
  }
  numasim_config_free(cfg);
  return all;
}

Outcome determinism() {
  const std::string first = capi_outputs();
  bool ok = first == capi_outputs() && first.size() > 1000;

  const std::string cli = NUMASIM_CLI_PATH;
  const std::vector<std::string> invocations = {
      "gen --kind private --sockets 2 --seed 7",
      "gen --kind pc --sets 16 --gen-lines 40 --seed 3",
      "run --policy adaptive --gen-kind uniform --gen-lines 64 --gen-iterations 5000 --sets 4 --assoc 4 --window 32 "
      "--seed 9 --report json",
      "compare --gen-kind producer-consumer --gen-lines 96 --sets 16 --assoc 4 --seed 4 --report json",
      "compare --policies lru,biased --gen-kind migratory --sets 8 --assoc 4 --seed 4 --report table"};
  std::size_t same = 0;
  for (const auto& args : invocations) {
    int c1 = 0, c2 = 0;
    const std::string a = capture(cli + " " + args, c1);
    const std::string b = capture(cli + " " + args, c2);
    if (c1 == 0 && c2 == 0 && !a.empty() && a == b) ++same;
  }
  ok = ok && same == invocations.size();
  return {ok, "C API repeat identical, " + std::to_string(same) + "/" + std::to_string(invocations.size()) +
                  " CLI invocations byte-identical"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"1 oracle equivalence", 5.0, oracle_equivalence},
      {"2 coherence invariant fuzz", 60.0, invariant_fuzz},
      {"3 adaptive never-on equals lru", 0.0, lru_reduction},
      {"4 bias protects remote-shared lines", 1.0, bias_benefit},
      {"5 watermark hysteresis boundaries", 0.0, hysteresis},
      {"6 threshold defaults and counter bound", 0.0, thresholds},
      {"7 determinism", 0.0, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += ", over time budget";
    }
    if (!o.pass) ++failures;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.name << "] " << o.detail << " (" << timing << ")\n";
  }
  return failures;
}
