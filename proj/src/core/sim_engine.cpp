// SPDX-License-Identifier: Apache-2.0

#include "core/sim_engine.hpp"

#include <future>

namespace numasim {

void LatencyModel::validate() const {
  if (!(llc_hit < remote_c2c)) throw ConfigError("latency ordering requires lat-llc < lat-c2c");
  if (!(remote_c2c <= remote_dram)) throw ConfigError("latency ordering requires lat-c2c <= lat-rdram");
  if (!(local_dram < remote_dram)) throw ConfigError("latency ordering requires lat-ldram < lat-rdram");
}

std::uint64_t LatencyModel::cost(ServiceSource source) const {
  switch (source) {
    case ServiceSource::LocalHit: return llc_hit;
    case ServiceSource::RemoteCacheToCache: return remote_c2c;
    case ServiceSource::LocalDram: return local_dram;
    case ServiceSource::RemoteDram: return remote_dram;
  }
  return 0;
}

Simulator::Simulator(const SimOptions& opts) : opts_(opts), system_(opts.topology, opts.policy) {
  opts_.adaptive.validate();
  opts_.latency.validate();
  controllers_.assign(opts_.topology.num_sockets, AdaptiveController(opts_.adaptive));
  stats_.per_socket.assign(opts_.topology.num_sockets, Counters{});
}

bool Simulator::bias_enabled(SocketId socket) const {
  switch (opts_.policy.kind) {
    case PolicyKind::LruOnly: return false;
    case PolicyKind::BiasedAlways: return true;
    case PolicyKind::BiasedAdaptive: return controllers_.at(socket).is_bias_enabled();
  }
  return false;
}

namespace {

void account(Counters& c, const FillOutcome& out, const LatencyModel& lat) {
  ++c.accesses;
  c.total_cost += lat.cost(out.service_source);
  c.writebacks += out.evictions.size();
  if (out.hit()) {
    ++c.hits;
  } else {
    ++c.misses;
    switch (out.service_source) {
      case ServiceSource::RemoteCacheToCache: ++c.misses_by_source.remote_c2c; break;
      case ServiceSource::LocalDram: ++c.misses_by_source.local_dram; break;
      case ServiceSource::RemoteDram: ++c.misses_by_source.remote_dram; break;
      case ServiceSource::LocalHit: break;
    }
  }
  if (out.victim) {
    if (out.victim->biased) ++c.bias_events;
    if (out.victim->counter_event == CounterEvent::ResetLocal || out.victim->counter_event == CounterEvent::ResetRemote)
      ++c.counter_resets;
  }
}

}  // namespace

FillOutcome Simulator::step(const AccessRecord& rec) {
  const bool bias = bias_enabled(rec.socket);
  FillOutcome out = rec.op == AccessOp::Read ? system_.handle_read(rec.socket, rec.addr, bias)
                                             : system_.handle_write(rec.socket, rec.addr, bias);

  account(stats_.total, out, opts_.latency);
  account(stats_.per_socket[rec.socket], out, opts_.latency);

  if (!out.hit()) {
    auto& ctl = controllers_[rec.socket];
    if (auto w = ctl.record_miss(opts_.adaptive.is_remote(out.service_source))) {
      stats_.windows.push_back(WindowSample{rec.seq, rec.socket, w->remote_misses, w->misses});
      if (w->changed && opts_.policy.kind == PolicyKind::BiasedAdaptive)
        stats_.adaptive_toggles.push_back(ToggleEvent{rec.seq, rec.socket, w->bias_enabled});
    }
  }

  if (opts_.validate) {
    const auto violations = system_.check_global_invariants();
    if (!violations.empty()) {
      std::string msg = "coherence invariant violated after seq " + std::to_string(rec.seq) + ":";
      for (const auto& v : violations) msg += " [" + describe(v) + "]";
      throw InternalError(msg);
    }
  }
  return out;
}

SimStats run(std::span<const AccessRecord> trace, const SimOptions& opts) {
  Simulator sim(opts);
  for (const auto& rec : trace) sim.step(rec);
  return sim.stats();
}

Comparison compare(std::span<const AccessRecord> trace, const SimOptions& base, std::span<const PolicyConfig> policies) {
  if (policies.empty()) throw ConfigError("compare needs at least one policy");

  std::vector<std::future<SimStats>> pending;
  pending.reserve(policies.size());
  for (const auto& p : policies) {
    SimOptions opts = base;
    opts.policy = p;
    pending.push_back(std::async(std::launch::async, [trace, opts] { return run(trace, opts); }));
  }

  Comparison cmp;
  for (std::size_t i = 0; i < policies.size(); ++i) cmp.runs.push_back(PolicyRun{policies[i], pending[i].get()});

  const Counters& ref = cmp.runs.front().stats.total;
  auto diff = [](std::uint64_t a, std::uint64_t b) { return static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b); };
  for (const auto& r : cmp.runs) {
    const Counters& c = r.stats.total;
    cmp.deltas.push_back(PolicyDelta{diff(c.misses, ref.misses),
                                     diff(c.misses_by_source.remote_c2c, ref.misses_by_source.remote_c2c),
                                     diff(c.total_cost, ref.total_cost)});
  }
  return cmp;
}

}  // namespace numasim
