// SPDX-License-Identifier: Apache-2.0

#include "core/report.hpp"

#include <algorithm>
#include <sstream>

namespace numasim {

namespace {

ordered_json counters_to_json(const Counters& c) {
  ordered_json j;
  j["accesses"] = c.accesses;
  j["hits"] = c.hits;
  j["misses"] = c.misses;
  j["misses_by_source"] = {{"remote_c2c", c.misses_by_source.remote_c2c},
                           {"local_dram", c.misses_by_source.local_dram},
                           {"remote_dram", c.misses_by_source.remote_dram}};
  j["writebacks"] = c.writebacks;
  j["bias_events"] = c.bias_events;
  j["counter_resets"] = c.counter_resets;
  j["total_cost"] = c.total_cost;
  return j;
}

ordered_json policy_entry(const PolicyConfig& p) {
  ordered_json j;
  j["policy"] = to_string(p.kind);
  j["t_local"] = p.t_local;
  j["t_remote"] = p.t_remote;
  return j;
}

}  // namespace

ordered_json stats_to_json(const SimStats& s) {
  ordered_json j = counters_to_json(s.total);
  ordered_json toggles = ordered_json::array();
  for (const auto& t : s.adaptive_toggles)
    toggles.push_back({{"seq", t.seq}, {"socket", t.socket}, {"bias_enabled", t.bias_enabled}});
  j["adaptive_toggles"] = std::move(toggles);
  ordered_json windows = ordered_json::array();
  for (const auto& w : s.windows)
    windows.push_back({{"seq", w.seq},
                       {"socket", w.socket},
                       {"remote_misses", w.remote_misses},
                       {"misses", w.misses},
                       {"remote_miss_fraction", w.fraction()}});
  j["windows"] = std::move(windows);
  ordered_json per = ordered_json::array();
  for (std::size_t i = 0; i < s.per_socket.size(); ++i) {
    ordered_json e;
    e["socket"] = i;
    e.update(counters_to_json(s.per_socket[i]));
    per.push_back(std::move(e));
  }
  j["per_socket"] = std::move(per);
  return j;
}

ordered_json config_to_json(const RunConfig& cfg, bool compare) {
  auto opt = [](const auto& o) { return o ? ordered_json(*o) : ordered_json(nullptr); };
  const PolicyConfig resolved = cfg.policy_config(cfg.policy);
  ordered_json j;
  j["sockets"] = cfg.topology.num_sockets;
  j["cores-per-socket"] = cfg.topology.cores_per_socket;
  j["sets"] = cfg.topology.llc_sets;
  j["assoc"] = cfg.topology.llc_assoc;
  j["line-size"] = cfg.topology.line_size_bytes;
  j["address-width"] = cfg.topology.address_width;
  if (compare) {
    ordered_json ps = ordered_json::array();
    for (auto k : cfg.policies) ps.push_back(to_string(k));
    j["policies"] = std::move(ps);
  } else {
    j["policy"] = to_string(cfg.policy);
  }
  j["t-local"] = resolved.t_local;
  j["t-remote"] = resolved.t_remote;
  j["window"] = cfg.adaptive.window_size;
  j["high-water"] = cfg.adaptive.high_water;
  j["low-water"] = cfg.adaptive.low_water;
  j["initial-bias"] = cfg.adaptive.initial_bias;
  j["remote-miss-def"] = to_string(cfg.adaptive.remote_miss_def);
  j["lat-llc"] = cfg.latency.llc_hit;
  j["lat-c2c"] = cfg.latency.remote_c2c;
  j["lat-ldram"] = cfg.latency.local_dram;
  j["lat-rdram"] = cfg.latency.remote_dram;
  j["trace"] = opt(cfg.trace_path);
  j["gen-kind"] = cfg.gen_kind ? ordered_json(to_string(*cfg.gen_kind)) : ordered_json(nullptr);
  j["gen-lines"] = cfg.gen_lines;
  j["gen-iterations"] = cfg.gen_iterations;
  j["gen-pairs"] = format_socket_pairs(cfg.gen_pairs);
  j["gen-home"] = opt(cfg.gen_home);
  j["seed"] = cfg.seed;
  j["validate"] = cfg.validate_mode;
  return j;
}

ordered_json run_report(const RunConfig& cfg, const SimStats& stats) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["command"] = "run";
  j["config"] = config_to_json(cfg, false);
  ordered_json r = policy_entry(cfg.policy_config(cfg.policy));
  r["stats"] = stats_to_json(stats);
  j["results"] = ordered_json::array({std::move(r)});
  return j;
}

ordered_json compare_report(const RunConfig& cfg, const Comparison& cmp) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["command"] = "compare";
  j["config"] = config_to_json(cfg, true);
  ordered_json results = ordered_json::array();
  for (const auto& r : cmp.runs) {
    ordered_json e = policy_entry(r.policy);
    e["stats"] = stats_to_json(r.stats);
    results.push_back(std::move(e));
  }
  j["results"] = std::move(results);
  ordered_json deltas = ordered_json::array();
  for (std::size_t i = 0; i < cmp.deltas.size(); ++i)
    deltas.push_back({{"policy", to_string(cmp.runs[i].policy.kind)},
                      {"misses", cmp.deltas[i].misses},
                      {"remote_c2c_misses", cmp.deltas[i].remote_c2c_misses},
                      {"total_cost", cmp.deltas[i].total_cost}});
  j["deltas"] = std::move(deltas);
  return j;
}

RunConfig config_from_json(const ordered_json& config) {
  RunConfig cfg;
  for (const auto& [key, value] : config.items()) {
    if (value.is_null()) continue;
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
      if (text.empty() && key == "gen-pairs") continue;
    } else if (value.is_boolean()) {
      text = value.get<bool>() ? "on" : "off";
    } else if (value.is_array()) {
      for (const auto& v : value) text += (text.empty() ? "" : ",") + v.get<std::string>();
    } else {
      text = value.dump();
    }
    cfg.set(key, text);
  }
  return cfg;
}

std::string render_json(const ordered_json& report) { return report.dump(2) + "\n"; }

namespace {

std::string cell(const ordered_json& v) {
  if (v.is_number_float()) {
    std::ostringstream o;
    o.precision(4);
    o << std::fixed << v.get<double>();
    return o.str();
  }
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

std::string render_table(const ordered_json& report) {
  const auto& results = report.at("results");
  std::vector<std::string> header = {"metric"};
  for (const auto& r : results) header.push_back(r.at("policy").get<std::string>());

  std::vector<std::vector<std::string>> rows;
  auto add = [&](const std::string& name, auto&& get) {
    std::vector<std::string> row = {name};
    for (const auto& r : results) row.push_back(cell(get(r)));
    rows.push_back(std::move(row));
  };
  add("t_local", [](const ordered_json& r) { return r.at("t_local"); });
  add("t_remote", [](const ordered_json& r) { return r.at("t_remote"); });
  for (const char* k : {"accesses", "hits", "misses"})
    add(k, [k](const ordered_json& r) { return r.at("stats").at(k); });
  for (const char* k : {"remote_c2c", "local_dram", "remote_dram"})
    add(std::string("misses.") + k, [k](const ordered_json& r) { return r.at("stats").at("misses_by_source").at(k); });
  for (const char* k : {"writebacks", "bias_events", "counter_resets", "total_cost"})
    add(k, [k](const ordered_json& r) { return r.at("stats").at(k); });
  add("adaptive_toggles", [](const ordered_json& r) { return ordered_json(r.at("stats").at("adaptive_toggles").size()); });
  add("windows", [](const ordered_json& r) { return ordered_json(r.at("stats").at("windows").size()); });
  if (report.contains("deltas")) {
    const auto& deltas = report.at("deltas");
    for (const char* k : {"misses", "remote_c2c_misses", "total_cost"}) {
      std::vector<std::string> row = {std::string("delta.") + k};
      for (const auto& d : deltas) row.push_back(cell(d.at(k)));
      rows.push_back(std::move(row));
    }
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

  std::ostringstream out;
  const auto& cfg = report.at("config");
  out << report.at("command").get<std::string>() << ": sockets=" << cfg.at("sockets") << " sets=" << cfg.at("sets")
      << " assoc=" << cfg.at("assoc") << " line-size=" << cfg.at("line-size") << " window=" << cfg.at("window")
      << " lat(llc/c2c/ldram/rdram)=" << cfg.at("lat-llc") << "/" << cfg.at("lat-c2c") << "/" << cfg.at("lat-ldram")
      << "/" << cfg.at("lat-rdram") << "\n";
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << row[c] << std::string(width[c] - row[c].size(), ' ');
      } else {
        out << "  " << std::string(width[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << "\n";
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  out << std::string(total - 2, '-') << "\n";
  for (const auto& row : rows) emit(row);
  return out.str();
}

}  // namespace numasim
