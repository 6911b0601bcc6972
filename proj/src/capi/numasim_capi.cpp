// SPDX-License-Identifier: Apache-2.0

#include "numasim/numasim.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "core/report.hpp"

struct numasim_config {
  numasim::RunConfig cfg;
};

struct numasim_trace {
  numasim::Trace records;
};

struct numasim_report {
  numasim::ordered_json json;
};

namespace {

thread_local std::string g_last_error;

class IoError : public numasim::Error {
 public:
  using numasim::Error::Error;
};

numasim_status fail(numasim_status status, std::string msg) {
  g_last_error = std::move(msg);
  return status;
}

// Runs `body` and maps the numasim error hierarchy onto status codes.
template <typename F>
numasim_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return NUMASIM_OK;
  } catch (const numasim::ConfigError& e) {
    return fail(NUMASIM_ERR_CONFIG, e.what());
  } catch (const numasim::ParseError& e) {
    return fail(NUMASIM_ERR_PARSE, e.what());
  } catch (const numasim::ValidationError& e) {
    return fail(NUMASIM_ERR_VALIDATION, e.what());
  } catch (const IoError& e) {
    return fail(NUMASIM_ERR_IO, e.what());
  } catch (const numasim::InternalError& e) {
    return fail(NUMASIM_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(NUMASIM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NUMASIM_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s, size_t* len) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  if (len) *len = s.size();
  return out;
}

numasim::Trace load_trace_file(const numasim::RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path + "'");
  return numasim::parse_trace(in, cfg.topology);
}

}  // namespace

extern "C" {

const char* numasim_version(void) { return "1.0.0"; }

const char* numasim_last_error(void) { return g_last_error.c_str(); }

const char* numasim_status_name(numasim_status status) {
  switch (status) {
    case NUMASIM_OK: return "ok";
    case NUMASIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NUMASIM_ERR_CONFIG: return "config error";
    case NUMASIM_ERR_PARSE: return "parse error";
    case NUMASIM_ERR_VALIDATION: return "validation error";
    case NUMASIM_ERR_IO: return "i/o error";
    case NUMASIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void numasim_string_free(char* s) { std::free(s); }

numasim_status numasim_config_new(numasim_config** out) {
  if (!out) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *out = new numasim_config{}; });
}

void numasim_config_free(numasim_config* cfg) { delete cfg; }

numasim_status numasim_config_set(numasim_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { cfg->cfg.set(key, value); });
}

numasim_status numasim_config_load_file(numasim_config* cfg, const char* path) {
  if (!cfg || !path) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  std::ifstream in(path);
  if (!in) return fail(NUMASIM_ERR_IO, std::string("cannot open config file '") + path + "'");
  return guarded([&] { cfg->cfg.load(in); });
}

numasim_status numasim_config_validate(const numasim_config* cfg) {
  if (!cfg) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null config");
  return guarded([&] { cfg->cfg.validate(); });
}

numasim_format numasim_config_report_format(const numasim_config* cfg) {
  return cfg && cfg->cfg.report == numasim::ReportFormat::Json ? NUMASIM_FORMAT_JSON : NUMASIM_FORMAT_TABLE;
}

numasim_status numasim_trace_load_file(const numasim_config* cfg, const char* path, numasim_trace** out) {
  if (!cfg || !path || !out) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->cfg.topology.validate();
    *out = new numasim_trace{load_trace_file(cfg->cfg, path)};
  });
}

numasim_status numasim_trace_parse(const numasim_config* cfg, const char* text, size_t len, numasim_trace** out) {
  if (!cfg || (!text && len) || !out) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->cfg.topology.validate();
    *out = new numasim_trace{numasim::parse_trace(std::string(text ? text : "", len), cfg->cfg.topology)};
  });
}

numasim_status numasim_trace_generate(const numasim_config* cfg, numasim_trace** out) {
  if (!cfg || !out) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new numasim_trace{numasim::generate(cfg->cfg.generator_spec(), cfg->cfg.topology)}; });
}

numasim_status numasim_trace_from_config(const numasim_config* cfg, numasim_trace** out) {
  if (!cfg || !out) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  const auto status = guarded([&] { cfg->cfg.require_single_trace_source(); });
  if (status != NUMASIM_OK) return status;
  if (cfg->cfg.trace_path) return numasim_trace_load_file(cfg, cfg->cfg.trace_path->c_str(), out);
  return numasim_trace_generate(cfg, out);
}

size_t numasim_trace_size(const numasim_trace* trace) { return trace ? trace->records.size() : 0; }

numasim_status numasim_trace_format(const numasim_trace* trace, char** out, size_t* len) {
  if (!trace || !out) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = dup_string(numasim::format_trace(trace->records), len); });
}

void numasim_trace_free(numasim_trace* trace) { delete trace; }

numasim_status numasim_run(const numasim_config* cfg, const numasim_trace* trace, numasim_report** out) {
  if (!cfg || !trace || !out) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->cfg.validate();
    const auto stats = numasim::run(trace->records, cfg->cfg.sim_options(cfg->cfg.policy));
    *out = new numasim_report{numasim::run_report(cfg->cfg, stats)};
  });
}

numasim_status numasim_compare(const numasim_config* cfg, const numasim_trace* trace, numasim_report** out) {
  if (!cfg || !trace || !out) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->cfg.validate();
    if (cfg->cfg.policies.empty()) throw numasim::ConfigError("compare needs --policies");
    std::vector<numasim::PolicyConfig> policies;
    for (auto k : cfg->cfg.policies) policies.push_back(cfg->cfg.policy_config(k));
    const auto cmp = numasim::compare(trace->records, cfg->cfg.sim_options(numasim::PolicyKind::LruOnly), policies);
    *out = new numasim_report{numasim::compare_report(cfg->cfg, cmp)};
  });
}

void numasim_report_free(numasim_report* report) { delete report; }

numasim_status numasim_report_render(const numasim_report* report, numasim_format format, char** out, size_t* len) {
  if (!report || !out) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string s =
        format == NUMASIM_FORMAT_JSON ? numasim::render_json(report->json) : numasim::render_table(report->json);
    *out = dup_string(s, len);
  });
}

size_t numasim_report_run_count(const numasim_report* report) { return report ? report->json.at("results").size() : 0; }

numasim_status numasim_report_counter(const numasim_report* report, size_t run_index, const char* name,
                                      uint64_t* out) {
  if (!report || !name || !out) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "null argument");
  const auto& results = report->json.at("results");
  if (run_index >= results.size()) return fail(NUMASIM_ERR_INVALID_ARGUMENT, "run index out of range");
  const auto& stats = results[run_index].at("stats");
  const std::string key = name;
  const auto& by_source = stats.at("misses_by_source");
  if (by_source.contains(key)) {
    *out = by_source.at(key).get<uint64_t>();
  } else if (stats.contains(key) && stats.at(key).is_number_unsigned()) {
    *out = stats.at(key).get<uint64_t>();
  } else {
    return fail(NUMASIM_ERR_INVALID_ARGUMENT, "unknown counter '" + key + "'");
  }
  return NUMASIM_OK;
}

}  // extern "C"
