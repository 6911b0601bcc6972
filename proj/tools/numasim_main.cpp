// SPDX-License-Identifier: Apache-2.0

// numasim command-line front end. Talks to the simulator only through the
// C API in numasim/numasim.h.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "numasim/numasim.h"

namespace {

struct ConfigDeleter {
  void operator()(numasim_config* c) const { numasim_config_free(c); }
};
struct TraceDeleter {
  void operator()(numasim_trace* t) const { numasim_trace_free(t); }
};
struct ReportDeleter {
  void operator()(numasim_report* r) const { numasim_report_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { numasim_string_free(s); }
};

using ConfigPtr = std::unique_ptr<numasim_config, ConfigDeleter>;
using TracePtr = std::unique_ptr<numasim_trace, TraceDeleter>;
using ReportPtr = std::unique_ptr<numasim_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Carries a C API status out to main() as the process exit code.
struct Failure {
  int code;
  std::string message;
};

void check(numasim_status s) {
  if (s != NUMASIM_OK) throw Failure{static_cast<int>(s), std::string(numasim_status_name(s)) + ": " + numasim_last_error()};
}

// Flag values as given on the command line, keyed by config key.
struct Flags {
  std::string config_file;
  std::string out;
  std::map<std::string, std::string> values;
  bool validate = false;
};

void add_value(CLI::App* app, Flags& flags, const std::string& names, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(names, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
}

void add_common(CLI::App* app, Flags& flags) {
  app->add_option("--config", flags.config_file, "key=value defaults file; flags override it");
  add_value(app, flags, "--sockets", "sockets", "number of sockets (power of two)");
  add_value(app, flags, "--cores-per-socket", "cores-per-socket", "cores per socket");
  add_value(app, flags, "--sets", "sets", "LLC sets per socket (power of two)");
  add_value(app, flags, "--assoc", "assoc", "LLC associativity (>= 2)");
  add_value(app, flags, "--line-size", "line-size", "line size in bytes (power of two)");
  add_value(app, flags, "--address-width", "address-width", "physical address width in bits");
  add_value(app, flags, "--seed", "seed", "generator seed");
  add_value(app, flags, "--gen-kind,--kind", "gen-kind",
            "synthetic workload: producer-consumer, migratory, private, shared-readonly, uniform");
  add_value(app, flags, "--gen-lines", "gen-lines", "generator working set in lines");
  add_value(app, flags, "--gen-iterations", "gen-iterations", "generator iterations");
  add_value(app, flags, "--gen-pairs", "gen-pairs", "producer:consumer socket pairs, comma separated");
  add_value(app, flags, "--gen-home", "gen-home", "pin generated lines to one home socket");
  app->add_option("--out", flags.out, "write output here instead of stdout");
}

void add_sim(CLI::App* app, Flags& flags) {
  add_value(app, flags, "--trace", "trace", "trace file");
  add_value(app, flags, "--t-local", "t-local", "local-home bias threshold (default assoc/4)");
  add_value(app, flags, "--t-remote", "t-remote", "remote-home bias threshold (default assoc/2)");
  add_value(app, flags, "--window", "window", "adaptive window in LLC misses");
  add_value(app, flags, "--high-water", "high-water", "remote miss fraction that turns the bias on");
  add_value(app, flags, "--low-water", "low-water", "remote miss fraction that turns the bias off");
  add_value(app, flags, "--initial-bias", "initial-bias", "adaptive bias at start: on|off");
  add_value(app, flags, "--remote-miss-def", "remote-miss-def", "any-remote|c2c-only");
  add_value(app, flags, "--lat-llc", "lat-llc", "LLC hit cost");
  add_value(app, flags, "--lat-c2c", "lat-c2c", "remote cache-to-cache cost");
  add_value(app, flags, "--lat-ldram", "lat-ldram", "local DRAM cost");
  add_value(app, flags, "--lat-rdram", "lat-rdram", "remote DRAM cost");
  add_value(app, flags, "--report", "report", "json|table");
  app->add_flag("--validate", flags.validate, "check coherence invariants after every access");
}

ConfigPtr build_config(const Flags& flags) {
  numasim_config* raw = nullptr;
  check(numasim_config_new(&raw));
  ConfigPtr cfg(raw);
  if (!flags.config_file.empty()) check(numasim_config_load_file(cfg.get(), flags.config_file.c_str()));
  for (const auto& [k, v] : flags.values) check(numasim_config_set(cfg.get(), k.c_str(), v.c_str()));
  if (flags.validate) check(numasim_config_set(cfg.get(), "validate", "on"));
  return cfg;
}

void refuse_overwriting_input(const Flags& flags) {
  if (flags.out.empty()) return;
  auto it = flags.values.find("trace");
  std::error_code ec;
  if (it != flags.values.end() && std::filesystem::equivalent(it->second, flags.out, ec))
    throw Failure{static_cast<int>(NUMASIM_ERR_CONFIG), "config error: --out would overwrite the input trace"};
}

void emit(const Flags& flags, const char* data, size_t len) {
  if (flags.out.empty()) {
    std::fwrite(data, 1, len, stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream f(flags.out, std::ios::binary | std::ios::trunc);
  if (!f) throw Failure{static_cast<int>(NUMASIM_ERR_IO), "i/o error: cannot write '" + flags.out + "'"};
  f.write(data, static_cast<std::streamsize>(len));
}

void emit_report(const Flags& flags, const numasim_config* cfg, const numasim_report* report) {
  char* raw = nullptr;
  size_t len = 0;
  check(numasim_report_render(report, numasim_config_report_format(cfg), &raw, &len));
  StringPtr text(raw);
  emit(flags, text.get(), len);
}

TracePtr load_trace(const numasim_config* cfg) {
  numasim_trace* raw = nullptr;
  check(numasim_trace_from_config(cfg, &raw));
  return TracePtr(raw);
}

void cmd_run(const Flags& flags) {
  refuse_overwriting_input(flags);
  ConfigPtr cfg = build_config(flags);
  check(numasim_config_validate(cfg.get()));
  TracePtr trace = load_trace(cfg.get());
  numasim_report* raw = nullptr;
  check(numasim_run(cfg.get(), trace.get(), &raw));
  ReportPtr report(raw);
  emit_report(flags, cfg.get(), report.get());
}

void cmd_compare(const Flags& flags) {
  refuse_overwriting_input(flags);
  ConfigPtr cfg = build_config(flags);
  check(numasim_config_validate(cfg.get()));
  TracePtr trace = load_trace(cfg.get());
  numasim_report* raw = nullptr;
  check(numasim_compare(cfg.get(), trace.get(), &raw));
  ReportPtr report(raw);
  emit_report(flags, cfg.get(), report.get());
}

void cmd_gen(const Flags& flags) {
  ConfigPtr cfg = build_config(flags);
  check(numasim_config_validate(cfg.get()));
  numasim_trace* raw = nullptr;
  check(numasim_trace_generate(cfg.get(), &raw));
  TracePtr trace(raw);
  char* text = nullptr;
  size_t len = 0;
  check(numasim_trace_format(trace.get(), &text, &len));
  StringPtr owned(text);
  emit(flags, owned.get(), len);
}

void cmd_validate_trace(const Flags& flags) {
  if (!flags.values.count("trace")) throw Failure{static_cast<int>(NUMASIM_ERR_CONFIG), "config error: --trace is required"};
  ConfigPtr cfg = build_config(flags);
  numasim_trace* raw = nullptr;
  check(numasim_trace_load_file(cfg.get(), flags.values.at("trace").c_str(), &raw));
  TracePtr trace(raw);
  const std::string msg = "ok: " + std::to_string(numasim_trace_size(trace.get())) + " records\n";
  emit(flags, msg.data(), msg.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numasim: multi-socket LLC replacement and coherence simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(numasim_version()));

  Flags run_flags, compare_flags, gen_flags, validate_flags;

  auto* run = app.add_subcommand("run", "simulate one policy over a trace");
  add_common(run, run_flags);
  add_sim(run, run_flags);
  add_value(run, run_flags, "--policy", "policy", "lru|biased|adaptive");

  auto* compare = app.add_subcommand("compare", "simulate several policies over the same trace");
  add_common(compare, compare_flags);
  add_sim(compare, compare_flags);
  add_value(compare, compare_flags, "--policies", "policies", "comma separated policy list, first is the baseline (default lru,biased,adaptive)");

  auto* gen = app.add_subcommand("gen", "emit a synthetic trace");
  add_common(gen, gen_flags);

  auto* validate = app.add_subcommand("validate-trace", "parse-check a trace file");
  add_common(validate, validate_flags);
  add_value(validate, validate_flags, "--trace", "trace", "trace file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) cmd_run(run_flags);
    else if (*compare) cmd_compare(compare_flags);
    else if (*gen) cmd_gen(gen_flags);
    else if (*validate) cmd_validate_trace(validate_flags);
  } catch (const Failure& f) {
    std::cerr << "numasim: " << f.message << "\n";
    return f.code;
  }
  return 0;
}
