// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "core/types.hpp"

namespace numasim {

enum class RemoteMissDefinition : std::uint8_t {
  AnyRemote,  // remote cache-to-cache or remote DRAM
  CacheToCacheOnly,
};

const char* to_string(RemoteMissDefinition d);
RemoteMissDefinition parse_remote_miss_definition(const std::string& name);

struct AdaptiveParams {
  std::uint64_t window_size = 1024;  // in LLC misses
  double high_water = 0.5;
  double low_water = 0.1;
  bool initial_bias = true;
  RemoteMissDefinition remote_miss_def = RemoteMissDefinition::AnyRemote;

  void validate() const;
  bool is_remote(ServiceSource source) const;
};

struct WindowClose {
  std::uint64_t remote_misses = 0;
  std::uint64_t misses = 0;
  bool bias_enabled = false;  // flag after the window closed
  bool changed = false;

  double fraction() const { return misses == 0 ? 0.0 : static_cast<double>(remote_misses) / static_cast<double>(misses); }
};

// Remote-miss-fraction watermark controller for one socket's LLC. The flag
// only moves when a window of `window_size` misses closes.
class AdaptiveController {
 public:
  explicit AdaptiveController(const AdaptiveParams& params);

  std::optional<WindowClose> record_miss(bool is_remote);

  bool is_bias_enabled() const { return bias_enabled_; }
  std::uint64_t misses_in_window() const { return misses_; }
  std::uint64_t remote_misses_in_window() const { return remote_; }
  const AdaptiveParams& params() const { return params_; }

 private:
  AdaptiveParams params_;
  std::uint64_t misses_ = 0;
  std::uint64_t remote_ = 0;
  bool bias_enabled_;
};

}  // namespace numasim
