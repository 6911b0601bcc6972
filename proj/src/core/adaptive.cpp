// SPDX-License-Identifier: Apache-2.0

#include "core/adaptive.hpp"

#include <cmath>

namespace numasim {

const char* to_string(RemoteMissDefinition d) {
  return d == RemoteMissDefinition::AnyRemote ? "any-remote" : "c2c-only";
}

RemoteMissDefinition parse_remote_miss_definition(const std::string& name) {
  if (name == "any-remote") return RemoteMissDefinition::AnyRemote;
  if (name == "c2c-only") return RemoteMissDefinition::CacheToCacheOnly;
  throw ConfigError("unknown remote-miss-def '" + name + "' (expected any-remote or c2c-only)");
}

void AdaptiveParams::validate() const {
  if (window_size == 0) throw ConfigError("window must be >= 1");
  if (!std::isfinite(low_water) || !std::isfinite(high_water)) throw ConfigError("watermarks must be finite");
  if (low_water < 0.0 || low_water > 1.0) throw ConfigError("low-water must be in [0, 1]");
  // high_water above 1 is allowed: it pins the bias off once disabled.
  if (high_water < low_water) throw ConfigError("high-water must be >= low-water");
}

bool AdaptiveParams::is_remote(ServiceSource source) const {
  if (source == ServiceSource::RemoteCacheToCache) return true;
  return remote_miss_def == RemoteMissDefinition::AnyRemote && source == ServiceSource::RemoteDram;
}

AdaptiveController::AdaptiveController(const AdaptiveParams& params)
    : params_(params), bias_enabled_(params.initial_bias) {
  params_.validate();
}

std::optional<WindowClose> AdaptiveController::record_miss(bool is_remote) {
  ++misses_;
  if (is_remote) ++remote_;
  if (misses_ < params_.window_size) return std::nullopt;

  WindowClose w{remote_, misses_, bias_enabled_, false};
  const double fraction = w.fraction();
  const bool before = bias_enabled_;
  if (fraction > params_.high_water)
    bias_enabled_ = true;
  else if (fraction < params_.low_water)
    bias_enabled_ = false;
  w.bias_enabled = bias_enabled_;
  w.changed = before != bias_enabled_;
  misses_ = 0;
  remote_ = 0;
  return w;
}

}  // namespace numasim
