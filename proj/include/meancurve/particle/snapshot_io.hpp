#pragma once

#include <filesystem>

#include "meancurve/particle/configuration.hpp"

namespace meancurve {

/// CSV with header `t,x1,..,xd,eta`, one row per site.
void write_snapshot_csv(const Configuration& config, const std::filesystem::path& path);

/// Dense little-endian int32 dump of eta in flat row-major order, plus a JSON
/// sidecar `<path>.json` holding {d, N, t}.
void write_snapshot_binary(const Configuration& config, const std::filesystem::path& path);
Configuration read_snapshot_binary(const std::filesystem::path& path);

}  // namespace meancurve
