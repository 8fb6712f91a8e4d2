#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lbs/ldt.hpp"
#include "lbs/protocol.hpp"
#include "lbs/trigger.hpp"

namespace lbs::sim {

using store::Tick;

/// External location query scheduled for a given tick.
struct ScheduledMtLr {
    Tick t = 0;
    protocol::MtLrRequest request;
};

struct SimConfig {
    std::uint64_t seed = 0;
    Tick ticks = 1;
    std::vector<ldt::BaseStation> base_stations;
    std::vector<protocol::LcsClient> lcs_clients;
    trigger::TriggerConfig trigger;
    double ta_band = ldt::kDefaultTaBand;
    std::vector<ScheduledMtLr> mt_lr_requests;
    std::filesystem::path routes_path;
    std::filesystem::path snapshot_path;
    std::filesystem::path out_dir;
};

/// Throws Error(ConfigError) naming the offending field.
void validate(const SimConfig& cfg);

/// Relative paths inside the document resolve against `base_dir`.
SimConfig config_from_json(std::string_view text, const std::filesystem::path& base_dir = {});
SimConfig load_config(const std::filesystem::path& path);

}  // namespace lbs::sim
