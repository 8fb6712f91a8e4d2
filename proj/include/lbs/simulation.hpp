#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lbs/config.hpp"
#include "lbs/dispatch.hpp"
#include "lbs/error.hpp"
#include "lbs/ldt.hpp"
#include "lbs/protocol.hpp"
#include "lbs/route.hpp"
#include "lbs/store.hpp"
#include "lbs/trigger.hpp"

namespace lbs::sim {

/// One line of events.jsonl, without the trailing newline. Keys in order:
/// kind, msisdn, counterpart, distance (3 decimals), timestamp.
std::string to_jsonl(const trigger::TriggerEvent& event);

struct MtLrOutcome {
    Tick t = 0;
    protocol::MtLrRequest request;
    std::optional<protocol::LocationReport> report;
    std::optional<ErrorCode> rejection;
};

std::string to_jsonl(const MtLrOutcome& outcome);

struct TickOutcome {
    Tick t = 0;
    std::vector<protocol::LocationReport> reports;
    std::vector<trigger::TriggerEvent> events;  // area events first, then proximity
    std::vector<dispatch::AdMessage> messages;
    std::vector<MtLrOutcome> mt_lr;
};

struct SimReport {
    std::size_t reports = 0;
    std::size_t enters = 0;
    std::size_t exits = 0;
    std::size_t proximities = 0;
    std::size_t messages = 0;
    std::size_t mt_lr_served = 0;
    std::size_t mt_lr_rejected = 0;
    std::map<std::string, std::size_t> messages_per_advertiser;
    std::vector<std::string> warnings;
    std::filesystem::path events_path;
    std::filesystem::path messages_path;
    std::filesystem::path mt_lr_path;
};

/// Deterministic tick loop. Each tick issues one MO-LR per routed subscriber
/// in ascending msisdn order, drains the info-log, runs the area and
/// proximity passes, and renders a message for every Enter event. All state
/// lives in the database, the pair state and the random stream.
class Simulation {
  public:
    /// Routes whose msisdn is not subscribed are dropped with a warning.
    /// Throws Error(ConfigError) for duplicate routes or Common users without
    /// base stations.
    Simulation(SimConfig config, store::Database db, std::vector<Route> routes);

    bool done() const { return next_tick_ >= config_.ticks; }
    Tick next_tick() const { return next_tick_; }
    TickOutcome step();

    const SimConfig& config() const { return config_; }
    const store::Database& db() const { return db_; }
    const trigger::PairState& pair_state() const { return state_; }
    const std::vector<Route>& routes() const { return routes_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

  private:
    const Route* route_for(const std::string& msisdn) const;

    SimConfig config_;
    store::Database db_;
    std::vector<Route> routes_;
    std::vector<std::string> warnings_;
    trigger::PairState state_;
    ldt::RandomStream rng_;
    Tick next_tick_ = 0;
};

/// Steps `sim` to completion, writing events and messages to the sinks.
SimReport run_to_completion(Simulation& sim, dispatch::MessageSink& events, dispatch::MessageSink& messages,
                            dispatch::MessageSink* mt_lr = nullptr);

/// Loads snapshot and routes named by `cfg`, writes events.jsonl and
/// messages.jsonl (and mt_lr.jsonl when MT-LR requests are scheduled) under
/// cfg.out_dir.
SimReport run(const SimConfig& cfg);

std::string summary(const SimReport& report);

}  // namespace lbs::sim
