#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lbs/protocol.hpp"
#include "lbs/store.hpp"

namespace lbs::trigger {

using store::Tick;

struct TriggerConfig {
    double default_limit = 500.0;
    double hysteresis_fraction = 0.10;
    bool conservative_mode = false;
    double proximity_threshold = 200.0;

    friend bool operator==(const TriggerConfig&, const TriggerConfig&) = default;
};

/// Throws Error(InvalidField) when a field is out of range.
void validate(const TriggerConfig& cfg);

enum class AreaState { Inside, Outside };
enum class ProximityState { Near, Apart };

/// Edge-detection memory. Only pairs observed at least once have an entry.
/// Proximity keys are ordered (smaller msisdn first).
struct PairState {
    std::map<std::pair<std::string, std::string>, AreaState> area;
    std::map<std::pair<std::string, std::string>, ProximityState> proximity;
};

enum class EventKind { Enter, Exit, Proximity };

std::string_view to_string(EventKind kind);

struct TriggerEvent {
    EventKind kind = EventKind::Enter;
    std::string msisdn;
    std::string counterpart;  // advertiser_id for Enter/Exit, msisdn for Proximity
    double distance = 0.0;
    Tick timestamp = 0;

    friend bool operator==(const TriggerEvent&, const TriggerEvent&) = default;
};

double effective_limit(const store::Advertiser& adv, const TriggerConfig& cfg);

/// Distance the trigger rule compares against the limit: reported point to
/// the outlet, or the region's closest approach in conservative mode.
double trigger_distance(const ldt::LocationFix& fix, const store::Advertiser& adv,
                        const TriggerConfig& cfg);

/// Constant-query pass over one drained info-log batch. Each report is checked
/// against every advertiser whose service type the user subscribes to. A pair
/// enters when the distance drops below the limit and exits once it rises
/// above limit * (1 + hysteresis_fraction). A pair seen for the first time can
/// enter but never exit. Returns events ordered by (timestamp, msisdn,
/// advertiser_id) and updates `state` in place.
std::vector<TriggerEvent> evaluate_batch(std::span<const protocol::LocationReport> reports,
                                         const store::Database& db, PairState& state,
                                         const TriggerConfig& cfg);

/// Handset-to-handset closeness among reports sharing a timestamp. Emits one
/// Proximity event per unordered pair on the Apart -> Near edge; Near -> Apart
/// happens silently at threshold * (1 + hysteresis_fraction).
std::vector<TriggerEvent> proximity_batch(std::span<const protocol::LocationReport> reports,
                                          PairState& state, const TriggerConfig& cfg);

}  // namespace lbs::trigger
