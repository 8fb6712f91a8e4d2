#include "lbs/trigger.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "lbs/error.hpp"

namespace lbs::trigger {

void validate(const TriggerConfig& cfg) {
    if (!(std::isfinite(cfg.default_limit) && cfg.default_limit > 0.0)) {
        throw Error(ErrorCode::InvalidField, "trigger.default_limit must be > 0");
    }
    if (!(cfg.hysteresis_fraction >= 0.0 && cfg.hysteresis_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidField, "trigger.hysteresis_fraction must be in [0, 1)");
    }
    if (!(std::isfinite(cfg.proximity_threshold) && cfg.proximity_threshold > 0.0)) {
        throw Error(ErrorCode::InvalidField, "trigger.proximity_threshold must be > 0");
    }
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::Enter: return "Enter";
    case EventKind::Exit: return "Exit";
    case EventKind::Proximity: return "Proximity";
    }
    return "Unknown";
}

double effective_limit(const store::Advertiser& adv, const TriggerConfig& cfg) {
    return adv.trigger_limit.value_or(cfg.default_limit);
}

double trigger_distance(const ldt::LocationFix& fix, const store::Advertiser& adv,
                        const TriggerConfig& cfg) {
    return cfg.conservative_mode ? geo::min_distance_to_region(adv.position, fix.region)
                                 : geo::distance(fix.reported, adv.position);
}

namespace {

bool event_less(const TriggerEvent& a, const TriggerEvent& b) {
    return std::tie(a.timestamp, a.msisdn, a.counterpart) < std::tie(b.timestamp, b.msisdn, b.counterpart);
}

}  // namespace

std::vector<TriggerEvent> evaluate_batch(std::span<const protocol::LocationReport> reports,
                                         const store::Database& db, PairState& state,
                                         const TriggerConfig& cfg) {
    std::vector<TriggerEvent> events;
    for (const protocol::LocationReport& report : reports) {
        const store::UserProfile* user = db.find_user(report.msisdn);
        if (!user) continue;
        for (const auto& [id, adv] : db.advertisements()) {
            if (!user->subscriptions.contains(adv.service_type)) continue;

            const double d = trigger_distance(report.fix, adv, cfg);
            const double limit = effective_limit(adv, cfg);
            auto [it, first_sight] = state.area.try_emplace({report.msisdn, id}, AreaState::Outside);
            AreaState& s = it->second;

            if (s == AreaState::Outside && d < limit) {
                s = AreaState::Inside;
                events.push_back({EventKind::Enter, report.msisdn, id, d, report.timestamp});
            } else if (!first_sight && s == AreaState::Inside && d > limit * (1.0 + cfg.hysteresis_fraction)) {
                s = AreaState::Outside;
                events.push_back({EventKind::Exit, report.msisdn, id, d, report.timestamp});
            }
        }
    }
    std::stable_sort(events.begin(), events.end(), event_less);
    return events;
}

std::vector<TriggerEvent> proximity_batch(std::span<const protocol::LocationReport> reports,
                                          PairState& state, const TriggerConfig& cfg) {
    std::vector<const protocol::LocationReport*> order;
    order.reserve(reports.size());
    for (const auto& r : reports) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        return std::tie(a->timestamp, a->msisdn) < std::tie(b->timestamp, b->msisdn);
    });

    const double release = cfg.proximity_threshold * (1.0 + cfg.hysteresis_fraction);
    std::vector<TriggerEvent> events;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const auto& a = *order[i];
            const auto& b = *order[j];
            if (b.timestamp != a.timestamp) break;
            if (a.msisdn == b.msisdn) continue;

            const double d = geo::distance(a.fix.reported, b.fix.reported);
            auto [it, first_sight] = state.proximity.try_emplace({a.msisdn, b.msisdn}, ProximityState::Apart);
            ProximityState& s = it->second;
            if (s == ProximityState::Apart && d < cfg.proximity_threshold) {
                s = ProximityState::Near;
                events.push_back({EventKind::Proximity, a.msisdn, b.msisdn, d, a.timestamp});
            } else if (s == ProximityState::Near && d >= release) {
                s = ProximityState::Apart;
            }
        }
    }
    std::stable_sort(events.begin(), events.end(), event_less);
    return events;
}

}  // namespace lbs::trigger
