#include "lbs/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lbs/error.hpp"

namespace lbs::sim {

std::string to_jsonl(const trigger::TriggerEvent& event) {
    using nlohmann::json;
    char distance[64];
    std::snprintf(distance, sizeof distance, "%.3f", event.distance);
    std::string line = "{\"kind\":";
    line += json(std::string(trigger::to_string(event.kind))).dump();
    line += ",\"msisdn\":" + json(event.msisdn).dump();
    line += ",\"counterpart\":" + json(event.counterpart).dump();
    line += ",\"distance\":";
    line += distance;
    line += ",\"timestamp\":" + std::to_string(event.timestamp) + "}";
    return line;
}

std::string to_jsonl(const MtLrOutcome& outcome) {
    nlohmann::ordered_json j;
    j["timestamp"] = outcome.t;
    j["client_id"] = outcome.request.client_id;
    j["msisdn"] = outcome.request.msisdn;
    if (outcome.report) {
        j["status"] = "ok";
        j["method"] = std::string(ldt::to_string(outcome.report->fix.method));
        j["x"] = outcome.report->fix.reported.x;
        j["y"] = outcome.report->fix.reported.y;
    } else {
        j["status"] = std::string(to_string(outcome.rejection.value_or(ErrorCode::UnknownUser)));
    }
    return j.dump();
}

Simulation::Simulation(SimConfig config, store::Database db, std::vector<Route> routes)
    : config_(std::move(config)), db_(std::move(db)), rng_(config_.seed) {
    validate(config_);

    std::set<std::string> seen;
    for (Route& r : routes) {
        validate(r);
        if (!seen.insert(r.msisdn).second) {
            throw Error(ErrorCode::ConfigError, "routes: more than one route for msisdn '" + r.msisdn + "'");
        }
        if (!db_.find_user(r.msisdn)) {
            warnings_.push_back("skipping route for unsubscribed msisdn " + r.msisdn);
            continue;
        }
        routes_.push_back(std::move(r));
    }
    std::sort(routes_.begin(), routes_.end(), [](const Route& a, const Route& b) { return a.msisdn < b.msisdn; });

    if (config_.base_stations.empty()) {
        for (const auto& [msisdn, user] : db_.users()) {
            if (user.user_class == store::UserClass::Common) {
                throw Error(ErrorCode::ConfigError,
                            "base_stations: at least one station is required for Common user " + msisdn);
            }
        }
    }
}

const Route* Simulation::route_for(const std::string& msisdn) const {
    auto it = std::lower_bound(routes_.begin(), routes_.end(), msisdn,
                               [](const Route& r, const std::string& m) { return r.msisdn < m; });
    return it != routes_.end() && it->msisdn == msisdn ? &*it : nullptr;
}

TickOutcome Simulation::step() {
    TickOutcome out;
    out.t = next_tick_;
    const protocol::Network network{config_.base_stations, config_.ta_band};

    for (const Route& route : routes_) {
        protocol::MoLrRequest req{route.msisdn, out.t, position_at(route, static_cast<double>(out.t))};
        protocol::handle_mo_lr(req, network, db_, rng_);
    }

    out.reports = db_.drain_infolog();
    out.events = trigger::evaluate_batch(out.reports, db_, state_, config_.trigger);
    std::vector<trigger::TriggerEvent> near = trigger::proximity_batch(out.reports, state_, config_.trigger);
    out.events.insert(out.events.end(), std::make_move_iterator(near.begin()), std::make_move_iterator(near.end()));

    for (const trigger::TriggerEvent& ev : out.events) {
        if (ev.kind != trigger::EventKind::Enter) continue;
        out.messages.push_back(
            dispatch::render(ev, *db_.find_user(ev.msisdn), *db_.find_advertiser(ev.counterpart)));
    }

    for (const ScheduledMtLr& s : config_.mt_lr_requests) {
        if (s.t != out.t) continue;
        MtLrOutcome o{out.t, s.request, std::nullopt, std::nullopt};
        try {
            const Route* route = route_for(s.request.msisdn);
            if (!route && db_.find_user(s.request.msisdn)) {
                // Subscribed but never on the map: the network cannot locate it.
                throw Error(ErrorCode::UnknownUser, "no route for '" + s.request.msisdn + "'");
            }
            const geo::GeoPoint truth = route ? position_at(*route, static_cast<double>(out.t)) : geo::GeoPoint{};
            o.report = protocol::handle_mt_lr(s.request, config_.lcs_clients, truth, network, db_, rng_, out.t);
        } catch (const Error& e) {
            o.rejection = e.code();
        }
        out.mt_lr.push_back(std::move(o));
    }

    ++next_tick_;
    return out;
}

SimReport run_to_completion(Simulation& sim, dispatch::MessageSink& events, dispatch::MessageSink& messages,
                            dispatch::MessageSink* mt_lr) {
    SimReport report;
    report.warnings = sim.warnings();
    for (const auto& [id, adv] : sim.db().advertisements()) report.messages_per_advertiser[id] = 0;

    while (!sim.done()) {
        TickOutcome tick = sim.step();
        report.reports += tick.reports.size();
        for (const auto& ev : tick.events) {
            switch (ev.kind) {
            case trigger::EventKind::Enter: ++report.enters; break;
            case trigger::EventKind::Exit: ++report.exits; break;
            case trigger::EventKind::Proximity: ++report.proximities; break;
            }
            events.append(to_jsonl(ev));
        }
        for (const auto& msg : tick.messages) {
            dispatch::deliver(msg, messages);
            ++report.messages;
            ++report.messages_per_advertiser[msg.advertiser_id];
        }
        for (const auto& o : tick.mt_lr) {
            if (o.report) ++report.mt_lr_served;
            else ++report.mt_lr_rejected;
            if (mt_lr) mt_lr->append(to_jsonl(o));
        }
    }
    return report;
}

SimReport run(const SimConfig& cfg) {
    store::Database db = store::load_snapshot(cfg.snapshot_path);
    std::vector<Route> routes = load_routes(cfg.routes_path);
    Simulation sim(cfg, std::move(db), std::move(routes));

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + cfg.out_dir.string() + "': " + ec.message());

    dispatch::FileSink events(cfg.out_dir / "events.jsonl");
    dispatch::FileSink messages(cfg.out_dir / "messages.jsonl");
    std::optional<dispatch::FileSink> mt_lr;
    if (!cfg.mt_lr_requests.empty()) mt_lr.emplace(cfg.out_dir / "mt_lr.jsonl");

    SimReport report = run_to_completion(sim, events, messages, mt_lr ? &*mt_lr : nullptr);
    events.flush();
    messages.flush();
    report.events_path = events.path();
    report.messages_path = messages.path();
    if (mt_lr) {
        mt_lr->flush();
        report.mt_lr_path = mt_lr->path();
    }
    return report;
}

std::string summary(const SimReport& r) {
    std::ostringstream os;
    os << "reports      " << r.reports << "\n"
       << "enters       " << r.enters << "\n"
       << "exits        " << r.exits << "\n"
       << "proximities  " << r.proximities << "\n"
       << "messages     " << r.messages << "\n";
    if (r.mt_lr_served + r.mt_lr_rejected > 0) {
        os << "mt-lr        " << r.mt_lr_served << " served, " << r.mt_lr_rejected << " rejected\n";
    }
    for (const auto& [id, n] : r.messages_per_advertiser) os << "  " << id << "  " << n << "\n";
    if (!r.events_path.empty()) os << "events   -> " << r.events_path.string() << "\n";
    if (!r.messages_path.empty()) os << "messages -> " << r.messages_path.string() << "\n";
    if (!r.mt_lr_path.empty()) os << "mt-lr    -> " << r.mt_lr_path.string() << "\n";
    return os.str();
}

}  // namespace lbs::sim
