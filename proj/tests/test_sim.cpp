#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lbs/error.hpp"
#include "lbs/simulation.hpp"
#include "oracle/naive_trigger.hpp"
#include "oracle/scenario_gen.hpp"

using namespace lbs::sim;
using lbs::ErrorCode;
using lbs::store::UserClass;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const lbs::Error& e) {
        return e.code();
    }
    FAIL("expected an lbs::Error");
    return ErrorCode::IoError;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("lbs_sim_" + tag + std::to_string(std::random_device{}()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// One advertiser at the origin; the route passes 100 m north of it at
// 50 m per tick, fast enough that A-GPS noise cannot cause flapping.
SimConfig crossing_config(lbs::store::Tick ticks) {
    SimConfig cfg;
    cfg.seed = 42;
    cfg.ticks = ticks;
    cfg.base_stations = {{"bs", {0, 0}}};
    return cfg;
}

lbs::store::Database crossing_db() {
    lbs::store::Database db;
    db.subscribe_user("923001", UserClass::GprsGps, {"food"});
    db.register_advertiser({"pizza", "pw", {0, 0}, "food", "slice", std::nullopt});
    return db;
}

Route there(const std::string& msisdn) { return {msisdn, {{0, {-2000, 100}}, {80, {2000, 100}}}}; }
Route there_and_back(const std::string& msisdn) {
    return {msisdn, {{0, {-2000, 100}}, {80, {2000, 100}}, {160, {-2000, 100}}}};
}

}  // namespace

TEST_CASE("position_at") {
    const Route r{"1", {{0, {0, 0}}, {10, {100, 0}}}};
    CHECK(position_at(r, 5) == lbs::geo::GeoPoint{50, 0});
    CHECK(position_at(r, -3) == lbs::geo::GeoPoint{0, 0});
    CHECK(position_at(r, 99) == lbs::geo::GeoPoint{100, 0});
    CHECK(position_at(r, 10) == lbs::geo::GeoPoint{100, 0});

    const Route multi{"1", {{0, {0, 0}}, {4, {0, 400}}, {6, {200, 400}}}};
    CHECK(position_at(multi, 4) == lbs::geo::GeoPoint{0, 400});
    CHECK(position_at(multi, 5) == lbs::geo::GeoPoint{100, 400});
    CHECK(position_at(multi, 1).y == doctest::Approx(100.0));

    const Route single{"1", {{3, {7, 8}}}};
    CHECK(position_at(single, 0) == lbs::geo::GeoPoint{7, 8});
    CHECK(position_at(single, 100) == lbs::geo::GeoPoint{7, 8});
}

TEST_CASE("route parsing and validation") {
    const Route r = route_from_json(R"({"msisdn": "923", "waypoints": [{"t": 0, "x": 0.5, "y": -1}, {"t": 3, "x": 1, "y": 2}]})");
    CHECK(r.waypoints.size() == 2);
    CHECK(r.waypoints[1].t == 3);
    CHECK(route_from_json(route_to_json(r)) == r);

    CHECK(code_of([] { route_from_json(R"({"msisdn": "923", "waypoints": [{"t": 2, "x": 0, "y": 0}, {"t": 2, "x": 1, "y": 1}]})"); }) ==
          ErrorCode::MalformedRoute);
    CHECK(code_of([] { route_from_json(R"({"msisdn": "923", "waypoints": []})"); }) == ErrorCode::MalformedRoute);
    CHECK(code_of([] { route_from_json(R"({"msisdn": "abc", "waypoints": [{"t": 0, "x": 0, "y": 0}]})"); }) ==
          ErrorCode::MalformedRoute);
    CHECK(code_of([] { route_from_json(R"({"msisdn": "1", "waypoints": [{"t": 0.5, "x": 0, "y": 0}]})"); }) ==
          ErrorCode::MalformedRoute);
    CHECK(code_of([] { route_from_json(R"({"msisdn": "1", "waypoints": [{"t": 0, "x": 0}]})"); }) ==
          ErrorCode::MalformedRoute);
    CHECK(code_of([] { route_from_json(R"({"msisdn": "1", "waypoints": [], "speed": 3})"); }) == ErrorCode::MalformedRoute);
    CHECK(code_of([] { route_from_json("{"); }) == ErrorCode::MalformedRoute);
}

TEST_CASE("routes directory loads in filename order") {
    TempDir tmp("routes");
    std::ofstream(tmp.path / "b.json") << route_to_json(Route{"2", {{0, {0, 0}}}});
    std::ofstream(tmp.path / "a.json") << route_to_json(Route{"9", {{0, {0, 0}}}});
    std::ofstream(tmp.path / "notes.txt") << "ignored";
    const auto routes = load_routes(tmp.path);
    REQUIRE(routes.size() == 2);
    CHECK(routes[0].msisdn == "9");
    CHECK(routes[1].msisdn == "2");
    CHECK(load_routes(tmp.path / "b.json").size() == 1);
    CHECK(code_of([&] { load_routes(tmp.path / "nope"); }) == ErrorCode::IoError);
}

TEST_CASE("config parsing") {
    const SimConfig cfg = config_from_json(R"({
        "seed": 7, "ticks": 20,
        "base_stations": [{"id": "bs1", "position": {"x": 0, "y": 0}}, {"id": "bs2", "position": {"x": 10, "y": 0}, "sector_width": 90}],
        "lcs_clients": [{"client_id": "police", "agreement": true}],
        "trigger": {"default_limit": 300, "conservative_mode": true},
        "routes_path": "routes", "snapshot_path": "/abs/db.json", "out_dir": "out"
    })", "/base");
    CHECK(cfg.seed == 7);
    CHECK(cfg.ticks == 20);
    CHECK(cfg.base_stations[0].sector_width == 120.0);
    CHECK(cfg.base_stations[1].sector_width == 90.0);
    CHECK(cfg.trigger.default_limit == 300.0);
    CHECK(cfg.trigger.hysteresis_fraction == 0.10);
    CHECK(cfg.trigger.conservative_mode);
    CHECK(cfg.routes_path == fs::path("/base/routes"));
    CHECK(cfg.snapshot_path == fs::path("/abs/db.json"));

    const char* base = R"("base_stations": [], "routes_path": "r", "snapshot_path": "s", "out_dir": "o")";
    auto bad = [&](const std::string& extra) {
        return code_of([&] { config_from_json("{" + extra + ", " + base + "}"); });
    };
    CHECK(bad(R"("seed": 1, "ticks": 0)") == ErrorCode::ConfigError);
    CHECK(bad(R"("seed": -1, "ticks": 3)") == ErrorCode::ConfigError);
    CHECK(bad(R"("seed": 1, "ticks": 3, "colour": "red")") == ErrorCode::ConfigError);
    CHECK(bad(R"("seed": 1, "ticks": 3, "trigger": {"hysteresis_fraction": 1.5})") == ErrorCode::ConfigError);
    CHECK(code_of([] { config_from_json(R"({"seed": 1})"); }) == ErrorCode::ConfigError);
    CHECK(code_of([] {
              config_from_json(R"({"seed": 1, "ticks": 1, "base_stations": [{"id": "a", "position": {"x": 0, "y": 0}},
                {"id": "a", "position": {"x": 1, "y": 0}}], "routes_path": "r", "snapshot_path": "s", "out_dir": "o"})");
          }) == ErrorCode::ConfigError);
    try {
        config_from_json(R"({"seed": 1, "ticks": 1, "base_stations": [{"id": "a", "position": {"x": 0, "y": 0}, "sector_width": 400}],
                             "routes_path": "r", "snapshot_path": "s", "out_dir": "o"})");
        FAIL("expected ConfigError");
    } catch (const lbs::Error& e) {
        CHECK(e.detail().find("base_stations[0].sector_width") != std::string::npos);
    }
}

TEST_CASE("single crossing gives one Enter and one message") {
    Simulation sim(crossing_config(81), crossing_db(), {there("923001")});
    lbs::dispatch::MemorySink events, messages;
    const SimReport r = run_to_completion(sim, events, messages);
    CHECK(r.reports == 81);
    CHECK(r.enters == 1);
    CHECK(r.exits == 1);
    CHECK(r.messages == 1);
    CHECK(r.messages_per_advertiser.at("pizza") == 1);
    const auto msg = nlohmann::json::parse(messages.lines().at(0));
    CHECK(msg["format"] == "Flash");  // app not active
    CHECK(msg["approx_distance_m"].get<int>() % 50 == 0);
}

TEST_CASE("there and back gives two Enters and two Exits, as the naive reference") {
    const auto cfg = crossing_config(161);
    const auto db = crossing_db();
    Simulation sim(cfg, db, {there_and_back("923001")});
    oracle::NaiveTrigger naive(db, cfg.trigger);
    std::size_t enters = 0, exits = 0, messages = 0;
    while (!sim.done()) {
        const TickOutcome tick = sim.step();
        CHECK(sim.db().infolog_size() == 0);
        std::vector<std::string> lines;
        for (const auto& e : tick.events) {
            lines.push_back(to_jsonl(e));
            enters += e.kind == lbs::trigger::EventKind::Enter;
            exits += e.kind == lbs::trigger::EventKind::Exit;
        }
        messages += tick.messages.size();
        CHECK(lines == naive.tick(tick.reports));
    }
    CHECK(enters == 2);
    CHECK(exits == 2);
    CHECK(messages == 2);
}

TEST_CASE("one tick without advertisers") {
    SimConfig cfg = crossing_config(1);
    lbs::store::Database db;
    db.subscribe_user("1", UserClass::Common, {"food"});
    db.subscribe_user("2", UserClass::Gprs, {"food"});
    db.subscribe_user("3", UserClass::GprsGps, {"food"});
    std::vector<Route> routes{{"1", {{0, {5000, 0}}}}, {"2", {{0, {0, 5000}}}}, {"3", {{0, {-5000, 0}}}}};
    Simulation sim(cfg, db, routes);
    lbs::dispatch::MemorySink events, messages;
    const SimReport r = run_to_completion(sim, events, messages);
    CHECK(r.reports == 3);
    CHECK(events.count() == 0);
    CHECK(messages.count() == 0);
}

TEST_CASE("routes for unsubscribed users are skipped with a warning") {
    Simulation sim(crossing_config(81), crossing_db(), {there("923001"), there("555")});
    CHECK(sim.routes().size() == 1);
    REQUIRE(sim.warnings().size() == 1);
    CHECK(sim.warnings()[0].find("555") != std::string::npos);
    lbs::dispatch::MemorySink events, messages;
    const SimReport r = run_to_completion(sim, events, messages);
    CHECK(r.reports == 81);
    CHECK(r.messages == 1);
}

TEST_CASE("scenario validation") {
    CHECK(code_of([] { Simulation(crossing_config(5), crossing_db(), {there("923001"), there("923001")}); }) ==
          ErrorCode::ConfigError);
    auto db = crossing_db();
    db.subscribe_user("777", UserClass::Common, {"food"});
    SimConfig no_bs = crossing_config(5);
    no_bs.base_stations.clear();
    CHECK(code_of([&] { Simulation(no_bs, db, {}); }) == ErrorCode::ConfigError);
    CHECK_NOTHROW(Simulation(no_bs, crossing_db(), {there("923001")}));
}

TEST_CASE("event lines") {
    const lbs::trigger::TriggerEvent e{lbs::trigger::EventKind::Exit, "923", "shop \"x\"", 560.12345, 12};
    CHECK(to_jsonl(e) == R"({"kind":"Exit","msisdn":"923","counterpart":"shop \"x\"","distance":560.123,"timestamp":12})");
}

TEST_CASE("random scenarios conserve reports and messages") {
    for (std::uint64_t seed = 300; seed < 320; ++seed) {
        const auto sc = oracle::random_scenario(seed, 8, 12, 200);
        Simulation sim(sc.config, sc.db, sc.routes);
        lbs::dispatch::MemorySink events, messages;
        const SimReport r = run_to_completion(sim, events, messages);
        const auto ticks = static_cast<std::size_t>(sc.config.ticks);
        CHECK(r.reports == sim.routes().size() * ticks);
        CHECK(r.messages == r.enters);
        CHECK(messages.count() == r.messages);
        CHECK(events.count() == r.enters + r.exits + r.proximities);
        CHECK(sim.db().infolog_size() == 0);
    }
}

TEST_CASE("scheduled MT-LR requests") {
    SimConfig cfg = crossing_config(3);
    cfg.lcs_clients = {{"police", true}, {"adco", false}};
    cfg.mt_lr_requests = {{1, {"police", "923001"}}, {1, {"adco", "923001"}}, {2, {"ghost", "923001"}},
                          {2, {"police", "404"}}};
    Simulation sim(cfg, crossing_db(), {there("923001")});
    lbs::dispatch::MemorySink events, messages, mt;
    const SimReport r = run_to_completion(sim, events, messages, &mt);
    CHECK(r.mt_lr_served == 1);
    CHECK(r.mt_lr_rejected == 3);
    REQUIRE(mt.count() == 4);
    const auto ok = nlohmann::json::parse(mt.lines()[0]);
    CHECK(ok["status"] == "ok");
    CHECK(ok["method"] == "Agps");
    CHECK(nlohmann::json::parse(mt.lines()[1])["status"] == "AgreementMissing");
    CHECK(nlohmann::json::parse(mt.lines()[2])["status"] == "UnknownClient");
    CHECK(nlohmann::json::parse(mt.lines()[3])["status"] == "UnknownUser");
    CHECK(r.reports == 3);
}

TEST_CASE("file-level run is byte-reproducible") {
    TempDir tmp("run");
    lbs::store::save_snapshot(crossing_db(), tmp.path / "db.json");
    fs::create_directories(tmp.path / "routes");
    std::ofstream(tmp.path / "routes" / "u1.json") << route_to_json(there_and_back("923001"));
    std::ofstream(tmp.path / "config.json") << R"({"seed": 5, "ticks": 161,
        "base_stations": [{"id": "bs", "position": {"x": 0, "y": 0}}],
        "routes_path": "routes", "snapshot_path": "db.json", "out_dir": "out"})";

    SimConfig cfg = load_config(tmp.path / "config.json");
    const SimReport first = run(cfg);
    CHECK(first.events_path == tmp.path / "out" / "events.jsonl");
    const std::string events = slurp(first.events_path);
    const std::string messages = slurp(first.messages_path);
    CHECK(first.messages == 2);

    cfg.out_dir = tmp.path / "again";
    const SimReport second = run(cfg);
    CHECK(slurp(second.events_path) == events);
    CHECK(slurp(second.messages_path) == messages);
    CHECK(summary(second).find("messages     2") != std::string::npos);

    cfg.snapshot_path = tmp.path / "missing.json";
    CHECK(code_of([&] { run(cfg); }) == ErrorCode::IoError);
}
