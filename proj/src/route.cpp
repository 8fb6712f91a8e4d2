#include "lbs/route.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lbs/error.hpp"

namespace lbs::sim {

void validate(const Route& route) {
    if (!store::is_msisdn(route.msisdn)) {
        throw Error(ErrorCode::MalformedRoute, "msisdn must be a non-empty digit string");
    }
    if (route.waypoints.empty()) {
        throw Error(ErrorCode::MalformedRoute, "route " + route.msisdn + " has no waypoints");
    }
    for (std::size_t i = 0; i < route.waypoints.size(); ++i) {
        if (!geo::is_finite(route.waypoints[i].position)) {
            throw Error(ErrorCode::MalformedRoute, "waypoints[" + std::to_string(i) + "] is not finite");
        }
        if (i > 0 && route.waypoints[i].t <= route.waypoints[i - 1].t) {
            throw Error(ErrorCode::MalformedRoute,
                        "waypoints[" + std::to_string(i) + "].t must be greater than waypoints[" +
                            std::to_string(i - 1) + "].t");
        }
    }
}

geo::GeoPoint position_at(const Route& route, double t) {
    const auto& wps = route.waypoints;
    if (t <= static_cast<double>(wps.front().t)) return wps.front().position;
    if (t >= static_cast<double>(wps.back().t)) return wps.back().position;

    auto hi = std::upper_bound(wps.begin(), wps.end(), t,
                               [](double value, const Waypoint& w) { return value < static_cast<double>(w.t); });
    auto lo = std::prev(hi);
    const double span = static_cast<double>(hi->t - lo->t);
    const double f = (t - static_cast<double>(lo->t)) / span;
    return {lo->position.x + f * (hi->position.x - lo->position.x),
            lo->position.y + f * (hi->position.y - lo->position.y)};
}

namespace {

using json = nlohmann::json;

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedRoute, what); }

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) malformed(where + ": expected an object");
    for (const char* k : keys) {
        if (!obj.contains(k)) malformed(where + ": missing key \"" + k + "\"");
    }
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
            malformed(where + ": unknown key \"" + key + "\"");
        }
    }
}

}  // namespace

Route route_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        malformed(e.what());
    }
    only_keys(doc, "route", {"msisdn", "waypoints"});
    if (!doc["msisdn"].is_string()) malformed("msisdn: expected a string");
    if (!doc["waypoints"].is_array()) malformed("waypoints: expected an array");

    Route route;
    route.msisdn = doc["msisdn"].get<std::string>();
    std::size_t i = 0;
    for (const json& w : doc["waypoints"]) {
        const std::string where = "waypoints[" + std::to_string(i++) + "]";
        only_keys(w, where, {"t", "x", "y"});
        if (!w["t"].is_number_integer()) malformed(where + ".t: expected an integer tick");
        if (!w["x"].is_number() || !w["y"].is_number()) malformed(where + ": x and y must be numbers");
        route.waypoints.push_back({w["t"].get<Tick>(), {w["x"].get<double>(), w["y"].get<double>()}});
    }
    validate(route);
    return route;
}

std::string route_to_json(const Route& route) {
    nlohmann::ordered_json doc;
    doc["msisdn"] = route.msisdn;
    doc["waypoints"] = nlohmann::ordered_json::array();
    for (const Waypoint& w : route.waypoints) {
        doc["waypoints"].push_back({{"t", w.t}, {"x", w.position.x}, {"y", w.position.y}});
    }
    return doc.dump(2) + "\n";
}

Route load_route(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return route_from_json(buf.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

std::vector<Route> load_routes(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
        throw Error(ErrorCode::IoError, "routes path '" + path.string() + "' does not exist");
    }
    if (!std::filesystem::is_directory(path, ec)) return {load_route(path)};

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

    std::vector<Route> routes;
    routes.reserve(files.size());
    for (const auto& f : files) routes.push_back(load_route(f));
    return routes;
}

}  // namespace lbs::sim
