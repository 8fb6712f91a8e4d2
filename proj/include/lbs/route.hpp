#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lbs/geo.hpp"
#include "lbs/store.hpp"

namespace lbs::sim {

using store::Tick;

struct Waypoint {
    Tick t = 0;
    geo::GeoPoint position;

    friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// Timed path of one handset. Waypoint times strictly increase.
struct Route {
    std::string msisdn;
    std::vector<Waypoint> waypoints;

    friend bool operator==(const Route&, const Route&) = default;
};

/// Throws Error(MalformedRoute) describing the first violation.
void validate(const Route& route);

/// Linear interpolation between bracketing waypoints, clamped to the first and
/// last positions outside the route's time span.
geo::GeoPoint position_at(const Route& route, double t);

/// {"msisdn": "...", "waypoints": [{"t": 0, "x": 0.0, "y": 0.0}, ...]}
Route route_from_json(std::string_view text);
std::string route_to_json(const Route& route);

Route load_route(const std::filesystem::path& path);

/// A single route file, or every *.json file of a directory in filename
/// order. Throws Error(MalformedRoute) for invalid content, Error(IoError)
/// for unreadable paths.
std::vector<Route> load_routes(const std::filesystem::path& path);

}  // namespace lbs::sim
