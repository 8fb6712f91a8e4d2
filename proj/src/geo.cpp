#include "lbs/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lbs/error.hpp"

namespace lbs::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool azimuth_in_arc(double az, double start, double width) {
    if (width >= 360.0) return true;
    double offset = std::fmod(az - start, 360.0);
    if (offset < 0.0) offset += 360.0;
    return offset <= width;
}

double point_segment_distance(GeoPoint p, GeoPoint a, GeoPoint b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return distance(p, a);
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, GeoPoint{a.x + t * dx, a.y + t * dy});
}

}  // namespace

bool is_finite(GeoPoint p) { return std::isfinite(p.x) && std::isfinite(p.y); }

bool is_valid(const UncertaintyRegion& region) {
    return std::visit(
        overloaded{
            [](const Circle& c) {
                return is_finite(c.center) && std::isfinite(c.radius) && c.radius >= 0.0;
            },
            [](const AnnularSector& s) {
                return is_finite(s.origin) && std::isfinite(s.outer_radius) &&
                       s.inner_radius >= 0.0 && s.inner_radius < s.outer_radius &&
                       s.arc_width > 0.0 && s.arc_width <= 360.0 && s.start_azimuth >= 0.0 &&
                       s.start_azimuth < 360.0;
            },
        },
        region);
}

void validate(const UncertaintyRegion& region) {
    if (is_valid(region)) return;
    std::string what = std::holds_alternative<Circle>(region)
                           ? "circle requires finite center and radius >= 0"
                           : "annular sector requires 0 <= inner < outer, 0 < arc_width <= 360, "
                             "0 <= start_azimuth < 360";
    throw Error(ErrorCode::InvalidField, what);
}

double distance(GeoPoint a, GeoPoint b) { return std::hypot(b.x - a.x, b.y - a.y); }

double azimuth(GeoPoint from, GeoPoint to) {
    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    if (dx == 0.0 && dy == 0.0) return 0.0;
    double deg = std::atan2(dx, dy) * kRadToDeg;
    if (deg < 0.0) deg += 360.0;
    // atan2 of a tiny negative dx can round up to exactly 360 after the shift.
    if (deg >= 360.0) deg -= 360.0;
    return deg;
}

GeoPoint displace(GeoPoint from, double range, double azimuth_deg) {
    const double rad = azimuth_deg * kDegToRad;
    return {from.x + range * std::sin(rad), from.y + range * std::cos(rad)};
}

bool contains(const UncertaintyRegion& region, GeoPoint p) {
    return std::visit(
        overloaded{
            [&](const Circle& c) { return distance(c.center, p) <= c.radius; },
            [&](const AnnularSector& s) {
                const double r = distance(s.origin, p);
                if (r < s.inner_radius || r > s.outer_radius) return false;
                // The apex belongs to every arc when the sector reaches the origin.
                if (r == 0.0) return true;
                return azimuth_in_arc(azimuth(s.origin, p), s.start_azimuth, s.arc_width);
            },
        },
        region);
}

GeoPoint anchor(const UncertaintyRegion& region) {
    return std::visit(
        overloaded{
            [](const Circle& c) { return c.center; },
            [](const AnnularSector& s) {
                const double mid_r = 0.5 * (s.inner_radius + s.outer_radius);
                const double mid_az = s.start_azimuth + 0.5 * s.arc_width;
                return displace(s.origin, mid_r, mid_az);
            },
        },
        region);
}

double min_distance_to_region(GeoPoint p, const UncertaintyRegion& region) {
    return std::visit(
        overloaded{
            [&](const Circle& c) { return std::max(0.0, distance(c.center, p) - c.radius); },
            [&](const AnnularSector& s) {
                if (contains(region, p)) return 0.0;
                const double r = distance(s.origin, p);
                double best = std::numeric_limits<double>::infinity();
                // Radial gap, valid when p lies within the angular span: the
                // nearest arc point then shares p's azimuth.
                if (r == 0.0 || azimuth_in_arc(azimuth(s.origin, p), s.start_azimuth, s.arc_width)) {
                    best = r < s.inner_radius ? s.inner_radius - r : r - s.outer_radius;
                }
                // Straight edges; arc endpoints are their endpoints.
                if (s.arc_width < 360.0) {
                    for (double edge : {s.start_azimuth, s.start_azimuth + s.arc_width}) {
                        const GeoPoint a = displace(s.origin, s.inner_radius, edge);
                        const GeoPoint b = displace(s.origin, s.outer_radius, edge);
                        best = std::min(best, point_segment_distance(p, a, b));
                    }
                }
                return std::max(best, 0.0);
            },
        },
        region);
}

}  // namespace lbs::geo
