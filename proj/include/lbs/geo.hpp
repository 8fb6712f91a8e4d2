#pragma once

#include <variant>

namespace lbs::geo {

/// Position in a local planar frame, meters east (x) and north (y).
struct GeoPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Circle {
    GeoPoint center;
    double radius = 0.0;

    friend bool operator==(const Circle&, const Circle&) = default;
};

/// Ring segment around `origin`: radii in [inner_radius, outer_radius] and
/// azimuths in [start_azimuth, start_azimuth + arc_width] (mod 360).
struct AnnularSector {
    GeoPoint origin;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    double start_azimuth = 0.0;
    double arc_width = 360.0;

    friend bool operator==(const AnnularSector&, const AnnularSector&) = default;
};

using UncertaintyRegion = std::variant<Circle, AnnularSector>;

bool is_finite(GeoPoint p);
bool is_valid(const UncertaintyRegion& region);

/// Throws Error(InvalidField) naming the violated bound.
void validate(const UncertaintyRegion& region);

double distance(GeoPoint a, GeoPoint b);

/// Degrees clockwise from north in [0, 360). The azimuth of a point onto
/// itself is 0.
double azimuth(GeoPoint from, GeoPoint to);

/// Point `range` meters from `from` along `azimuth_deg`.
GeoPoint displace(GeoPoint from, double range, double azimuth_deg);

/// Closed-set containment. Boundary points are inside.
bool contains(const UncertaintyRegion& region, GeoPoint p);

/// Representative point of the region; always contained in it.
GeoPoint anchor(const UncertaintyRegion& region);

/// Infimum of distance(p, q) over q in the region; 0 when p is contained.
double min_distance_to_region(GeoPoint p, const UncertaintyRegion& region);

}  // namespace lbs::geo
