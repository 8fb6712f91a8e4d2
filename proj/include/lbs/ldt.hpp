#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "lbs/geo.hpp"

namespace lbs::ldt {

enum class LdtMethod { CgiTa, Ecgi, Toa, Eotd, Agps };

std::string_view to_string(LdtMethod method);
LdtMethod method_from_string(std::string_view name);

/// Urban accuracy envelope of a method, meters.
struct AccuracyRange {
    double min_m;
    double max_m;

    friend bool operator==(const AccuracyRange&, const AccuracyRange&) = default;
};

AccuracyRange accuracy_range(LdtMethod method);

/// Width of one timing-advance distance band, meters.
inline constexpr double kDefaultTaBand = 550.0;

struct BaseStation {
    std::string id;
    geo::GeoPoint position;
    double sector_width = 120.0;

    friend bool operator==(const BaseStation&, const BaseStation&) = default;
};

struct LocationFix {
    geo::GeoPoint reported;
    geo::UncertaintyRegion region;
    LdtMethod method = LdtMethod::Agps;

    friend bool operator==(const LocationFix&, const LocationFix&) = default;
};

/// Seeded generator shared by one simulation. Raw 64-bit draws come from
/// mt19937_64, whose output sequence is fixed by the standard; the mapping to
/// doubles is done here rather than through <random> distributions so that
/// draws are identical across standard library implementations.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 bits of resolution.
    double next_unit();
    /// Uniform in [lo, hi].
    double uniform(double lo, double hi);

  private:
    std::mt19937_64 engine_;
};

/// Nearest station; equal distances resolve to the smallest id.
/// Throws Error(EmptyNetwork) when `network` is empty.
const BaseStation& serving_cell(geo::GeoPoint true_pos, std::span<const BaseStation> network);

/// Emulates a location measurement of `true_pos`.
///
/// CgiTa quantizes the serving-cell range into `ta_band` rings and the
/// azimuth into sectors of the station's sector_width; the fix is the
/// containing annular sector and its anchor point. It consumes no randomness.
///
/// The other methods displace the true position by a uniform magnitude drawn
/// from accuracy_range(method) in a uniform direction, and report a circle
/// of radius accuracy_range(method).max_m around the displaced point. Two
/// draws per fix, magnitude first.
LocationFix measure(geo::GeoPoint true_pos, LdtMethod method, std::span<const BaseStation> network,
                    RandomStream& rng, double ta_band = kDefaultTaBand);

}  // namespace lbs::ldt
