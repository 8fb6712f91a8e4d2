#include "lbs/ldt.hpp"

#include <cmath>
#include <string>

#include "lbs/error.hpp"

namespace lbs::ldt {

std::string_view to_string(LdtMethod method) {
    switch (method) {
    case LdtMethod::CgiTa: return "CgiTa";
    case LdtMethod::Ecgi: return "Ecgi";
    case LdtMethod::Toa: return "Toa";
    case LdtMethod::Eotd: return "Eotd";
    case LdtMethod::Agps: return "Agps";
    }
    return "Unknown";
}

LdtMethod method_from_string(std::string_view name) {
    for (LdtMethod m : {LdtMethod::CgiTa, LdtMethod::Ecgi, LdtMethod::Toa, LdtMethod::Eotd,
                        LdtMethod::Agps}) {
        if (to_string(m) == name) return m;
    }
    throw Error(ErrorCode::InvalidField, "unknown LDT method '" + std::string(name) + "'");
}

AccuracyRange accuracy_range(LdtMethod method) {
    switch (method) {
    case LdtMethod::CgiTa: return {100.0, 1100.0};
    case LdtMethod::Ecgi: return {50.0, 550.0};
    case LdtMethod::Toa: return {125.0, 200.0};
    case LdtMethod::Eotd: return {50.0, 150.0};
    case LdtMethod::Agps: return {5.0, 40.0};
    }
    return {0.0, 0.0};
}

double RandomStream::next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    return lo + next_unit() * (hi - lo);
}

const BaseStation& serving_cell(geo::GeoPoint true_pos, std::span<const BaseStation> network) {
    if (network.empty()) throw Error(ErrorCode::EmptyNetwork, "no base stations configured");
    const BaseStation* best = &network.front();
    double best_d = geo::distance(best->position, true_pos);
    for (const BaseStation& bs : network.subspan(1)) {
        const double d = geo::distance(bs.position, true_pos);
        if (d < best_d || (d == best_d && bs.id < best->id)) {
            best = &bs;
            best_d = d;
        }
    }
    return *best;
}

namespace {

// floor(value / step), nudged so that k*step <= value <= (k+1)*step holds in
// the same floating-point arithmetic that contains() uses.
double band_index(double value, double step) {
    double k = std::floor(value / step);
    if (k * step > value) k -= 1.0;
    if ((k + 1.0) * step < value) k += 1.0;
    return std::max(k, 0.0);
}

LocationFix measure_cgi_ta(geo::GeoPoint true_pos, std::span<const BaseStation> network,
                           double ta_band) {
    const BaseStation& bs = serving_cell(true_pos, network);
    const double r = geo::distance(bs.position, true_pos);
    const double az = geo::azimuth(bs.position, true_pos);
    const double k = band_index(r, ta_band);
    double s = band_index(az, bs.sector_width);
    if (s * bs.sector_width >= 360.0) s -= 1.0;

    geo::AnnularSector sector{bs.position, k * ta_band, (k + 1.0) * ta_band, s * bs.sector_width,
                              bs.sector_width};
    geo::UncertaintyRegion region = sector;
    return {geo::anchor(region), region, LdtMethod::CgiTa};
}

}  // namespace

LocationFix measure(geo::GeoPoint true_pos, LdtMethod method, std::span<const BaseStation> network,
                    RandomStream& rng, double ta_band) {
    if (method == LdtMethod::CgiTa) return measure_cgi_ta(true_pos, network, ta_band);

    const AccuracyRange range = accuracy_range(method);
    // Rounding in the displacement can land a hair outside the envelope at
    // large coordinates; such draws are discarded.
    for (;;) {
        const double magnitude = rng.uniform(range.min_m, range.max_m);
        const double direction = rng.uniform(0.0, 360.0);
        const geo::GeoPoint reported = geo::displace(true_pos, magnitude, direction);
        const double err = geo::distance(reported, true_pos);
        if (err >= range.min_m && err <= range.max_m) {
            return {reported, geo::Circle{reported, range.max_m}, method};
        }
    }
}

}  // namespace lbs::ldt
