#pragma once

#include <span>
#include <string>

#include "lbs/geo.hpp"
#include "lbs/ldt.hpp"
#include "lbs/store.hpp"

namespace lbs::protocol {

using store::Tick;

/// What the SMLC hands to the GMLC. Identical to the stored info-log entry.
using LocationReport = store::InfoLogEntry;

struct MoLrRequest {
    std::string msisdn;
    Tick timestamp = 0;
    geo::GeoPoint true_position;  // ground truth, consumed only by measurement
};

struct LcsClient {
    std::string client_id;
    bool agreement = false;

    friend bool operator==(const LcsClient&, const LcsClient&) = default;
};

struct MtLrRequest {
    std::string client_id;
    std::string msisdn;
};

ldt::LdtMethod class_method(store::UserClass user_class);

/// Parameters of the positioning network shared by every request.
struct Network {
    std::span<const ldt::BaseStation> stations;
    double ta_band = ldt::kDefaultTaBand;
};

/// Mobile-originated request: measure, append to the info-log, and return
/// the same report to the handset. Throws Error(UnknownUser) for a msisdn
/// that is not subscribed; the info-log is untouched in that case.
LocationReport handle_mo_lr(const MoLrRequest& req, const Network& network, store::Database& db,
                            ldt::RandomStream& rng);

/// Mobile-terminated request from an external client. The client must be
/// known and hold an agreement; the result goes back to the client only and
/// never enters the info-log. Checks run client, agreement, then user.
LocationReport handle_mt_lr(const MtLrRequest& req, std::span<const LcsClient> clients,
                            geo::GeoPoint true_position, const Network& network,
                            const store::Database& db, ldt::RandomStream& rng, Tick timestamp = 0);

}  // namespace lbs::protocol
