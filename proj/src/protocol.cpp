#include "lbs/protocol.hpp"

#include <algorithm>

#include "lbs/error.hpp"

namespace lbs::protocol {

ldt::LdtMethod class_method(store::UserClass user_class) {
    switch (user_class) {
    case store::UserClass::Common: return ldt::LdtMethod::CgiTa;
    case store::UserClass::Gprs: return ldt::LdtMethod::Eotd;
    case store::UserClass::GprsGps: return ldt::LdtMethod::Agps;
    }
    return ldt::LdtMethod::CgiTa;
}

LocationReport handle_mo_lr(const MoLrRequest& req, const Network& network, store::Database& db,
                            ldt::RandomStream& rng) {
    const store::UserProfile* user = db.find_user(req.msisdn);
    if (!user) throw Error(ErrorCode::UnknownUser, "MO-LR from unsubscribed msisdn '" + req.msisdn + "'");

    // SMLC: position the handset.
    ldt::LocationFix fix = ldt::measure(req.true_position, class_method(user->user_class),
                                        network.stations, rng, network.ta_band);
    // GMLC: forward to the info-log; the handset gets the same report back.
    LocationReport report{req.msisdn, std::move(fix), req.timestamp};
    db.append_infolog(report);
    return report;
}

LocationReport handle_mt_lr(const MtLrRequest& req, std::span<const LcsClient> clients,
                            geo::GeoPoint true_position, const Network& network,
                            const store::Database& db, ldt::RandomStream& rng, Tick timestamp) {
    auto client = std::find_if(clients.begin(), clients.end(),
                               [&](const LcsClient& c) { return c.client_id == req.client_id; });
    if (client == clients.end()) throw Error(ErrorCode::UnknownClient, "LCS client '" + req.client_id + "'");
    if (!client->agreement) {
        throw Error(ErrorCode::AgreementMissing, "no operator agreement for client '" + req.client_id + "'");
    }
    const store::UserProfile* user = db.find_user(req.msisdn);
    if (!user) throw Error(ErrorCode::UnknownUser, "MT-LR target '" + req.msisdn + "'");

    ldt::LocationFix fix = ldt::measure(true_position, class_method(user->user_class), network.stations,
                                        rng, network.ta_band);
    return LocationReport{req.msisdn, std::move(fix), timestamp};
}

}  // namespace lbs::protocol
