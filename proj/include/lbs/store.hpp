#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lbs/geo.hpp"
#include "lbs/ldt.hpp"

namespace lbs::store {

using Tick = std::int64_t;
using ServiceType = std::string;

enum class UserClass { Common, Gprs, GprsGps };

std::string_view to_string(UserClass user_class);
UserClass user_class_from_string(std::string_view name);

struct UserProfile {
    std::string msisdn;
    UserClass user_class = UserClass::Common;
    std::set<ServiceType> subscriptions;
    bool app_active = false;

    friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

struct Advertiser {
    std::string advertiser_id;
    std::string secret;
    geo::GeoPoint position;
    ServiceType service_type;
    std::string promo_text;
    std::optional<double> trigger_limit;

    friend bool operator==(const Advertiser&, const Advertiser&) = default;
};

/// Partial update; unset fields are left alone. An engaged `trigger_limit`
/// holding nullopt clears the per-advertiser override.
struct AdvertiserChanges {
    std::optional<geo::GeoPoint> position;
    std::optional<ServiceType> service_type;
    std::optional<std::string> promo_text;
    std::optional<std::optional<double>> trigger_limit;
    std::optional<std::string> secret;
};

struct InfoLogEntry {
    std::string msisdn;
    ldt::LocationFix fix;
    Tick timestamp = 0;

    friend bool operator==(const InfoLogEntry&, const InfoLogEntry&) = default;
};

bool is_msisdn(std::string_view s);

/// True iff the two strings are equal. Running time depends only on the
/// lengths, not on where the first mismatch is.
bool secrets_equal(std::string_view a, std::string_view b);

/// Server-side database: users, advertisements and the volatile info-log.
///
/// The info-log holds at most one entry per (timestamp, msisdn); a later
/// append for the same key replaces the earlier one. Entries come out of
/// drain_infolog() in (timestamp, msisdn) order and the log is left empty.
class Database {
  public:
    void register_advertiser(Advertiser adv);
    void update_advertiser(const std::string& id, std::string_view secret,
                           const AdvertiserChanges& changes);
    void remove_advertiser(const std::string& id, std::string_view secret);

    void subscribe_user(const std::string& msisdn, UserClass user_class,
                        std::set<ServiceType> subscriptions);
    void unsubscribe_user(const std::string& msisdn);
    void set_app_active(const std::string& msisdn, bool active);

    const UserProfile* find_user(const std::string& msisdn) const;
    const Advertiser* find_advertiser(const std::string& id) const;

    const std::map<std::string, UserProfile>& users() const { return users_; }
    const std::map<std::string, Advertiser>& advertisements() const { return advertisements_; }

    void append_infolog(InfoLogEntry entry);
    std::vector<InfoLogEntry> drain_infolog();
    std::size_t infolog_size() const { return infolog_.size(); }

    /// Structural equality of users and advertisements. The info-log is
    /// volatile and ignored.
    friend bool operator==(const Database& a, const Database& b) {
        return a.users_ == b.users_ && a.advertisements_ == b.advertisements_;
    }

  private:
    std::map<std::string, UserProfile> users_;
    std::map<std::string, Advertiser> advertisements_;
    std::map<std::pair<Tick, std::string>, InfoLogEntry> infolog_;
};

/// JSON document with "users" and "advertisements" arrays.
std::string snapshot_to_json(const Database& db);
/// Throws Error(MalformedSnapshot) with a line number or field path.
Database snapshot_from_json(std::string_view text);

void save_snapshot(const Database& db, const std::filesystem::path& path);
Database load_snapshot(const std::filesystem::path& path);

}  // namespace lbs::store
