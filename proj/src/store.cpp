#include "lbs/store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lbs/error.hpp"

namespace lbs::store {

std::string_view to_string(UserClass user_class) {
    switch (user_class) {
    case UserClass::Common: return "Common";
    case UserClass::Gprs: return "Gprs";
    case UserClass::GprsGps: return "GprsGps";
    }
    return "Unknown";
}

UserClass user_class_from_string(std::string_view name) {
    for (UserClass c : {UserClass::Common, UserClass::Gprs, UserClass::GprsGps}) {
        if (to_string(c) == name) return c;
    }
    throw Error(ErrorCode::InvalidField, "unknown user class '" + std::string(name) + "'");
}

bool is_msisdn(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool secrets_equal(std::string_view a, std::string_view b) {
    const std::size_t n = std::max(a.size(), b.size());
    unsigned diff = a.size() == b.size() ? 0u : 1u;
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char ca = i < a.size() ? static_cast<unsigned char>(a[i]) : 0;
        const unsigned char cb = i < b.size() ? static_cast<unsigned char>(b[i]) : 0;
        diff |= static_cast<unsigned>(ca ^ cb);
    }
    return diff == 0;
}

namespace {

void check_limit(const std::optional<double>& limit) {
    if (limit && !(std::isfinite(*limit) && *limit > 0.0)) {
        throw Error(ErrorCode::InvalidField, "trigger_limit must be a finite value > 0");
    }
}

void check_advertiser(const Advertiser& adv) {
    if (adv.advertiser_id.empty()) throw Error(ErrorCode::InvalidField, "advertiser_id is empty");
    if (adv.service_type.empty()) throw Error(ErrorCode::InvalidField, "service_type is empty");
    if (!geo::is_finite(adv.position)) throw Error(ErrorCode::InvalidField, "position is not finite");
    check_limit(adv.trigger_limit);
}

}  // namespace

void Database::register_advertiser(Advertiser adv) {
    check_advertiser(adv);
    if (advertisements_.contains(adv.advertiser_id)) {
        throw Error(ErrorCode::DuplicateId, "advertiser '" + adv.advertiser_id + "' already registered");
    }
    std::string key = adv.advertiser_id;
    advertisements_.emplace(std::move(key), std::move(adv));
}

void Database::update_advertiser(const std::string& id, std::string_view secret,
                                 const AdvertiserChanges& changes) {
    auto it = advertisements_.find(id);
    if (it == advertisements_.end()) throw Error(ErrorCode::UnknownId, "advertiser '" + id + "'");
    if (!secrets_equal(it->second.secret, secret)) {
        throw Error(ErrorCode::BadCredential, "secret does not match advertiser '" + id + "'");
    }
    Advertiser next = it->second;
    if (changes.position) next.position = *changes.position;
    if (changes.service_type) next.service_type = *changes.service_type;
    if (changes.promo_text) next.promo_text = *changes.promo_text;
    if (changes.trigger_limit) next.trigger_limit = *changes.trigger_limit;
    if (changes.secret) next.secret = *changes.secret;
    check_advertiser(next);
    it->second = std::move(next);
}

void Database::remove_advertiser(const std::string& id, std::string_view secret) {
    auto it = advertisements_.find(id);
    if (it == advertisements_.end()) throw Error(ErrorCode::UnknownId, "advertiser '" + id + "'");
    if (!secrets_equal(it->second.secret, secret)) {
        throw Error(ErrorCode::BadCredential, "secret does not match advertiser '" + id + "'");
    }
    advertisements_.erase(it);
}

void Database::subscribe_user(const std::string& msisdn, UserClass user_class,
                              std::set<ServiceType> subscriptions) {
    if (!is_msisdn(msisdn)) throw Error(ErrorCode::InvalidField, "msisdn must be a non-empty digit string");
    if (subscriptions.empty()) {
        throw Error(ErrorCode::EmptySubscription, "user '" + msisdn + "' chose no service types");
    }
    if (subscriptions.contains(ServiceType{})) throw Error(ErrorCode::InvalidField, "empty service type tag");
    users_[msisdn] = UserProfile{msisdn, user_class, std::move(subscriptions), false};
}

void Database::unsubscribe_user(const std::string& msisdn) {
    if (users_.erase(msisdn) == 0) throw Error(ErrorCode::UnknownUser, "msisdn '" + msisdn + "'");
}

void Database::set_app_active(const std::string& msisdn, bool active) {
    auto it = users_.find(msisdn);
    if (it == users_.end()) throw Error(ErrorCode::UnknownUser, "msisdn '" + msisdn + "'");
    it->second.app_active = active;
}

const UserProfile* Database::find_user(const std::string& msisdn) const {
    auto it = users_.find(msisdn);
    return it == users_.end() ? nullptr : &it->second;
}

const Advertiser* Database::find_advertiser(const std::string& id) const {
    auto it = advertisements_.find(id);
    return it == advertisements_.end() ? nullptr : &it->second;
}

void Database::append_infolog(InfoLogEntry entry) {
    if (!users_.contains(entry.msisdn)) {
        throw Error(ErrorCode::UnknownUser, "info-log entry for unsubscribed msisdn '" + entry.msisdn + "'");
    }
    auto key = std::make_pair(entry.timestamp, entry.msisdn);
    infolog_.insert_or_assign(std::move(key), std::move(entry));
}

std::vector<InfoLogEntry> Database::drain_infolog() {
    std::vector<InfoLogEntry> out;
    out.reserve(infolog_.size());
    for (auto& [key, entry] : infolog_) out.push_back(std::move(entry));
    infolog_.clear();
    return out;
}

// ---------------------------------------------------------------------------
// Snapshot serialization

namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::MalformedSnapshot, where + ": " + what);
}

void expect_keys(const json& obj, const std::string& where, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
    if (!obj.is_object()) malformed(where, "expected an object");
    for (const char* key : required) {
        if (!obj.contains(key)) malformed(where, std::string("missing key \"") + key + "\"");
    }
    for (const auto& [key, value] : obj.items()) {
        auto match = [&](const char* k) { return key == k; };
        if (std::none_of(required.begin(), required.end(), match) &&
            std::none_of(optional.begin(), optional.end(), match)) {
            malformed(where, "unknown key \"" + key + "\"");
        }
    }
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_string()) malformed(where + "." + key, "expected a string");
    return v.get<std::string>();
}

double get_number(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number()) malformed(where + "." + key, "expected a number");
    return v.get<double>();
}

bool get_bool(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_boolean()) malformed(where + "." + key, "expected a boolean");
    return v.get<bool>();
}

geo::GeoPoint get_point(const json& obj, const char* key, const std::string& where) {
    const std::string path = where + "." + key;
    const json& v = obj.at(key);
    expect_keys(v, path, {"x", "y"});
    return {get_number(v, "x", path), get_number(v, "y", path)};
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

std::string snapshot_to_json(const Database& db) {
    ordered_json doc;
    doc["users"] = ordered_json::array();
    for (const auto& [msisdn, u] : db.users()) {
        ordered_json ju;
        ju["msisdn"] = u.msisdn;
        ju["user_class"] = std::string(to_string(u.user_class));
        ju["subscriptions"] = ordered_json(u.subscriptions);
        ju["app_active"] = u.app_active;
        doc["users"].push_back(std::move(ju));
    }
    doc["advertisements"] = ordered_json::array();
    for (const auto& [id, a] : db.advertisements()) {
        ordered_json ja;
        ja["advertiser_id"] = a.advertiser_id;
        ja["secret"] = a.secret;
        ja["position"] = {{"x", a.position.x}, {"y", a.position.y}};
        ja["service_type"] = a.service_type;
        ja["promo_text"] = a.promo_text;
        ja["trigger_limit"] = a.trigger_limit ? ordered_json(*a.trigger_limit) : ordered_json(nullptr);
        doc["advertisements"].push_back(std::move(ja));
    }
    return doc.dump(2) + "\n";
}

Database snapshot_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        malformed("line " + std::to_string(line_of(text, e.byte)), e.what());
    }

    expect_keys(doc, "snapshot", {"users", "advertisements"});
    if (!doc["users"].is_array()) malformed("users", "expected an array");
    if (!doc["advertisements"].is_array()) malformed("advertisements", "expected an array");

    Database db;
    std::size_t i = 0;
    for (const json& ju : doc["users"]) {
        const std::string where = "users[" + std::to_string(i++) + "]";
        expect_keys(ju, where, {"msisdn", "user_class", "subscriptions", "app_active"});
        const std::string msisdn = get_string(ju, "msisdn", where);
        if (db.find_user(msisdn)) malformed(where + ".msisdn", "duplicate msisdn '" + msisdn + "'");
        const json& subs = ju["subscriptions"];
        if (!subs.is_array()) malformed(where + ".subscriptions", "expected an array");
        std::set<ServiceType> tags;
        for (const json& tag : subs) {
            if (!tag.is_string()) malformed(where + ".subscriptions", "expected string tags");
            tags.insert(tag.get<std::string>());
        }
        try {
            db.subscribe_user(msisdn, user_class_from_string(get_string(ju, "user_class", where)),
                              std::move(tags));
            db.set_app_active(msisdn, get_bool(ju, "app_active", where));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::MalformedSnapshot) throw;
            malformed(where, e.what());
        }
    }

    i = 0;
    for (const json& ja : doc["advertisements"]) {
        const std::string where = "advertisements[" + std::to_string(i++) + "]";
        expect_keys(ja, where, {"advertiser_id", "secret", "position", "service_type", "promo_text"},
                    {"trigger_limit"});
        Advertiser adv;
        adv.advertiser_id = get_string(ja, "advertiser_id", where);
        adv.secret = get_string(ja, "secret", where);
        adv.position = get_point(ja, "position", where);
        adv.service_type = get_string(ja, "service_type", where);
        adv.promo_text = get_string(ja, "promo_text", where);
        if (ja.contains("trigger_limit") && !ja["trigger_limit"].is_null()) {
            adv.trigger_limit = get_number(ja, "trigger_limit", where);
        }
        try {
            db.register_advertiser(std::move(adv));
        } catch (const Error& e) {
            malformed(where, e.what());
        }
    }
    return db;
}

void save_snapshot(const Database& db, const std::filesystem::path& path) {
    const std::string text = snapshot_to_json(db);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

Database load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return snapshot_from_json(buf.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

}  // namespace lbs::store
