#include "lbs/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lbs/error.hpp"

namespace lbs::sim {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ConfigError, field + ": " + what);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
    if (!obj.is_object()) bad(where, "expected an object");
    for (const char* k : required) {
        if (!obj.contains(k)) bad(where, std::string("missing key \"") + k + "\"");
    }
    for (const auto& [key, value] : obj.items()) {
        auto same = [&](const char* k) { return key == k; };
        if (std::none_of(required.begin(), required.end(), same) &&
            std::none_of(optional.begin(), optional.end(), same)) {
            bad(where, "unknown key \"" + key + "\"");
        }
    }
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) bad(field, "expected a number");
    return v.get<double>();
}

std::string text(const json& v, const std::string& field) {
    if (!v.is_string()) bad(field, "expected a string");
    return v.get<std::string>();
}

std::filesystem::path resolve(const json& v, const std::string& field, const std::filesystem::path& base) {
    std::filesystem::path p = text(v, field);
    return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

void validate(const SimConfig& cfg) {
    if (cfg.ticks < 1) bad("ticks", "must be >= 1");
    if (!(std::isfinite(cfg.ta_band) && cfg.ta_band > 0.0)) bad("ta_band", "must be > 0");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < cfg.base_stations.size(); ++i) {
        const auto& bs = cfg.base_stations[i];
        const std::string where = "base_stations[" + std::to_string(i) + "]";
        if (bs.id.empty()) bad(where + ".id", "must be non-empty");
        if (!ids.insert(bs.id).second) bad(where + ".id", "duplicate id '" + bs.id + "'");
        if (!geo::is_finite(bs.position)) bad(where + ".position", "must be finite");
        if (!(bs.sector_width > 0.0 && bs.sector_width <= 360.0)) bad(where + ".sector_width", "must be in (0, 360]");
    }
    ids.clear();
    for (std::size_t i = 0; i < cfg.lcs_clients.size(); ++i) {
        const auto& c = cfg.lcs_clients[i];
        const std::string where = "lcs_clients[" + std::to_string(i) + "].client_id";
        if (c.client_id.empty()) bad(where, "must be non-empty");
        if (!ids.insert(c.client_id).second) bad(where, "duplicate id '" + c.client_id + "'");
    }
    try {
        trigger::validate(cfg.trigger);
    } catch (const Error& e) {
        bad("trigger", e.detail());
    }
}

SimConfig config_from_json(std::string_view input, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(input.begin(), input.end());
    } catch (const json::parse_error& e) {
        bad("config", e.what());
    }
    check_keys(doc, "config",
               {"seed", "ticks", "base_stations", "routes_path", "snapshot_path", "out_dir"},
               {"lcs_clients", "trigger", "ta_band", "mt_lr_requests"});

    SimConfig cfg;
    if (!doc["seed"].is_number_unsigned()) bad("seed", "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
    if (!doc["ticks"].is_number_integer()) bad("ticks", "expected an integer");
    cfg.ticks = doc["ticks"].get<Tick>();
    if (doc.contains("ta_band")) cfg.ta_band = number(doc["ta_band"], "ta_band");

    if (!doc["base_stations"].is_array()) bad("base_stations", "expected an array");
    std::size_t i = 0;
    for (const json& jb : doc["base_stations"]) {
        const std::string where = "base_stations[" + std::to_string(i++) + "]";
        check_keys(jb, where, {"id", "position"}, {"sector_width"});
        ldt::BaseStation bs;
        bs.id = text(jb["id"], where + ".id");
        check_keys(jb["position"], where + ".position", {"x", "y"});
        bs.position = {number(jb["position"]["x"], where + ".position.x"),
                       number(jb["position"]["y"], where + ".position.y")};
        if (jb.contains("sector_width")) bs.sector_width = number(jb["sector_width"], where + ".sector_width");
        cfg.base_stations.push_back(std::move(bs));
    }

    if (doc.contains("lcs_clients")) {
        if (!doc["lcs_clients"].is_array()) bad("lcs_clients", "expected an array");
        i = 0;
        for (const json& jc : doc["lcs_clients"]) {
            const std::string where = "lcs_clients[" + std::to_string(i++) + "]";
            check_keys(jc, where, {"client_id", "agreement"});
            if (!jc["agreement"].is_boolean()) bad(where + ".agreement", "expected a boolean");
            cfg.lcs_clients.push_back({text(jc["client_id"], where + ".client_id"), jc["agreement"].get<bool>()});
        }
    }

    if (doc.contains("trigger")) {
        const json& jt = doc["trigger"];
        check_keys(jt, "trigger", {},
                   {"default_limit", "hysteresis_fraction", "conservative_mode", "proximity_threshold"});
        if (jt.contains("default_limit")) cfg.trigger.default_limit = number(jt["default_limit"], "trigger.default_limit");
        if (jt.contains("hysteresis_fraction")) {
            cfg.trigger.hysteresis_fraction = number(jt["hysteresis_fraction"], "trigger.hysteresis_fraction");
        }
        if (jt.contains("conservative_mode")) {
            if (!jt["conservative_mode"].is_boolean()) bad("trigger.conservative_mode", "expected a boolean");
            cfg.trigger.conservative_mode = jt["conservative_mode"].get<bool>();
        }
        if (jt.contains("proximity_threshold")) {
            cfg.trigger.proximity_threshold = number(jt["proximity_threshold"], "trigger.proximity_threshold");
        }
    }

    if (doc.contains("mt_lr_requests")) {
        if (!doc["mt_lr_requests"].is_array()) bad("mt_lr_requests", "expected an array");
        i = 0;
        for (const json& jr : doc["mt_lr_requests"]) {
            const std::string where = "mt_lr_requests[" + std::to_string(i++) + "]";
            check_keys(jr, where, {"t", "client_id", "msisdn"});
            if (!jr["t"].is_number_integer()) bad(where + ".t", "expected an integer tick");
            cfg.mt_lr_requests.push_back(
                {jr["t"].get<Tick>(), {text(jr["client_id"], where + ".client_id"), text(jr["msisdn"], where + ".msisdn")}});
        }
    }

    cfg.routes_path = resolve(doc["routes_path"], "routes_path", base_dir);
    cfg.snapshot_path = resolve(doc["snapshot_path"], "snapshot_path", base_dir);
    cfg.out_dir = resolve(doc["out_dir"], "out_dir", base_dir);
    validate(cfg);
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return config_from_json(buf.str(), path.parent_path());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

}  // namespace lbs::sim
