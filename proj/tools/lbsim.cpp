// Command-line front end: scenario runs, advertiser and subscriber
// management against a snapshot file, and route validation.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lbs/error.hpp"
#include "lbs/route.hpp"
#include "lbs/simulation.hpp"
#include "lbs/store.hpp"

namespace fs = std::filesystem;
using lbs::Error;
using lbs::ErrorCode;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

lbs::store::Database open_or_empty(const fs::path& path) {
    if (!fs::exists(path)) return {};
    return lbs::store::load_snapshot(path);
}

std::set<std::string> split_tags(const std::vector<std::string>& raw) {
    std::set<std::string> tags;
    for (const std::string& item : raw) {
        std::size_t start = 0;
        while (start <= item.size()) {
            std::size_t comma = item.find(',', start);
            if (comma == std::string::npos) comma = item.size();
            std::string tag = item.substr(start, comma - start);
            if (!tag.empty()) tags.insert(std::move(tag));
            start = comma + 1;
        }
    }
    return tags;
}

struct AdvOptions {
    fs::path snapshot;
    std::string id;
    std::string secret;
    std::optional<double> x, y;
    std::optional<std::string> service;
    std::optional<std::string> promo;
    std::optional<double> limit;
    bool clear_limit = false;
    std::optional<std::string> new_secret;
};

struct UserOptions {
    fs::path snapshot;
    std::string msisdn;
    std::string user_class;
    std::vector<std::string> services;
    std::string app_state;
};

struct RunOptions {
    fs::path config;
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> out;
};

int cmd_run(const RunOptions& opt) {
    lbs::sim::SimConfig cfg = lbs::sim::load_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.out) cfg.out_dir = *opt.out;
    lbs::sim::SimReport report = lbs::sim::run(cfg);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << lbs::sim::summary(report);
    return kExitOk;
}

int cmd_adv_add(const AdvOptions& opt) {
    if (!opt.x || !opt.y || !opt.service) {
        throw Error(ErrorCode::InvalidField, "adv add requires --x, --y and --service");
    }
    auto db = open_or_empty(opt.snapshot);
    db.register_advertiser({opt.id, opt.secret, {*opt.x, *opt.y}, *opt.service, opt.promo.value_or(""), opt.limit});
    lbs::store::save_snapshot(db, opt.snapshot);
    std::cout << "registered " << opt.id << "\n";
    return kExitOk;
}

int cmd_adv_update(const AdvOptions& opt) {
    auto db = lbs::store::load_snapshot(opt.snapshot);
    const lbs::store::Advertiser* current = db.find_advertiser(opt.id);
    if (!current) throw Error(ErrorCode::UnknownId, "advertiser '" + opt.id + "'");

    lbs::store::AdvertiserChanges changes;
    if (opt.x || opt.y) changes.position = lbs::geo::GeoPoint{opt.x.value_or(current->position.x),
                                                             opt.y.value_or(current->position.y)};
    changes.service_type = opt.service;
    changes.promo_text = opt.promo;
    if (opt.clear_limit) changes.trigger_limit = std::optional<double>{};
    else if (opt.limit) changes.trigger_limit = opt.limit;
    changes.secret = opt.new_secret;

    db.update_advertiser(opt.id, opt.secret, changes);
    lbs::store::save_snapshot(db, opt.snapshot);
    std::cout << "updated " << opt.id << "\n";
    return kExitOk;
}

int cmd_adv_rm(const AdvOptions& opt) {
    auto db = lbs::store::load_snapshot(opt.snapshot);
    db.remove_advertiser(opt.id, opt.secret);
    lbs::store::save_snapshot(db, opt.snapshot);
    std::cout << "removed " << opt.id << "\n";
    return kExitOk;
}

int cmd_adv_list(const fs::path& snapshot) {
    const auto db = lbs::store::load_snapshot(snapshot);
    for (const auto& [id, a] : db.advertisements()) {
        std::cout << id << "\t" << a.service_type << "\t(" << a.position.x << ", " << a.position.y << ")\t";
        if (a.trigger_limit) std::cout << *a.trigger_limit << " m";
        else std::cout << "default";
        std::cout << "\t" << a.promo_text << "\n";
    }
    return kExitOk;
}

int cmd_user_sub(const UserOptions& opt) {
    auto db = open_or_empty(opt.snapshot);
    db.subscribe_user(opt.msisdn, lbs::store::user_class_from_string(opt.user_class), split_tags(opt.services));
    lbs::store::save_snapshot(db, opt.snapshot);
    std::cout << "subscribed " << opt.msisdn << "\n";
    return kExitOk;
}

int cmd_user_unsub(const UserOptions& opt) {
    auto db = lbs::store::load_snapshot(opt.snapshot);
    db.unsubscribe_user(opt.msisdn);
    lbs::store::save_snapshot(db, opt.snapshot);
    std::cout << "unsubscribed " << opt.msisdn << "\n";
    return kExitOk;
}

int cmd_user_app(const UserOptions& opt) {
    auto db = lbs::store::load_snapshot(opt.snapshot);
    db.set_app_active(opt.msisdn, opt.app_state == "on");
    lbs::store::save_snapshot(db, opt.snapshot);
    std::cout << opt.msisdn << " app " << opt.app_state << "\n";
    return kExitOk;
}

int cmd_user_list(const fs::path& snapshot) {
    const auto db = lbs::store::load_snapshot(snapshot);
    for (const auto& [msisdn, u] : db.users()) {
        std::cout << msisdn << "\t" << lbs::store::to_string(u.user_class) << "\t"
                  << (u.app_active ? "app-on" : "app-off") << "\t";
        bool first = true;
        for (const auto& s : u.subscriptions) {
            std::cout << (first ? "" : ",") << s;
            first = false;
        }
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_validate(const fs::path& routes) {
    const auto loaded = lbs::sim::load_routes(routes);
    std::cout << loaded.size() << " route(s) ok\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Location-based advertisement simulator"};
    app.require_subcommand(1);

    std::function<int()> action;

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Run a scenario");
    run->add_option("--config", run_opt.config, "Scenario config JSON")->required();
    run->add_option("--seed", run_opt.seed, "Override the config seed");
    run->add_option("--out", run_opt.out, "Override the output directory");
    run->callback([&] { action = [&] { return cmd_run(run_opt); }; });

    AdvOptions adv_opt;
    auto* adv = app.add_subcommand("adv", "Manage advertisers");
    adv->require_subcommand(1);
    auto add_common = [&](CLI::App* sub, bool needs_secret) {
        sub->add_option("--snapshot", adv_opt.snapshot, "Snapshot JSON")->required();
        sub->add_option("--id", adv_opt.id, "Advertiser id")->required();
        auto* secret = sub->add_option("--secret", adv_opt.secret, "Advertiser secret");
        if (needs_secret) secret->required();
    };
    auto* adv_add = adv->add_subcommand("add", "Register an advertiser");
    add_common(adv_add, false);
    auto* adv_update = adv->add_subcommand("update", "Modify an advertiser");
    add_common(adv_update, true);
    for (auto* sub : {adv_add, adv_update}) {
        sub->add_option("--x", adv_opt.x, "Outlet x, meters");
        sub->add_option("--y", adv_opt.y, "Outlet y, meters");
        sub->add_option("--service", adv_opt.service, "Service type tag");
        sub->add_option("--promo", adv_opt.promo, "Promotional text");
        sub->add_option("--limit", adv_opt.limit, "Trigger limit, meters");
    }
    adv_update->add_flag("--clear-limit", adv_opt.clear_limit, "Fall back to the default limit");
    adv_update->add_option("--new-secret", adv_opt.new_secret, "Replace the secret");
    auto* adv_rm = adv->add_subcommand("rm", "Remove an advertiser");
    add_common(adv_rm, true);
    auto* adv_list = adv->add_subcommand("list", "List advertisers");
    adv_list->add_option("--snapshot", adv_opt.snapshot, "Snapshot JSON")->required();

    adv_add->callback([&] { action = [&] { return cmd_adv_add(adv_opt); }; });
    adv_update->callback([&] { action = [&] { return cmd_adv_update(adv_opt); }; });
    adv_rm->callback([&] { action = [&] { return cmd_adv_rm(adv_opt); }; });
    adv_list->callback([&] { action = [&] { return cmd_adv_list(adv_opt.snapshot); }; });

    UserOptions user_opt;
    auto* user = app.add_subcommand("user", "Manage subscribers");
    user->require_subcommand(1);
    auto* user_sub = user->add_subcommand("sub", "Subscribe or resubscribe a user");
    user_sub->add_option("--msisdn", user_opt.msisdn)->required();
    user_sub->add_option("--class", user_opt.user_class, "Common, Gprs or GprsGps")->required();
    user_sub->add_option("--service", user_opt.services, "Service tags (repeatable or comma separated)");
    auto* user_unsub = user->add_subcommand("unsub", "Remove a subscriber");
    user_unsub->add_option("--msisdn", user_opt.msisdn)->required();
    auto* user_app = user->add_subcommand("app", "Set whether the handset application is active");
    user_app->add_option("--msisdn", user_opt.msisdn)->required();
    user_app->add_option("--state", user_opt.app_state)->required()->check(CLI::IsMember({"on", "off"}));
    auto* user_list = user->add_subcommand("list", "List subscribers");
    for (auto* sub : {user_sub, user_unsub, user_app, user_list}) {
        sub->add_option("--snapshot", user_opt.snapshot, "Snapshot JSON")->required();
    }
    user_sub->callback([&] { action = [&] { return cmd_user_sub(user_opt); }; });
    user_unsub->callback([&] { action = [&] { return cmd_user_unsub(user_opt); }; });
    user_app->callback([&] { action = [&] { return cmd_user_app(user_opt); }; });
    user_list->callback([&] { action = [&] { return cmd_user_list(user_opt.snapshot); }; });

    fs::path routes_path;
    auto* validate = app.add_subcommand("validate", "Check route files");
    validate->add_option("--routes", routes_path, "Route file or directory")->required();
    validate->callback([&] { action = [&] { return cmd_validate(routes_path); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        return action ? action() : kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::IoError ? kExitIo : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
