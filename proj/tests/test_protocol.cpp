#include <doctest.h>

#include <vector>

#include "lbs/error.hpp"
#include "lbs/protocol.hpp"

using namespace lbs::protocol;
using lbs::ErrorCode;
using lbs::ldt::LdtMethod;
using lbs::store::UserClass;

namespace {

struct Fixture {
    std::vector<lbs::ldt::BaseStation> stations{{"bs-a", {0, 0}}, {"bs-b", {3000, 0}}};
    Network network{stations};
    lbs::store::Database db;
    lbs::ldt::RandomStream rng{9};

    Fixture() {
        db.subscribe_user("100", UserClass::Common, {"food"});
        db.subscribe_user("200", UserClass::Gprs, {"food"});
        db.subscribe_user("300", UserClass::GprsGps, {"food"});
    }
};

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const lbs::Error& e) {
        return e.code();
    }
    FAIL("expected an lbs::Error");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("class to method mapping") {
    CHECK(class_method(UserClass::Common) == LdtMethod::CgiTa);
    CHECK(class_method(UserClass::Gprs) == LdtMethod::Eotd);
    CHECK(class_method(UserClass::GprsGps) == LdtMethod::Agps);
}

TEST_CASE("MO-LR appends the returned report to the info-log") {
    Fixture f;
    const LocationReport r = handle_mo_lr({"300", 0, {0, 0}}, f.network, f.db, f.rng);
    CHECK(r.fix.method == LdtMethod::Agps);
    CHECK(r.msisdn == "300");
    REQUIRE(f.db.infolog_size() == 1);
    const auto drained = f.db.drain_infolog();
    CHECK(drained.front() == r);
}

TEST_CASE("MO-LR uses the class method for every class") {
    Fixture f;
    CHECK(handle_mo_lr({"100", 0, {700, 50}}, f.network, f.db, f.rng).fix.method == LdtMethod::CgiTa);
    CHECK(handle_mo_lr({"200", 0, {700, 50}}, f.network, f.db, f.rng).fix.method == LdtMethod::Eotd);
    CHECK(f.db.infolog_size() == 2);
}

TEST_CASE("MO-LR from an unsubscribed msisdn is rejected") {
    Fixture f;
    CHECK(code_of([&] { handle_mo_lr({"999", 0, {0, 0}}, f.network, f.db, f.rng); }) == ErrorCode::UnknownUser);
    CHECK(f.db.infolog_size() == 0);
}

TEST_CASE("two MO-LRs in one tick leave one entry") {
    Fixture f;
    handle_mo_lr({"300", 5, {0, 0}}, f.network, f.db, f.rng);
    const LocationReport second = handle_mo_lr({"300", 5, {10, 0}}, f.network, f.db, f.rng);
    const auto drained = f.db.drain_infolog();
    REQUIRE(drained.size() == 1);
    CHECK(drained.front() == second);
}

TEST_CASE("MO-LR for a Common user needs base stations") {
    Fixture f;
    const Network empty{};
    CHECK(code_of([&] { handle_mo_lr({"100", 0, {0, 0}}, empty, f.db, f.rng); }) == ErrorCode::EmptyNetwork);
    CHECK(f.db.infolog_size() == 0);
}

TEST_CASE("MT-LR gated by agreement, never touching the info-log") {
    Fixture f;
    const std::vector<LcsClient> clients{{"police", true}, {"spam-co", false}};

    const LocationReport r = handle_mt_lr({"police", "300"}, clients, {50, 50}, f.network, f.db, f.rng, 3);
    CHECK(r.msisdn == "300");
    CHECK(r.timestamp == 3);
    CHECK(r.fix.method == LdtMethod::Agps);
    CHECK(lbs::geo::contains(r.fix.region, {50, 50}));
    CHECK(f.db.infolog_size() == 0);

    CHECK(code_of([&] { handle_mt_lr({"spam-co", "300"}, clients, {0, 0}, f.network, f.db, f.rng); }) ==
          ErrorCode::AgreementMissing);
    CHECK(code_of([&] { handle_mt_lr({"nobody", "300"}, clients, {0, 0}, f.network, f.db, f.rng); }) ==
          ErrorCode::UnknownClient);
    CHECK(code_of([&] { handle_mt_lr({"police", "999"}, clients, {0, 0}, f.network, f.db, f.rng); }) ==
          ErrorCode::UnknownUser);
    CHECK(f.db.infolog_size() == 0);
}

TEST_CASE("report stream is reproducible for a fixed seed") {
    auto stream = [] {
        Fixture f;
        std::vector<LocationReport> out;
        for (int t = 0; t < 50; ++t) {
            for (const char* m : {"100", "200", "300"}) {
                out.push_back(handle_mo_lr({m, t, {t * 40.0, t * -13.0}}, f.network, f.db, f.rng));
            }
            f.db.drain_infolog();
        }
        return out;
    };
    CHECK(stream() == stream());
}
