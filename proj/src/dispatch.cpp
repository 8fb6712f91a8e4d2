#include "lbs/dispatch.hpp"

#include <cmath>

#include <json.hpp>

#include "lbs/error.hpp"

namespace lbs::dispatch {

std::string_view to_string(MessageFormat format) {
    switch (format) {
    case MessageFormat::Flash: return "Flash";
    case MessageFormat::AppPush: return "AppPush";
    }
    return "Unknown";
}

AdMessage render(const trigger::TriggerEvent& event, const store::UserProfile& user,
                 const store::Advertiser& adv) {
    if (event.kind != trigger::EventKind::Enter) {
        throw Error(ErrorCode::NotAnEnterEvent,
                    "cannot render a " + std::string(trigger::to_string(event.kind)) + " event");
    }
    const double d = std::max(event.distance, 0.0);
    AdMessage msg{event.msisdn, adv.advertiser_id, 0, adv.promo_text, MessageFormat::Flash, event.timestamp};

    const bool app_user = user.user_class != store::UserClass::Common;
    if (app_user && user.app_active) {
        msg.format = MessageFormat::AppPush;
        msg.approx_distance_m = static_cast<std::int64_t>(std::floor(d));
    } else {
        const double steps = std::floor(d / static_cast<double>(kFlashGranularity) + 0.5);
        msg.approx_distance_m = static_cast<std::int64_t>(steps) * kFlashGranularity;
    }
    return msg;
}

std::string to_jsonl(const AdMessage& msg) {
    nlohmann::ordered_json j;
    j["msisdn"] = msg.msisdn;
    j["advertiser_id"] = msg.advertiser_id;
    j["approx_distance_m"] = msg.approx_distance_m;
    j["promo_text"] = msg.promo_text;
    j["format"] = std::string(to_string(msg.format));
    j["timestamp"] = msg.timestamp;
    return j.dump();
}

FileSink::FileSink(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
}

void FileSink::append(std::string_view line) {
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.put('\n');
    if (!out_) throw Error(ErrorCode::IoError, "write failed for '" + path_.string() + "'");
    ++count_;
}

void FileSink::flush() {
    out_.flush();
    if (!out_) throw Error(ErrorCode::IoError, "flush failed for '" + path_.string() + "'");
}

void deliver(const AdMessage& msg, MessageSink& sink) { sink.append(to_jsonl(msg)); }

}  // namespace lbs::dispatch
