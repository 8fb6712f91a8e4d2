#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "lbs/store.hpp"
#include "lbs/trigger.hpp"

namespace lbs::dispatch {

using store::Tick;

enum class MessageFormat { Flash, AppPush };

std::string_view to_string(MessageFormat format);

/// Flash distances are rounded to this granularity, meters.
inline constexpr std::int64_t kFlashGranularity = 50;

struct AdMessage {
    std::string msisdn;
    std::string advertiser_id;
    std::int64_t approx_distance_m = 0;
    std::string promo_text;
    MessageFormat format = MessageFormat::Flash;
    Tick timestamp = 0;

    friend bool operator==(const AdMessage&, const AdMessage&) = default;
};

/// Common users, and app users whose application is not running, get a Flash
/// text with the distance rounded half-up to 50 m. App users with an active
/// application get an AppPush carrying the distance truncated to whole meters.
/// Throws Error(NotAnEnterEvent) for Exit and Proximity events.
AdMessage render(const trigger::TriggerEvent& event, const store::UserProfile& user,
                 const store::Advertiser& adv);

/// One line of messages.jsonl, without the trailing newline. Keys in order:
/// msisdn, advertiser_id, approx_distance_m, promo_text, format, timestamp.
std::string to_jsonl(const AdMessage& msg);

/// Append-only destination standing in for the SMSC.
class MessageSink {
  public:
    virtual ~MessageSink() = default;
    virtual void append(std::string_view line) = 0;
    virtual std::size_t count() const = 0;
};

class MemorySink final : public MessageSink {
  public:
    void append(std::string_view line) override { lines_.emplace_back(line); }
    std::size_t count() const override { return lines_.size(); }
    const std::vector<std::string>& lines() const { return lines_; }

  private:
    std::vector<std::string> lines_;
};

/// Truncates `path` on open; every append writes one newline-terminated line.
class FileSink final : public MessageSink {
  public:
    explicit FileSink(const std::filesystem::path& path);
    void append(std::string_view line) override;
    std::size_t count() const override { return count_; }
    const std::filesystem::path& path() const { return path_; }

    /// Pushes buffered lines to disk; throws Error(IoError) on failure.
    void flush();

  private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t count_ = 0;
};

void deliver(const AdMessage& msg, MessageSink& sink);

}  // namespace lbs::dispatch
