#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lbs {

enum class ErrorCode {
    EmptyNetwork,
    DuplicateId,
    UnknownId,
    BadCredential,
    EmptySubscription,
    InvalidField,
    UnknownUser,
    UnknownClient,
    AgreementMissing,
    NotAnEnterEvent,
    MalformedSnapshot,
    MalformedRoute,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above. The
/// what() string starts with the code name so CLI output stays greppable.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

  private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace lbs
