#include "lbs/error.hpp"

namespace lbs {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyNetwork: return "EmptyNetwork";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::BadCredential: return "BadCredential";
    case ErrorCode::EmptySubscription: return "EmptySubscription";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::UnknownUser: return "UnknownUser";
    case ErrorCode::UnknownClient: return "UnknownClient";
    case ErrorCode::AgreementMissing: return "AgreementMissing";
    case ErrorCode::NotAnEnterEvent: return "NotAnEnterEvent";
    case ErrorCode::MalformedSnapshot: return "MalformedSnapshot";
    case ErrorCode::MalformedRoute: return "MalformedRoute";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

static std::string compose(ErrorCode code, const std::string& detail) {
    std::string out(to_string(code));
    if (!detail.empty()) {
        out += ": ";
        out += detail;
    }
    return out;
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(compose(code, detail)), code_(code), detail_(detail) {}

}  // namespace lbs
