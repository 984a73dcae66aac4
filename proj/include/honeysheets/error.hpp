#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace honeysheets {

enum class Errc {
    UnsupportedCountry,
    ConfigMismatch,
    SheetMismatch,
    EmptyChangeSet,
    BadIndex,
    BadDestination,
    KeyspaceExhausted,
    MailboxError,
    BadBoundaries,
    ExportError,
    InfeasibleTargets,
    InvalidProfile,
    InvalidTheme,
    ParseError,
    IoError,
    ReplayRejected,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the Errc codes so callers
/// (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::UnsupportedCountry: return "UnsupportedCountry";
    case Errc::ConfigMismatch: return "ConfigMismatch";
    case Errc::SheetMismatch: return "SheetMismatch";
    case Errc::EmptyChangeSet: return "EmptyChangeSet";
    case Errc::BadIndex: return "BadIndex";
    case Errc::BadDestination: return "BadDestination";
    case Errc::KeyspaceExhausted: return "KeyspaceExhausted";
    case Errc::MailboxError: return "MailboxError";
    case Errc::BadBoundaries: return "BadBoundaries";
    case Errc::ExportError: return "ExportError";
    case Errc::InfeasibleTargets: return "InfeasibleTargets";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::InvalidTheme: return "InvalidTheme";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::ReplayRejected: return "ReplayRejected";
    }
    return "Unknown";
}

} // namespace honeysheets
