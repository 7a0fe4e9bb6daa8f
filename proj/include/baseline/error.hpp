#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace baseline {

enum class ErrorKind {
    PathNotFound,
    TombstoneAtPath,
    TypeMismatch,
    DuplicateId,
    MissingAnchor,
    InvalidTarget,
    DanglingLink,
    DependencyFailure,
    CycleDetected,
    IndexOutOfRange,
    ParseError,
    CorruptFile,
    FormatVersionUnsupported,
    Io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::PathNotFound: return "PathNotFound";
        case ErrorKind::TombstoneAtPath: return "TombstoneAtPath";
        case ErrorKind::TypeMismatch: return "TypeMismatch";
        case ErrorKind::DuplicateId: return "DuplicateId";
        case ErrorKind::MissingAnchor: return "MissingAnchor";
        case ErrorKind::InvalidTarget: return "InvalidTarget";
        case ErrorKind::DanglingLink: return "DanglingLink";
        case ErrorKind::DependencyFailure: return "DependencyFailure";
        case ErrorKind::CycleDetected: return "CycleDetected";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::CorruptFile: return "CorruptFile";
        case ErrorKind::FormatVersionUnsupported: return "FormatVersionUnsupported";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

/// Base exception for every failure raised by the engine.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The description without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

/// Raised by executeTimeline; carries the index of the operation that failed.
class TimelineError : public Error {
public:
    TimelineError(const Error& cause, std::size_t index)
        : Error(cause.kind(), "op " + std::to_string(index) + ": " + cause.message()), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Retraction could not move an operation before an earlier one that created
/// the structure it relies on. `blocker` indexes the blocking operation in the
/// timeline that was being retracted through.
class DependencyFailure : public Error {
public:
    DependencyFailure(std::size_t blocker, const std::string& message)
        : Error(ErrorKind::DependencyFailure, message), blocker_(blocker) {}

    std::size_t blocker() const noexcept { return blocker_; }

private:
    std::size_t blocker_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error(ErrorKind::ParseError,
                std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace baseline
