#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace quipmc {

enum class ErrorKind {
    Syntax,
    UnknownGate,
    ArityMismatch,
    DuplicateTarget,
    UnknownVariable,
    DuplicateName,
    NotUnitary,
    UndefinedGuard,
    DimensionMismatch,
    DimensionCap,
    IndexOutOfRange,
    StateExplosion,
    BranchExplosion,
    NonConvergence,
    Io,
    BadArgument,
    Internal,
};

struct SourcePos {
    int line = 0;  // 1-based
    int col = 0;   // 1-based

    std::string to_string() const {
        return std::to_string(line) + ":" + std::to_string(col);
    }
};

/// Error type shared by every module; carries a kind and, for frontend
/// errors, the source position that triggered it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Error(ErrorKind kind, SourcePos pos, const std::string& message)
        : std::runtime_error(pos.to_string() + ": " + message), kind_(kind), pos_(pos) {}

    ErrorKind kind() const { return kind_; }
    const std::optional<SourcePos>& pos() const { return pos_; }

private:
    ErrorKind kind_;
    std::optional<SourcePos> pos_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Syntax: return "SyntaxError";
        case ErrorKind::UnknownGate: return "UnknownGate";
        case ErrorKind::ArityMismatch: return "ArityMismatch";
        case ErrorKind::DuplicateTarget: return "DuplicateTarget";
        case ErrorKind::UnknownVariable: return "UnknownVariable";
        case ErrorKind::DuplicateName: return "DuplicateName";
        case ErrorKind::NotUnitary: return "NotUnitary";
        case ErrorKind::UndefinedGuard: return "UndefinedGuard";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::DimensionCap: return "DimensionCap";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::StateExplosion: return "StateExplosion";
        case ErrorKind::BranchExplosion: return "BranchExplosion";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::Io: return "IoError";
        case ErrorKind::BadArgument: return "BadArgument";
        case ErrorKind::Internal: return "InternalError";
    }
    return "UnknownError";
}

}  // namespace quipmc
