#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hic {

enum class ErrorKind {
    InvalidGraph,
    DisconnectedGraph,
    NotATree,
    UnknownNode,
    EmptyStubbornSet,
    EmptySourceSet,
    TooFewStubborn,
    NoRegularNodes,
    SingularSystem,
    DimensionMismatch,
    MissingInbound,
    NoConvergence,
    InvalidSpec,
    InvalidConfig,
    ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::EmptyStubbornSet: return "EmptyStubbornSet";
    case ErrorKind::EmptySourceSet: return "EmptySourceSet";
    case ErrorKind::TooFewStubborn: return "TooFewStubborn";
    case ErrorKind::NoRegularNodes: return "NoRegularNodes";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MissingInbound: return "MissingInbound";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace hic
