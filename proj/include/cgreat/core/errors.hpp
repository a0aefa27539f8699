#pragma once

#include <stdexcept>
#include <string>

namespace cgreat {

enum class ErrorKind {
    InversionFailure,
    IterationCap,
    DegenerateMap,
    DegenerateProbe,
    Precondition,
    Quadrature,
    RecurrenceViolation,
    SiblingOverlap,
    HorizonExhausted,
    NegativeE,
    DeltaUnreachable,
    EmptyCore,
    ProbeNotFound,
    ClosenessFailure,
    Config,
    Serialization,
};

const char* to_string(ErrorKind kind);

/// Base error for every failure raised by the library. The kind lets callers
/// (the CLI in particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InversionFailure: return "InversionFailure";
        case ErrorKind::IterationCap: return "IterationCap";
        case ErrorKind::DegenerateMap: return "DegenerateMap";
        case ErrorKind::DegenerateProbe: return "DegenerateProbe";
        case ErrorKind::Precondition: return "Precondition";
        case ErrorKind::Quadrature: return "Quadrature";
        case ErrorKind::RecurrenceViolation: return "RecurrenceViolation";
        case ErrorKind::SiblingOverlap: return "SiblingOverlap";
        case ErrorKind::HorizonExhausted: return "HorizonExhausted";
        case ErrorKind::NegativeE: return "NegativeE";
        case ErrorKind::DeltaUnreachable: return "DeltaUnreachable";
        case ErrorKind::EmptyCore: return "EmptyCore";
        case ErrorKind::ProbeNotFound: return "ProbeNotFound";
        case ErrorKind::ClosenessFailure: return "ClosenessFailure";
        case ErrorKind::Config: return "Config";
        case ErrorKind::Serialization: return "Serialization";
    }
    return "Unknown";
}

}  // namespace cgreat
