#include "radar/error.hpp"

namespace radar {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MalformedLine: return "MalformedLine";
        case ErrorKind::MalformedCsv: return "MalformedCsv";
        case ErrorKind::MalformedJson: return "MalformedJson";
        case ErrorKind::Io: return "Io";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::DegenerateInput: return "DegenerateInput";
        case ErrorKind::EmptyRegion: return "EmptyRegion";
        case ErrorKind::EmptySeries: return "EmptySeries";
        case ErrorKind::NonMonotonic: return "NonMonotonic";
        case ErrorKind::NegativeTime: return "NegativeTime";
        case ErrorKind::BadConfig: return "BadConfig";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace radar
