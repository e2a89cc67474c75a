#include "asrbias/error.hpp"

namespace asrbias {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::DuplicateUtteranceId: return "DuplicateUtteranceId";
    case ErrorKind::MissingAttribute: return "MissingAttribute";
    case ErrorKind::ZeroReferenceLength: return "ZeroReferenceLength";
    case ErrorKind::NegativeWer: return "NegativeWer";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::MissingNormGroup: return "MissingNormGroup";
    case ErrorKind::ZeroBaseWer: return "ZeroBaseWer";
    case ErrorKind::NoGroupsRemaining: return "NoGroupsRemaining";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::MissingSection: return "MissingSection";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

}  // namespace asrbias
