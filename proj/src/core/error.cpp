#include "sbm/error.hpp"

namespace sbm {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::BelowConnectivityScale: return "BelowConnectivityScale";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::RootSelectionAmbiguous: return "RootSelectionAmbiguous";
        case ErrorCode::EdgeNotBracketed: return "EdgeNotBracketed";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::SizeGuard: return "SizeGuard";
        case ErrorCode::MissingVectors: return "MissingVectors";
        case ErrorCode::DegenerateEmbedding: return "DegenerateEmbedding";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::SizeMismatch: return "SizeMismatch";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

bool is_numerical(ErrorCode code) {
    return code == ErrorCode::NonConvergence || code == ErrorCode::RootSelectionAmbiguous ||
           code == ErrorCode::EdgeNotBracketed || code == ErrorCode::DegenerateEmbedding;
}

}  // namespace sbm
