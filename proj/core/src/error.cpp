#include "atlas/error.hpp"

namespace atlas {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::RootConditioning: return "RootConditioning";
        case ErrorKind::LabelAmbiguity: return "LabelAmbiguity";
        case ErrorKind::PathThroughTurningPoint: return "PathThroughTurningPoint";
        case ErrorKind::SeedExhaustion: return "SeedExhaustion";
        case ErrorKind::ZeroX1: return "ZeroX1";
        case ErrorKind::CorrectorDivergence: return "CorrectorDivergence";
        case ErrorKind::DegenerateTangent: return "DegenerateTangent";
        case ErrorKind::PathTooCloseToCrossing: return "PathTooCloseToCrossing";
        case ErrorKind::LabelMismatch: return "LabelMismatch";
        case ErrorKind::SimultaneousEvents: return "SimultaneousEvents";
        case ErrorKind::Unroutable: return "Unroutable";
        case ErrorKind::SaddleCollision: return "SaddleCollision";
        case ErrorKind::ProbeAmbiguity: return "ProbeAmbiguity";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::LoopTooWide: return "LoopTooWide";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::AnchorDegenerate: return "AnchorDegenerate";
        case ErrorKind::IndexError: return "IndexError";
        case ErrorKind::FormatVersion: return "FormatVersion";
    }
    return "Unknown";
}

}  // namespace atlas
