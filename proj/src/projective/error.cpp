#include "orbitforge/error.hpp"

namespace orbitforge {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DegenerateQuadruple: return "DegenerateQuadruple";
        case ErrorKind::DegeneratePair: return "DegeneratePair";
        case ErrorKind::ParabolicComposition: return "ParabolicComposition";
        case ErrorKind::SingularMobius: return "SingularMobius";
        case ErrorKind::EmptyRootList: return "EmptyRootList";
        case ErrorKind::ForbiddenParameter: return "ForbiddenParameter";
        case ErrorKind::CoincidentCoordinates: return "CoincidentCoordinates";
        case ErrorKind::InfiniteCoordinate: return "InfiniteCoordinate";
        case ErrorKind::ResultAtInfinity: return "ResultAtInfinity";
        case ErrorKind::IndeterminateStep: return "IndeterminateStep";
        case ErrorKind::IndeterminatePoint: return "IndeterminatePoint";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::UnsupportedInput: return "UnsupportedInput";
        case ErrorKind::NearIndeterminacy: return "NearIndeterminacy";
        case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
        case ErrorKind::DegenerateRoots: return "DegenerateRoots";
        case ErrorKind::VerificationFailed: return "VerificationFailed";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::NotSaddle: return "NotSaddle";
        case ErrorKind::ZeroCoordinate: return "ZeroCoordinate";
        case ErrorKind::NewtonDivergence: return "NewtonDivergence";
        case ErrorKind::CoincidenceWithExtra: return "CoincidenceWithExtra";
        case ErrorKind::TailNotFound: return "TailNotFound";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
    }
    return "Unknown";
}

}  // namespace orbitforge
