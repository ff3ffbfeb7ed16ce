#include "freenormal/errors.hpp"

namespace freenormal {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::PoleProximity: return "PoleProximity";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::InvalidContour: return "InvalidContour";
        case ErrorKind::SeedNotFound: return "SeedNotFound";
        case ErrorKind::StepUnderflow: return "StepUnderflow";
        case ErrorKind::NoSignChange: return "NoSignChange";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::InvariantViolation: return "InvariantViolation";
    }
    return "Error";
}

}  // namespace freenormal
