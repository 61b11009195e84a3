#include "dgff/error.hpp"

namespace dgff {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidSize: return "invalid-size";
    case ErrorKind::EmptyDomain: return "empty-domain";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Containment: return "containment";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Solver: return "solver-failure";
    case ErrorKind::Factorization: return "factorization";
    case ErrorKind::PatternNotFound: return "pattern-not-found";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Io: return "io";
    case ErrorKind::UnknownExperiment: return "unknown-experiment";
    }
    return "unknown";
}

} // namespace dgff
