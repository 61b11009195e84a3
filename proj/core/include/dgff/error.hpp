#pragma once

#include <stdexcept>
#include <string>

namespace dgff {

enum class ErrorKind {
    InvalidArgument,
    InvalidSize,
    EmptyDomain,
    Domain,
    Containment,
    Geometry,
    Overflow,
    Solver,
    Factorization,
    PatternNotFound,
    Validation,
    Io,
    UnknownExperiment,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Errors caused by bad input rather than by numerics or the filesystem.
    bool is_validation() const noexcept
    {
        return kind_ != ErrorKind::Solver && kind_ != ErrorKind::Factorization &&
               kind_ != ErrorKind::Io;
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

inline void require(bool ok, ErrorKind kind, const std::string& what)
{
    if (!ok) fail(kind, what);
}

} // namespace dgff
