#pragma once

#include <stdexcept>
#include <string>

namespace pslab {

enum class ErrorKind {
    Domain,          // precondition on an argument violated
    Precision,       // extended-precision budget exceeded
    ScaleTooLarge,   // integer part no longer representable
    Boundary,        // floor/ceil decision cannot be certified
    RangeTooLarge,   // sieve interval too wide
    Quadrature,      // adaptive integration did not converge
    SizeCap,         // direct evaluation would be too large
    NotMonomialLike, // derivative bracket violated
    Io,
    Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
    if (!condition) fail(kind, what);
}

} // namespace pslab
