#pragma once

#include <stdexcept>
#include <string>

namespace vcarl {

enum class ErrorKind {
    config,        // invalid parameters or configuration file
    exponent,      // exponent outside its admissible range
    ordering,      // xi_minus >= xi_plus and similar ordering violations
    scale,         // tile scale not resolvable on the sample grid
    input,         // malformed input data
    grid_mismatch, // objects defined on different grids
    incoverable,   // region not covered by the candidate tent family
    construction,  // a stopping-time construction failed to meet its bound
    assertion      // a certified invariant was violated
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind) noexcept;

// Exit code used by the command line tool for an error of the given kind.
int exit_code_for(ErrorKind kind) noexcept;

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what)
{
    if (!cond) fail(kind, what);
}

} // namespace vcarl
