// errors.hpp -- error codes and the exception type used across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace pfrss {

enum class ErrorCode {
    invalid_argument = 1,  // bad parameter (negative dt, unknown kind, ...)
    config = 2,            // malformed experiment configuration
    numerical = 3,         // solver failure, non-convergence, radicand <= 0
    io = 4,                // file read/write failure
    size = 5,              // grid too small / diagnostic size cap exceeded
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace pfrss
