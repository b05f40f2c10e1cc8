#pragma once

#include <stdexcept>
#include <string>

namespace fluctana {

// Error categories; values double as CLI exit codes and C API status codes.
enum class ErrorCode : int {
    internal = 1,
    validation = 2,  // unusable arguments or configuration
    data = 3,        // unreadable or malformed input
    degenerate = 4,  // numerically degenerate input (zero sigma, all-zero fluctuations, ...)
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(ErrorCode::validation, msg) {}
};

struct DataError : Error {
    explicit DataError(const std::string& msg) : Error(ErrorCode::data, msg) {}
};

struct DegenerateError : Error {
    explicit DegenerateError(const std::string& msg) : Error(ErrorCode::degenerate, msg) {}
};

}  // namespace fluctana
