#pragma once

#include <stdexcept>
#include <string>

namespace crtgemm {

// Invalid configuration (modulus count out of range, bad block size, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid runtime input (non-finite values, dimension mismatch, ...).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failure, carries the offending path in the message.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file; carries a 1-based line number.
struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& msg, int line_no) : std::runtime_error(msg), line(line_no) {}
};

}  // namespace crtgemm
