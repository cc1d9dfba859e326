#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rowfall {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (SMS files and the like). Carries a 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::int64_t line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::int64_t line() const { return line_; }

private:
    std::int64_t line_;
};

// File could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Caller passed something out of contract (bad dimensions, bad config, ...).
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

// Operation not available in the requested arithmetic domain
// (e.g. division over plain integers).
class DomainError : public Error {
public:
    using Error::Error;
};

// Square input turned out rank-deficient where a full factorization was required.
class SingularError : public Error {
public:
    using Error::Error;
};

// Messaging contract broken: wrong destination, row delivered after End,
// out-of-order channel sequence. Always a bug, never an input problem.
class ProtocolError : public Error {
public:
    using Error::Error;
};

// The watchdog saw no progress for far too long.
class DeadlockError : public Error {
public:
    using Error::Error;
};

// Assembled output failed a structural self-check (e.g. a factor that should
// be unit lower triangular is not).
class IntegrityError : public Error {
public:
    using Error::Error;
};

} // namespace rowfall
