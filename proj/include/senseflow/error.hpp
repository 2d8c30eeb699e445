#pragma once

#include <stdexcept>
#include <string>

namespace senseflow {

/// Base class for all senseflow errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed external input (capture line, packet bytes, scenario JSON, ...).
/// The message names the first offending field or line.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A domain invariant would be violated (rejected at construction time).
class InvariantError : public Error {
public:
    using Error::Error;
};

/// An event stream broke its time-ordering contract.
class OrderingError : public Error {
public:
    using Error::Error;
};

/// An event reached a component that is not responsible for its gateway.
class RoutingError : public Error {
public:
    using Error::Error;
};

/// Same store key, different payload.
class ConflictError : public Error {
public:
    using Error::Error;
};

/// Detection error is undefined for a zero ground-truth count.
class ZeroTruthError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Pipeline stage failure; carries the stage name for diagnostics.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& message)
        : Error(stage + " stage: " + message), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

} // namespace senseflow
