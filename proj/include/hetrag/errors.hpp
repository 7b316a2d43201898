#pragma once

#include <stdexcept>
#include <string>

namespace hetrag {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: documents, tables, QA records, configuration values.
class ValidationError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Raised by the formula calculator (syntax error, division by zero).
class CalcError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Model-client failure. Retryable errors are retried by the caller.
class ClientError : public Error {
public:
    ClientError(const std::string& what, bool retryable) : Error(what), retryable_(retryable) {}
    [[nodiscard]] bool retryable() const noexcept { return retryable_; }

private:
    bool retryable_;
};

/// The token budget cannot hold even the single most similar chunk.
class EmptySelectionError : public Error {
public:
    using Error::Error;
};

/// A metric was requested over an empty record set.
class MetricError : public Error {
public:
    using Error::Error;
};

}  // namespace hetrag
