#pragma once

#include <stdexcept>
#include <string>

namespace guci {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A read ran past the last valid bit of a stream.
class TruncatedInput : public Error {
public:
    explicit TruncatedInput(const std::string& what) : Error("truncated input: " + what) {}
};

/// Structurally invalid encoded data (bad header, overshooting run, set padding bits).
class CorruptStream : public Error {
public:
    explicit CorruptStream(const std::string& what) : Error("corrupt stream: " + what) {}
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Probabilities that are not a decreasing distribution, or a distribution an analysis cannot use.
class InvalidDistribution : public Error {
public:
    explicit InvalidDistribution(const std::string& what) : Error("invalid distribution: " + what) {}
};

/// A certified series could not reach its tail tolerance within the term budget.
class SeriesBudgetExceeded : public Error {
public:
    using Error::Error;
};

/// The rate-gap threshold function has no sign change in (0, 1).
class NoThreshold : public Error {
public:
    using Error::Error;
};

}  // namespace guci
