#pragma once

#include <stdexcept>
#include <string>

namespace rispart {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad count, mismatched lengths, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed: non-PSD correlation, quadrature non-convergence.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A configuration file or override could not be interpreted.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace rispart
