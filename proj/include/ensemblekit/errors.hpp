#pragma once

#include <stdexcept>
#include <string>

namespace ensemblekit {

/// Invalid configuration or precondition on user-supplied parameters (CLI exit 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or incompatible input data (CLI exit 3).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant was violated (CLI exit 4).
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace ensemblekit
