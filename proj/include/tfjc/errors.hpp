// errors.hpp: exception types shared by the library and the CLI.

#pragma once

#include <stdexcept>
#include <string>

namespace tfjc {

/// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Amplitude reached the edge of a truncated Fock basis.
class LeakageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The sampled signal shows no revival inside the search window.
class NoRevivalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tfjc
