#pragma once

#include <stdexcept>
#include <string>

namespace ppq {

/// Bad input data (unreadable files, malformed rows, mismatched summaries).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration or command usage.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An internal invariant was violated; indicates a bug upstream.
struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace ppq
