#pragma once

#include <stdexcept>
#include <string>

namespace limefold {

// Malformed input data: CSV cells, schema files, instance files, model files.
// The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Bad invocation: unknown names, missing flags, inconsistent arguments.
// The CLI maps this to exit code 1.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace limefold
