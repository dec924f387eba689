// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace seco {

enum class ErrorKind {
    Dimension,
    EmptyInput,
    InvalidArgument,
    NonFinite,
    StructuralViolation,
    Format,
    Overflow,
    Io,
    Internal,
};

const char* to_string(ErrorKind kind) noexcept;

// All library failures are reported through this one exception type; the
// kind lets callers (notably the CLI) map failures onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace seco
