// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tfqkd {

enum class ErrorCode {
    InvalidArgument = 1,
    Domain,
    GridTooSmall,
    GridMismatch,
    Numerical,
    EmptyBasis,
    Config,
    Io,
};

/// Single exception type for the library; the code is what the C API reports.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what)
{
    if (!ok) fail(code, what);
}

}  // namespace tfqkd
