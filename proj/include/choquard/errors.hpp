// SPDX-License-Identifier: Apache-2.0
//
// Error types shared across the library. ValidationError marks rejected
// inputs (bad parameter ranges, malformed files); NumericsError marks
// failures of the numerics themselves (non-integrable tails, divergence,
// non-convergence). The CLI maps them to exit codes 1 and 2.
#pragma once

#include <stdexcept>
#include <string>

namespace choquard {

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace choquard
