#pragma once

#include <stdexcept>
#include <string>

namespace perispec {

// Malformed or unsupported input (CLI exit code 2).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// det of a matrix family vanishes identically (CLI exit code 3).
struct SingularPencilError : std::runtime_error {
    explicit SingularPencilError(const std::string& msg) : std::runtime_error(msg) {}
};

// Weight circle passes through the spectral set (CLI exit code 4).
struct NonFredholmError : std::runtime_error {
    explicit NonFredholmError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation too close to a spectral point, contour misplacement, guard
// violations, non-generic paths, failed stabilization.
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace perispec
