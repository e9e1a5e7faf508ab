#ifndef FRACTAL_FRAMES_ERRORS_HPP
#define FRACTAL_FRAMES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fractal_frames {

/// Raised when an input violates a documented precondition (non-expanding
/// matrix, repeated residues, malformed tower, ...). The CLI maps it to exit 2.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a numerical self-check fails; indicates a kernel bug rather
/// than bad input.
class NumericalError : public std::logic_error {
public:
    explicit NumericalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace fractal_frames

#endif  // FRACTAL_FRAMES_ERRORS_HPP
