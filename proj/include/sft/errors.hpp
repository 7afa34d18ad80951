#ifndef SFT_ERRORS_HPP
#define SFT_ERRORS_HPP

// Shared error types for operations that can exhaust a configured resource
// bound, receive inputs of the wrong type, or fail a documented precondition.

#include <stdexcept>

namespace sft {

// A configured bound (iteration count, plot count, node budget) was exceeded
// before the answer was determined.  Distinct from a negative answer.
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The input mixes data of incompatible kinds (e.g. square sizes outside the
// declared type).
struct TypeInconsistent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition of the operation does not hold for the input.
struct PreconditionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A constructive extension procedure has no completion for the given seed
// and region.
struct CannotExtend : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sft

#endif  // SFT_ERRORS_HPP
