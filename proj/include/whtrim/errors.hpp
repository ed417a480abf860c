#ifndef WHTRIM_ERRORS_HPP
#define WHTRIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace whtrim {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller-supplied argument violates a documented precondition.
struct InvalidArgument : Error {
    using Error::Error;
};

// A requested enumeration or search depth exceeds the supported cap.
struct LimitExceeded : Error {
    using Error::Error;
};

// Building the automaton would create more states than the budget allows.
// `required` carries the exact state count that was requested.
struct StateBudgetExceeded : Error {
    explicit StateBudgetExceeded(const std::string& what, unsigned long long required_states)
        : Error(what), required(required_states) {}
    unsigned long long required;
};

// A dense object (Kronecker product, lifted system) would exceed its size cap.
struct SizeBudgetExceeded : Error {
    using Error::Error;
};

// An iterative numeric routine hit its iteration cap before reaching tolerance.
struct NoConvergence : Error {
    using Error::Error;
};

// Two objects that must share parameters (m, k) do not.
struct ParameterMismatch : Error {
    using Error::Error;
};

}  // namespace whtrim

#endif
