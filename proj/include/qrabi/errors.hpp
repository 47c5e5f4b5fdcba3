// errors.hpp: exception taxonomy shared by all qrabi modules.
#pragma once

#include <stdexcept>
#include <string>

namespace qrabi {

// Inputs outside the mathematical domain of an operation (poles, invalid
// ranges, off-curve parameters). CLI maps these to exit code 3.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// A recurrence pole A_n = 0 was hit without exact truncation.
struct PoleError : DomainError {
    explicit PoleError(const std::string& msg) : DomainError(msg) {}
};

// E is too close to -g^2, where the branch ratio Delta/(E+g^2) blows up.
struct RatioPole : DomainError {
    explicit RatioPole(const std::string& msg) : DomainError(msg) {}
};

// Supplied parameters do not satisfy the series termination condition.
struct InconsistentTruncation : DomainError {
    explicit InconsistentTruncation(const std::string& msg) : DomainError(msg) {}
};

// (delta, g) not on the requested exceptional-point curve.
struct OffCurve : DomainError {
    explicit OffCurve(const std::string& msg) : DomainError(msg) {}
};

// A root bracket lost its sign change during refinement.
struct LostBracket : DomainError {
    explicit LostBracket(const std::string& msg) : DomainError(msg) {}
};

// Iterative procedures that failed to reach tolerance. CLI exit code 4.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Fock-amplitude tail at n_max still above the requested tolerance.
struct TruncationError : ConvergenceError {
    explicit TruncationError(const std::string& msg) : ConvergenceError(msg) {}
};

// Fewer oracle eigenvalues converged than required.
struct NonConvergence : ConvergenceError {
    explicit NonConvergence(const std::string& msg) : ConvergenceError(msg) {}
};

} // namespace qrabi
