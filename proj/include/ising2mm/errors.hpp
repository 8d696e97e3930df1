#pragma once

#include <stdexcept>
#include <string>

namespace ising2mm {

// Input outside the admissible parameter set of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Evaluation at (or numerically indistinguishable from) a pole of a rational function.
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Continuation in t ran into the fold of the sigma branch before reaching the target.
struct BranchPointReached : std::runtime_error {
    double t_critical_estimate;
    BranchPointReached(const std::string& what, double tcr)
        : std::runtime_error(what), t_critical_estimate(tcr) {}
};

struct ContinuationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularReversion : std::domain_error {
    using std::domain_error::domain_error;
};

struct CapExceeded : std::domain_error {
    using std::domain_error::domain_error;
};

struct BranchPointProximity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AmbiguousSheet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GuardBand : std::domain_error {
    using std::domain_error::domain_error;
};

// Argument outside the range on which a special function is validated.
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct CertificateFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ising2mm
