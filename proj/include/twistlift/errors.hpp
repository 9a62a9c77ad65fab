#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace twistlift {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndexOutOfRange : DomainError {
    using DomainError::DomainError;
};

struct NotTransitive : DomainError {
    std::vector<std::vector<int>> orbits;
    explicit NotTransitive(std::vector<std::vector<int>> o)
        : DomainError("monodromy group is not transitive"), orbits(std::move(o)) {}
};

struct StrandMismatch : DomainError {
    using DomainError::DomainError;
};

struct GeneratorOutOfRange : DomainError {
    using DomainError::DomainError;
};

struct NotGeneric : DomainError {
    using DomainError::DomainError;
};

struct LabelClosureFailure : DomainError {
    using DomainError::DomainError;
};

struct SameLabelCrossing : DomainError {
    using DomainError::DomainError;
};

struct PreconditionFailed : DomainError {
    std::string kind;
    PreconditionFailed(std::string k, const std::string &reason)
        : DomainError(k + ": " + reason), kind(std::move(k)) {}
};

struct HomologicallyTrivial : DomainError {
    HomologicallyTrivial() : DomainError("curve is homologically trivial; no half-twist representation exists") {}
};

struct ShrinkForbidden : DomainError {
    using DomainError::DomainError;
};

struct TooLarge : DomainError {
    using DomainError::DomainError;
};

struct NotNormalized : DomainError {
    using DomainError::DomainError;
};

// Parity or bookkeeping violations that indicate a bug, never bad input.
struct InternalInvariant : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace twistlift
