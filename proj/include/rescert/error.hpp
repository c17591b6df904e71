#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace rescert {

enum class ErrorKind {
    Domain,
    ShapeMismatch,
    NonFinite,
    CertificationFailed,
    FixedPointFailed,
    DecayViolation,
    AliasingTooLarge,
    EpsilonTooLarge,
    SchurNonconvergence,
    GateFailed,
    Delta0TooSmall,
    OrthogonalityTooWeak,
    ThetaNonpositive,
    BudgetExceeded,
    UncertifiableArc,
    TargetExceeded,
    DisksOverlap,
    DiagonalOutsideAllDisks,
    BoundExceedsBudget,
    AmbiguousMultiplicity,
    DenominatorNonpositive,
    NoAdmissibleTerm,
    BudgetUnusable,
    Config,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; the kind drives CLI exit codes and
// failed-certificate diagnostics.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

// The message is only materialized on failure, so literals cost nothing here.
template <class Message>
inline void require(bool ok, ErrorKind kind, Message&& what) {
    if (!ok) [[unlikely]]
        fail(kind, std::string(std::forward<Message>(what)));
}

}  // namespace rescert
