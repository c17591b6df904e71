#include "rescert/error.hpp"

namespace rescert {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::CertificationFailed: return "CertificationFailed";
        case ErrorKind::FixedPointFailed: return "FixedPointFailed";
        case ErrorKind::DecayViolation: return "DecayViolation";
        case ErrorKind::AliasingTooLarge: return "AliasingTooLarge";
        case ErrorKind::EpsilonTooLarge: return "EpsilonTooLarge";
        case ErrorKind::SchurNonconvergence: return "SchurNonconvergence";
        case ErrorKind::GateFailed: return "GateFailed";
        case ErrorKind::Delta0TooSmall: return "Delta0TooSmall";
        case ErrorKind::OrthogonalityTooWeak: return "OrthogonalityTooWeak";
        case ErrorKind::ThetaNonpositive: return "ThetaNonpositive";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::UncertifiableArc: return "UncertifiableArc";
        case ErrorKind::TargetExceeded: return "TargetExceeded";
        case ErrorKind::DisksOverlap: return "DisksOverlap";
        case ErrorKind::DiagonalOutsideAllDisks: return "DiagonalOutsideAllDisks";
        case ErrorKind::BoundExceedsBudget: return "BoundExceedsBudget";
        case ErrorKind::AmbiguousMultiplicity: return "AmbiguousMultiplicity";
        case ErrorKind::DenominatorNonpositive: return "DenominatorNonpositive";
        case ErrorKind::NoAdmissibleTerm: return "NoAdmissibleTerm";
        case ErrorKind::BudgetUnusable: return "BudgetUnusable";
        case ErrorKind::Config: return "ConfigError";
        case ErrorKind::Io: return "IoError";
    }
    return "UnknownError";
}

}  // namespace rescert
