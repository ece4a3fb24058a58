#include "regrowth/errors.hpp"

namespace regrowth {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::UnbalancedPanel: return "UnbalancedPanel";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::DuplicateRow: return "DuplicateRow";
        case ErrorCode::NonPositiveForLog: return "NonPositiveForLog";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::TooFewObservations: return "TooFewObservations";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SingularRestrictionCovariance: return "SingularRestrictionCovariance";
        case ErrorCode::TestInapplicable: return "TestInapplicable";
        case ErrorCode::InsufficientTimeLength: return "InsufficientTimeLength";
        case ErrorCode::MissingAdjustmentConstants: return "MissingAdjustmentConstants";
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::EmptyPeriodBin: return "EmptyPeriodBin";
        case ErrorCode::MissingNationalValue: return "MissingNationalValue";
        case ErrorCode::RuleVariableMismatch: return "RuleVariableMismatch";
        case ErrorCode::MissingRegressor: return "MissingRegressor";
        case ErrorCode::MissingChannelCoefficient: return "MissingChannelCoefficient";
        case ErrorCode::AuditTrailIncomplete: return "AuditTrailIncomplete";
        case ErrorCode::WindowMismatch: return "WindowMismatch";
        case ErrorCode::UnstableConfig: return "UnstableConfig";
        case ErrorCode::MissingEstimationArtifacts: return "MissingEstimationArtifacts";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace regrowth
