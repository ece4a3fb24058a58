#pragma once

#include <stdexcept>
#include <string>

namespace regrowth {

enum class ErrorCode {
    // panel / ingestion
    MissingColumn,
    UnbalancedPanel,
    NonNumericCell,
    DuplicateRow,
    NonPositiveForLog,
    UnknownVariable,
    // estimators
    RankDeficient,
    TooFewObservations,
    NoConvergence,
    SingularRestrictionCovariance,
    TestInapplicable,
    // cointegration
    InsufficientTimeLength,
    MissingAdjustmentConstants,
    // growth model
    WindowTooShort,
    EmptyPeriodBin,
    // forecasting
    MissingNationalValue,
    RuleVariableMismatch,
    MissingRegressor,
    // decomposition
    MissingChannelCoefficient,
    AuditTrailIncomplete,
    // evaluation
    WindowMismatch,
    UnstableConfig,
    // cli
    MissingEstimationArtifacts,
    ConfigError,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace regrowth
