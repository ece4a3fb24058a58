#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regrowth/estimators.hpp"
#include "regrowth/longrun.hpp"
#include "regrowth/panel.hpp"

namespace regrowth {

// One short-run regressor of the growth equation: a variable, how it enters
// (log-difference or log level), and its lag. All regressors are
// predetermined, so lag >= 1.
struct ShortRunVar {
    enum class Form { diff_log, log_level };
    std::string var;
    Form form = Form::log_level;
    int lag = 1;

    std::string column_name() const;
};

enum class FactorMode { none, homogeneous, heterogeneous };

struct GrowthModelSpec {
    std::vector<ShortRunVar> short_run;
    FactorMode factor_mode = FactorMode::heterogeneous;
    bool include_ec = true;
    int ec_lag = 3;
    std::optional<std::pair<int, int>> sample_window; // response years, inclusive
    std::string estimator = "fgls_ar1_het";           // or "ols_fe"
    bool robust = true;                               // ols_fe covariance choice
    std::string response_var = "gdp";

    // Default regressor catalog; the column (1)..(6) layouts differ only in
    // factor mode, ec inclusion, estimator and window.
    static std::vector<ShortRunVar> default_short_run();
    static GrowthModelSpec table3_column(int column);
};

struct AuxModelSpec {
    std::string response;             // rd_exp_bus, rd_exp_pub or patent
    std::vector<int> ar_lags = {3, 4};
    std::vector<ShortRunVar> determinants; // default dgfcf, dunemp, log bf at lag 3
    std::optional<std::pair<int, int>> sample_window;
    std::string estimator = "fgls_ar1_het";

    static AuxModelSpec standard(const std::string& response);
};

struct PeriodCoef {
    int start_year = 0;
    int end_year = 0;
    double coef = 0.0;
    double lo90 = 0.0;
    double hi90 = 0.0;
    bool is_baseline = false;
};

struct GrowthEstimate {
    FitResult fit;
    GrowthModelSpec spec;
    std::optional<double> relative_rmse;
    std::vector<std::string> factor_coef_names; // lambda columns (per region when heterogeneous)
    std::vector<PeriodCoef> bf_period_coefficients;
    std::optional<WaldTestResult> bf_stability_wald; // joint test: period deviations = 0
};

struct AuxEstimate {
    FitResult fit;
    AuxModelSpec spec;
    double ar_joint = 0.0;    // sum of the AR lag coefficients
    double ar_joint_se = 0.0; // delta-method standard error of the sum
};

// Assembles the growth-equation design: response dlog(gdp), lagged short-run
// columns, the national factor column(s) and the lagged error-correction
// term. The usable window emerges from the mask; rows outside sample_window
// or with any missing input are masked out.
DesignMatrix build_growth_design(const PanelDataset& ds, const LongRunEstimate* longrun,
                                 const NationalSeries& national_growth_pct,
                                 const GrowthModelSpec& spec);

GrowthEstimate fit_growth(const DesignMatrix& dm, const GrowthModelSpec& spec);

// Convenience: build + fit in one step.
GrowthEstimate fit_growth(const PanelDataset& ds, const LongRunEstimate* longrun,
                          const NationalSeries& national_growth_pct,
                          const GrowthModelSpec& spec);

// BF coefficient interacted with consecutive multi-year period dummies;
// years before the first breakpoint form the baseline period. Reports the
// per-period total coefficient with a 90% confidence band and a joint Wald
// test of all period deviations being zero.
GrowthEstimate fit_growth_time_varying_bf(const PanelDataset& ds,
                                          const LongRunEstimate* longrun,
                                          const NationalSeries& national_growth_pct,
                                          const GrowthModelSpec& spec,
                                          const std::vector<int>& period_start_years,
                                          int period_length = 3);

AuxEstimate fit_aux(const PanelDataset& ds, const AuxModelSpec& spec);

// Wald test that each named coefficient is zero (used for stability checks).
WaldTestResult wald_zero(const FitResult& fit, const std::vector<std::string>& names);

} // namespace regrowth
