#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "regrowth/estimators.hpp"
#include "regrowth/panel.hpp"

namespace regrowth {

// Fitted long-run level equation: log gdp on logged production-factor levels
// with region effects. The residual is the error-correction series.
struct LongRunEstimate {
    std::vector<std::string> regressors; // raw variable names entering in logs
    Eigen::VectorXd delta;
    Eigen::MatrixXd covariance;
    Eigen::VectorXd mu; // per region
    Series ec;          // N x T, missing where any input is missing
    double r_squared = 0.0;
    int n_regions = 0;
    int first_year = 0;
    // Residuals of a pooled (common-delta) fit behave like unprojected
    // random walks under the no-cointegration null, so they standardize
    // with the zero-regressor moments; member-specific first stages use
    // the rows matching their own regressor count.
    bool pooled_first_stage = true;

    int num_regressors() const { return static_cast<int>(regressors.size()); }
    int standardization_regressors() const {
        return pooled_first_stage ? 0 : num_regressors();
    }
};

struct CointegrationTestResult {
    double raw_statistic = 0.0;
    double standardized_statistic = 0.0;
    double adjustment_mean = 0.0;
    double adjustment_variance = 0.0;
    int bandwidth = 0;
    bool decision_at_5pct = false; // true = reject "no cointegration"
    std::string variant;           // "panel_pp" or "group_pp"
};

struct BandwidthRule {
    enum class Kind { automatic, fixed };
    Kind kind = Kind::automatic;
    int value = 0;

    static BandwidthRule fixed(int b) { return {Kind::fixed, b}; }
    static BandwidthRule automatic() { return {}; }
};

// Standardization moments for the pooled residual unit-root statistics,
// keyed by statistic variant, number of long-run regressors and member
// window length (finite-sample rows on a T grid; the largest tabulated T
// doubles as the asymptotic row). Shipped as a data file so the constants
// stay auditable and replaceable.
class PedroniMomentTable {
public:
    struct Entry {
        double mean = 0.0;
        double variance = 0.0;
    };

    static PedroniMomentTable load(const std::string& path);
    static std::string default_path();

    // Interpolates linearly in 1/T between tabulated window lengths; exact
    // matches are used directly. Throws MissingAdjustmentConstants when the
    // variant/regressor combination is absent.
    Entry lookup(const std::string& variant, int num_regressors, int window_length) const;

private:
    std::map<std::pair<std::string, int>, std::map<int, Entry>> entries_;
};

// One member's building blocks of the pooled statistic: the bias-corrected
// numerator sum, the squared-level sum, and the Bartlett long-run variance
// of the AR(1) residuals. Exposed so the moment generator simulates the
// exact construction the test applies.
struct PedroniMemberStats {
    double num = 0.0; // sum e_{t-1} (e_t - e_{t-1}) - (T-1) * lambda
    double den = 0.0; // sum e_{t-1}^2
    double lrv = 0.0;
    int bandwidth = 0;
};

PedroniMemberStats pedroni_member_stats(const Eigen::VectorXd& e_raw,
                                        const BandwidthRule& rule);

// Within-OLS of log(gdp_var) on logs of `regressors`; builds the
// error-correction series ec = log gdp - delta'z - mu_i.
LongRunEstimate fit_longrun(const PanelDataset& ds,
                            const std::vector<std::string>& regressors,
                            const std::string& gdp_var = "gdp");

// Pooled residual-based Phillips-Perron-type cointegration test with
// Bartlett-kernel long-run variance correction, standardized with the
// tabulated moments. group_mean = false gives the pooled panel statistic.
CointegrationTestResult pedroni_pp_test(const LongRunEstimate& lr,
                                        const BandwidthRule& rule,
                                        const PedroniMomentTable& table,
                                        bool group_mean = false);

void write_cointegration_report(const std::string& path,
                                const CointegrationTestResult& result);

} // namespace regrowth
