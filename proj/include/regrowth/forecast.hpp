#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regrowth/growth_model.hpp"
#include "regrowth/longrun.hpp"
#include "regrowth/panel.hpp"

namespace regrowth {

enum class ExtrapolationRule { ar4, ar4_plus_national, aux_equation, bf_intensity };

struct ForecastScenario {
    std::string name = "baseline";
    std::vector<int> horizon_years;           // contiguous, first = panel last year + 1
    std::map<int, double> national_growth_pct; // baseline value per horizon year
    double rebound_discount_c = 1.0;          // scales the final horizon year's national growth
    double returns_discount_r = 1.0;          // scales the disruptive-program growth return
    // funds by region and year (total and the disruptive-program part)
    std::map<std::string, std::map<int, double>> bf_funds_total;
    std::map<std::string, std::map<int, double>> bf_funds_disruptive;

    void validate() const; // throws ConfigError on violated invariants
    double effective_national_pct(int year) const;
};

// A panel variable's log path: observed in-sample values plus model-based
// predictions for the extrapolation years, with a per-year source tag.
struct ExtendedLogSeries {
    std::string var;
    int first_year = 0;
    int n_observed = 0;
    Eigen::MatrixXd log_values; // N x (n_observed + n_extra)
    std::vector<std::string> extra_source; // per extrapolated year

    int n_total() const { return static_cast<int>(log_values.cols()); }
    int last_year() const { return first_year + n_total() - 1; }
    double log_at(int region, int year) const;
    std::string source_tag(int year) const; // "obs:<year>" or "pred:<year>:<rule>"
};

struct ExtrapolationContext {
    const PanelDataset* ds = nullptr;
    const NationalSeries* national = nullptr;      // ar4_plus_national
    bool national_unit_coefficient = false;        // offset variant instead of estimated
    const AuxEstimate* aux = nullptr;              // aux_equation
    const ForecastScenario* scenario = nullptr;    // bf_intensity funds
    const ExtendedLogSeries* empl = nullptr;       // bf_intensity denominator
};

// Extends one regressor's log path n_extra years past the panel under the
// configured rule. AR fits always use the full in-sample window with region
// effects; collinear lags are dropped by the pivoted rank check.
ExtendedLogSeries extrapolate_regressor(const ExtrapolationContext& ctx,
                                        const std::string& var, ExtrapolationRule rule,
                                        int n_extra);

struct ForecastCell {
    double growth_log = 0.0;                        // predicted dlog gdp
    std::map<std::string, double> regressors;       // audit: design values by column name
    std::map<std::string, std::string> sources;     // audit: provenance per column
};

struct YearBand {
    int year = 0;
    double mean_pct = 0.0;
    double lo_pct = 0.0; // mean - 2 sd
    double hi_pct = 0.0; // mean + 2 sd
};

struct ForecastResult {
    std::vector<std::string> regions;
    std::vector<int> years;
    std::vector<std::vector<ForecastCell>> cells; // [region][year]
    std::vector<YearBand> bands;
    Eigen::MatrixXd gdp_levels; // N x (1 + horizon), col 0 = last observed level
    ForecastScenario scenario;
    std::map<std::string, ExtendedLogSeries> extended; // regressor paths used

    double growth_pct(int region, int h) const { return 100.0 * cells[region][h].growth_log; }
    const ForecastCell& cell_at(const std::string& region, int year) const;
};

struct ForecastContext {
    const PanelDataset* ds = nullptr;
    const GrowthEstimate* growth = nullptr;
    const LongRunEstimate* longrun = nullptr;
    const NationalSeries* national_growth_pct = nullptr; // in-sample + observed horizon
    const NationalSeries* national_unemp = nullptr;
    const NationalSeries* national_empl = nullptr;
    const AuxEstimate* aux_rd_exp_bus = nullptr;
    const AuxEstimate* aux_rd_exp_pub = nullptr;
    const AuxEstimate* aux_patent = nullptr;
    bool national_unit_coefficient = false;
};

// h-step out-of-sample growth forecasts under the scenario. Every predicted
// value keeps its full regressor vector and provenance tags.
ForecastResult forecast_growth(const ForecastContext& ctx, const ForecastScenario& scenario);

// Throws if any audited regional input postdates the panel, except BF funds
// (observed through the funding data horizon) and national series.
void assert_no_future_leakage(const ForecastResult& result, int panel_last_year,
                              int funds_last_year);

// Recomputes one cell's prediction from its stored audit vector.
double prediction_from_audit(const ForecastCell& cell, const GrowthEstimate& growth,
                             int region_index, const std::vector<std::string>& regions);

struct PredictionPath {
    std::vector<int> years;
    std::vector<double> observed_mean_pct;
    std::vector<double> predicted_mean_pct;
    // per-region paths aligned with years; NaN where the row was not fitted
    Eigen::MatrixXd observed_pct;
    Eigen::MatrixXd predicted_pct;
    std::vector<std::string> regions;
};

// Figure-style in-sample fitted vs observed growth paths (means and
// per-region series) over the estimation window.
PredictionPath in_sample_prediction_path(const GrowthEstimate& estimate,
                                         const PanelDataset& ds);

void write_forecast_csv(const std::string& path, const ForecastResult& result);
void write_band_csv(const std::string& path, const ForecastResult& result,
                    const PredictionPath* in_sample);
void write_prediction_path_csv(const std::string& path, const PredictionPath& path_data);

} // namespace regrowth
