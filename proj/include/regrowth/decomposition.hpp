#pragma once

#include <map>
#include <string>
#include <vector>

#include "regrowth/forecast.hpp"
#include "regrowth/growth_model.hpp"

namespace regrowth {

// Arithmetic percent change of the BF funding intensity feeding growth year t
// (the change between the t-2 and t-1 intensities), split by program. Both
// parts are measured against the same prior-year total intensity, so
// traditional + disruptive = total.
struct FundingChange {
    double total_pct = 0.0;
    double traditional_pct = 0.0;
    double disruptive_pct = 0.0;
};

using FundingChangeMap = std::map<std::string, std::map<int, FundingChange>>;

// Per-program intensity changes for every forecast year, derived from the
// panel (in-sample) and the forecast's extended employment/funds paths.
FundingChangeMap compute_funding_changes(const ForecastResult& forecast,
                                         const PanelDataset& ds);

// Growth contribution (percentage points) of the funding change under the
// returns discount r on the disruptive program.
double direct_contribution(double beta_bf, const FundingChange& fc, double r);

// Contribution through the three R&I channels. The discount applies to the
// disruptive part only when discount_indirect is set; the default keeps the
// indirect channel undiscounted.
double indirect_contribution(const GrowthEstimate& growth, const AuxEstimate& aux_rd_exp_bus,
                             const AuxEstimate& aux_rd_exp_pub, const AuxEstimate& aux_patent,
                             const FundingChange& fc, double r, bool discount_indirect = false);

struct DecompositionRow {
    std::string region;
    int year = 0;
    double total = 0.0; // predicted growth, percent
    double common_factor = 0.0;
    double ec_term = 0.0;
    double direct_bf = 0.0;
    double indirect_bf = 0.0;
    double other = 0.0;
    double fixed_effect = 0.0;

    double bf_total() const { return direct_bf + indirect_bf; }
    double sum_components() const {
        return common_factor + ec_term + direct_bf + indirect_bf + other + fixed_effect;
    }
};

struct GrowthDecomposition {
    std::vector<DecompositionRow> rows;
    double returns_discount_r = 1.0;
    bool discount_indirect = false;

    const DecompositionRow& at(const std::string& region, int year) const;
    std::vector<double> bf_contributions(int year) const; // per region, ordered
};

GrowthDecomposition decompose(const ForecastResult& forecast, const GrowthEstimate& growth,
                              const LongRunEstimate& longrun, const AuxEstimate& aux_rd_exp_bus,
                              const AuxEstimate& aux_rd_exp_pub, const AuxEstimate& aux_patent,
                              const FundingChangeMap& changes, double r,
                              bool discount_indirect = false);

struct FundingShareReport {
    std::vector<std::string> regions;
    std::vector<double> share_insample_pct;   // BF funds over regional GDP, in-sample mean
    std::vector<double> share_2020_pct;       // last funding year over last observed GDP
    std::vector<std::string> contribution_labels;
    std::vector<std::vector<double>> contributions; // [label][region]

    struct SummaryRowOut {
        std::string statistic;
        std::vector<double> values;
    };
    std::vector<SummaryRowOut> summary() const; // mean, sd, min, max rows
};

// Funding volumes relative to regional GDP alongside predicted contributions.
// gdp is per-employee, so regional GDP = gdp * empl; funds_scale converts the
// funds unit into the gdp*empl unit (1.0 when the panel units already agree).
FundingShareReport funding_share_report(
    const PanelDataset& ds, const ForecastScenario& scenario,
    const std::vector<std::pair<std::string, std::map<std::string, double>>>& contributions,
    double funds_scale = 1.0);

void write_decomposition_csv(const std::string& path, const GrowthDecomposition& d);
void write_funding_share_csv(const std::string& path, const FundingShareReport& report);

} // namespace regrowth
