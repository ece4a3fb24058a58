#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "regrowth/forecast.hpp"
#include "regrowth/panel.hpp"

namespace regrowth {

// True-parameter configuration of the synthetic world. The finland_like
// preset targets the observed panel's moments and the published coefficient
// magnitudes; minimal is a small fast configuration for unit tests.
struct DGPConfig {
    std::string preset_name = "custom";
    int n_regions = 18;
    int first_year = 1995;
    int n_years = 24;
    std::uint64_t seed = 1;

    // growth equation
    double beta_dgfcf = -0.009;
    double beta_dunemp = 0.054;
    double beta_rd_exp_bus = -0.004;
    double beta_rd_exp_pub = 0.009;
    double beta_patent = -0.003;
    double beta_bf = 0.010;
    double phi = -0.15;
    int ec_lag = 3;
    // optional structural break in the funding coefficient (stability checks)
    std::optional<int> bf_coef_break_year;
    double beta_bf_late = 0.02;
    double lambda_mean = 0.885;
    double lambda_spread = 0.335; // half-width of the loading range
    bool lambda_random = false;   // uniform draw per replication instead of a fixed ramp
    double eps_sd = 0.02;         // growth shock (equation noise, log units)
    double eps_ar1 = 0.0;         // AR(1) coefficient of the growth shock
    bool eps_het = false;         // per-region shock scale ramp (for FGLS checks)

    // long-run equation (delta over the z catalog)
    double delta_gfcf = 0.041;
    double delta_highedu = 0.716;
    double delta_unemp = -0.182;
    double delta_patstock = 0.017;
    double delta_rd_per_bus = 0.067;
    double delta_rd_per_pub = 0.006;
    double gap0_sd = 0.03; // initial deviation from the long-run path

    // auxiliary equations: AR lags {3,4} plus dgfcf, dunemp, log bf at lag 3
    struct AuxTruth {
        double ar3 = 0.2;
        double ar4 = 0.2;
        double c_gfcf = 0.0;
        double c_unemp = 0.0;
        double c_bf = 0.05;
        double noise_sd = 0.1;
        double target_log_mean = 0.0;
        double region_sd = 0.5;
    };
    AuxTruth aux_rd_exp_bus;
    AuxTruth aux_rd_exp_pub;
    AuxTruth aux_patent;

    // exogenous driver volatilities (must stay positive; they carry the
    // identifying variation)
    double z_shock_sd = 0.05;
    double bf_shock_sd = 0.30;
    double national_cycle_sd = 0.012;
    double national_cycle_mean = 0.025;
    double national_cycle_ar1 = 0.55;

    // 2020 funding profile: per-region total intensity change (%) and the
    // disruptive-program share of 2020 funds; recycled when n_regions > size
    std::vector<double> funding_change_2020_pct;
    std::vector<double> disruptive_share_2020;

    void validate() const; // throws UnstableConfig

    static DGPConfig preset(const std::string& name, std::uint64_t seed);
    static DGPConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

// Everything the pipeline would read from disk, generated in memory.
struct SyntheticWorld {
    PanelDataset panel;
    NationalSeries national_gdp_growth_pct; // percent values
    NationalSeries national_unemp;          // rate level
    NationalSeries national_empl;           // level
    std::map<std::string, std::map<int, double>> bf_funds_total;      // horizon years
    std::map<std::string, std::map<int, double>> bf_funds_disruptive;
    DGPConfig config;

    // true parameters, keyed by the design column names they map to
    std::map<std::string, double> true_beta;
    std::vector<double> true_lambda;
    double true_phi = 0.0;
    std::map<std::string, double> true_delta;

    ForecastScenario make_scenario(const std::string& name, double r, double c,
                                   double national_2021_pct = 1.8) const;
};

SyntheticWorld generate_panel(const DGPConfig& cfg);

} // namespace regrowth
