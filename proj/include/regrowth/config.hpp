#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace regrowth {

struct ScenarioConfig {
    std::string name;
    double returns_discount_r = 1.0;
    double rebound_discount_c = 1.0;
    double national_final_year_pct = 1.8; // assumption for the last horizon year
};

// Batch run configuration, loaded from a versioned JSON file. Paths are
// resolved relative to the config file's directory.
struct RunConfig {
    int schema_version = 1;

    // data
    std::string panel_csv;
    std::string national_gdp_growth_csv;
    std::string national_unemp_csv;
    std::string national_empl_csv;
    std::string bf_program_csv;
    std::string pedroni_table_csv;

    // long-run equation; empty list disables the error-correction columns
    std::vector<std::string> longrun_regressors;

    // growth equation
    std::vector<int> table3_columns = {1, 2, 3, 4, 5, 6};
    int active_column = 5;
    std::vector<int> stability_breakpoints = {2004, 2007, 2010, 2013, 2016};

    // auxiliary equations
    std::vector<int> aux_ar_lags = {3, 4};
    int aux_determinant_lag = 3;
    std::string aux_estimator = "fgls_ar1_het";

    // scenarios
    std::vector<ScenarioConfig> scenarios;
    std::vector<double> r_grid;
    std::vector<int> horizon_years;

    // simulation
    std::string dgp_preset = "finland_like";
    std::string dgp_config_path;
    int mc_replications = 0;

    std::string output_dir = "out";
    std::uint64_t seed = 42;
    int threads = 1;
    bool emit_charts = false;

    static RunConfig from_file(const std::string& path);
    void validate() const; // file existence and invariant checks

    const ScenarioConfig& scenario(const std::string& name) const;
};

// Per-region funding volumes read from the program-split CSV
// (header region,year,funds_total,funds_disruptive).
struct BfProgramData {
    std::map<std::string, std::map<int, double>> funds_total;
    std::map<std::string, std::map<int, double>> funds_disruptive;
    int last_year = 0;
};

BfProgramData load_bf_program_csv(const std::string& path);
void write_bf_program_csv(const std::string& path, const BfProgramData& data);

} // namespace regrowth
