#include "regrowth/config.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "regrowth/csv.hpp"
#include "regrowth/errors.hpp"

namespace regrowth {

namespace {

std::string resolve(const std::filesystem::path& base, const std::string& p) {
    if (p.empty()) return p;
    std::filesystem::path path(p);
    if (path.is_absolute()) return p;
    return (base / path).lexically_normal().string();
}

} // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorCode::ConfigError, path + ": " + e.what());
    }
    RunConfig cfg;
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1) {
        fail(ErrorCode::ConfigError, "unsupported schema_version " +
                                         std::to_string(cfg.schema_version));
    }
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    if (j.contains("data")) {
        const auto& d = j.at("data");
        cfg.panel_csv = resolve(base, d.value("panel_csv", ""));
        if (d.contains("national")) {
            const auto& nat = d.at("national");
            cfg.national_gdp_growth_csv = resolve(base, nat.value("gdp_growth", ""));
            cfg.national_unemp_csv = resolve(base, nat.value("unemployment", ""));
            cfg.national_empl_csv = resolve(base, nat.value("employment", ""));
        }
        cfg.bf_program_csv = resolve(base, d.value("bf_program_csv", ""));
        cfg.pedroni_table_csv = resolve(base, d.value("pedroni_table_csv", ""));
    }
    if (cfg.pedroni_table_csv.empty()) {
        cfg.pedroni_table_csv = std::string(REGROWTH_DATA_DIR) + "/pedroni_adjustments.csv";
    }
    if (j.contains("longrun")) {
        cfg.longrun_regressors =
            j.at("longrun").value("regressors", std::vector<std::string>{});
    }
    if (j.contains("growth")) {
        const auto& gr = j.at("growth");
        cfg.table3_columns = gr.value("columns", cfg.table3_columns);
        cfg.active_column = gr.value("active_column", cfg.active_column);
        cfg.stability_breakpoints =
            gr.value("stability_breakpoints", cfg.stability_breakpoints);
    }
    if (j.contains("aux")) {
        const auto& ax = j.at("aux");
        cfg.aux_ar_lags = ax.value("ar_lags", cfg.aux_ar_lags);
        cfg.aux_determinant_lag = ax.value("determinant_lag", cfg.aux_determinant_lag);
        cfg.aux_estimator = ax.value("estimator", cfg.aux_estimator);
    }
    if (j.contains("scenarios")) {
        for (const auto& [name, sc] : j.at("scenarios").items()) {
            ScenarioConfig s;
            s.name = name;
            s.returns_discount_r = sc.value("returns_discount_r", 1.0);
            s.rebound_discount_c = sc.value("rebound_discount_c", 1.0);
            s.national_final_year_pct = sc.value("national_final_year_pct", 1.8);
            cfg.scenarios.push_back(s);
        }
    }
    cfg.r_grid = j.value("r_grid", cfg.r_grid);
    cfg.horizon_years = j.value("horizon_years", cfg.horizon_years);
    if (j.contains("simulate")) {
        const auto& sim = j.at("simulate");
        cfg.dgp_preset = sim.value("preset", cfg.dgp_preset);
        cfg.dgp_config_path = resolve(base, sim.value("config_path", ""));
        cfg.mc_replications = sim.value("replications", 0);
    }
    cfg.output_dir = resolve(base, j.value("output_dir", cfg.output_dir));
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.emit_charts = j.value("emit_charts", cfg.emit_charts);
    return cfg;
}

void RunConfig::validate() const {
    auto check_file = [](const std::string& p, const std::string& field) {
        if (p.empty()) fail(ErrorCode::ConfigError, "config field missing: " + field);
        if (!std::filesystem::exists(p)) {
            fail(ErrorCode::ConfigError, field + " does not exist: " + p);
        }
    };
    check_file(panel_csv, "data.panel_csv");
    check_file(national_gdp_growth_csv, "data.national.gdp_growth");
    check_file(national_unemp_csv, "data.national.unemployment");
    check_file(national_empl_csv, "data.national.employment");
    check_file(bf_program_csv, "data.bf_program_csv");
    check_file(pedroni_table_csv, "data.pedroni_table_csv");
    for (const auto& sc : scenarios) {
        if (!(sc.returns_discount_r > 0.0 && sc.returns_discount_r <= 1.0)) {
            fail(ErrorCode::ConfigError, "scenario " + sc.name + ": r outside (0,1]");
        }
        if (!(sc.rebound_discount_c > 0.0 && sc.rebound_discount_c <= 1.0)) {
            fail(ErrorCode::ConfigError, "scenario " + sc.name + ": c outside (0,1]");
        }
    }
    for (double r : r_grid) {
        if (!(r > 0.0 && r <= 1.0)) fail(ErrorCode::ConfigError, "r_grid value outside (0,1]");
    }
    if (mc_replications < 0) fail(ErrorCode::ConfigError, "negative replication count");
    bool found = false;
    for (int c : table3_columns) {
        if (c < 1 || c > 6) fail(ErrorCode::ConfigError, "table3 column outside 1..6");
        if (c == active_column) found = true;
    }
    if (!found) fail(ErrorCode::ConfigError, "active_column not among configured columns");
}

const ScenarioConfig& RunConfig::scenario(const std::string& name) const {
    for (const auto& sc : scenarios) {
        if (sc.name == name) return sc;
    }
    fail(ErrorCode::ConfigError, "unknown scenario " + name);
}

BfProgramData load_bf_program_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const int c_region = table.column("region");
    const int c_year = table.column("year");
    const int c_total = table.column("funds_total");
    const int c_disr = table.column("funds_disruptive");
    if (c_region < 0 || c_year < 0 || c_total < 0 || c_disr < 0) {
        fail(ErrorCode::MissingColumn,
             path + ": need region,year,funds_total,funds_disruptive");
    }
    BfProgramData out;
    for (const auto& row : table.rows) {
        double year = 0.0, total = 0.0, disr = 0.0;
        if (!parse_numeric(row[c_year], year) || !parse_numeric(row[c_total], total) ||
            !parse_numeric(row[c_disr], disr)) {
            fail(ErrorCode::NonNumericCell, path + ": " + row[c_region]);
        }
        const int y = static_cast<int>(year);
        out.funds_total[row[c_region]][y] = total;
        out.funds_disruptive[row[c_region]][y] = disr;
        out.last_year = std::max(out.last_year, y);
    }
    return out;
}

void write_bf_program_csv(const std::string& path, const BfProgramData& data) {
    CsvTable table;
    table.header = {"region", "year", "funds_total", "funds_disruptive"};
    for (const auto& [region, by_year] : data.funds_total) {
        for (const auto& [year, total] : by_year) {
            double disr = 0.0;
            auto it = data.funds_disruptive.find(region);
            if (it != data.funds_disruptive.end() && it->second.count(year)) {
                disr = it->second.at(year);
            }
            table.rows.push_back({region, std::to_string(year), format_numeric(total),
                                  format_numeric(disr)});
        }
    }
    write_csv(path, table);
}

} // namespace regrowth
