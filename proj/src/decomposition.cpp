#include "regrowth/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "regrowth/csv.hpp"
#include "regrowth/errors.hpp"
#include "regrowth/stats.hpp"

namespace regrowth {

FundingChangeMap compute_funding_changes(const ForecastResult& forecast,
                                         const PanelDataset& ds) {
    auto it_bf = forecast.extended.find("bf");
    auto it_empl = forecast.extended.find("empl");
    if (it_bf == forecast.extended.end()) {
        fail(ErrorCode::AuditTrailIncomplete, "forecast carries no bf intensity path");
    }
    const ExtendedLogSeries& bf_path = it_bf->second;
    const ForecastScenario& sc = forecast.scenario;

    auto intensity = [&](int i, int year) {
        return std::exp(bf_path.log_at(i, year));
    };
    auto disruptive_intensity = [&](int i, int year) -> double {
        const std::string& region = forecast.regions[i];
        auto r_it = sc.bf_funds_disruptive.find(region);
        if (r_it == sc.bf_funds_disruptive.end() || !r_it->second.count(year)) return 0.0;
        const double funds = r_it->second.at(year);
        if (funds == 0.0) return 0.0;
        if (year <= ds.last_year()) {
            const int t = ds.year_index(year);
            return funds / ds.value("empl", i, t);
        }
        if (it_empl == forecast.extended.end()) {
            fail(ErrorCode::AuditTrailIncomplete, "no employment path for disruptive intensity");
        }
        return funds / std::exp(it_empl->second.log_at(i, year));
    };

    FundingChangeMap out;
    for (std::size_t i = 0; i < forecast.regions.size(); ++i) {
        const int ii = static_cast<int>(i);
        for (int year : forecast.years) {
            const int y_new = year - 1;
            const int y_old = year - 2;
            const double base = intensity(ii, y_old);
            const double total_new = intensity(ii, y_new);
            const double disr_new = disruptive_intensity(ii, y_new);
            const double disr_old = disruptive_intensity(ii, y_old);
            FundingChange fc;
            fc.total_pct = 100.0 * (total_new - base) / base;
            fc.disruptive_pct = 100.0 * (disr_new - disr_old) / base;
            fc.traditional_pct =
                100.0 * ((total_new - disr_new) - (base - disr_old)) / base;
            out[forecast.regions[i]][year] = fc;
        }
    }
    return out;
}

double direct_contribution(double beta_bf, const FundingChange& fc, double r) {
    return beta_bf * fc.traditional_pct + r * beta_bf * fc.disruptive_pct;
}

namespace {

double channel_coef(const FitResult& fit, const std::string& name,
                    const std::string& what) {
    const int j = fit.coef_index(name);
    if (j < 0) {
        fail(ErrorCode::MissingChannelCoefficient, what + " (" + name + ")");
    }
    return fit.coefficients(j);
}

std::string aux_bf_column(const AuxEstimate& aux) {
    for (const auto& d : aux.spec.determinants) {
        if (d.var == "bf") return d.column_name();
    }
    fail(ErrorCode::MissingChannelCoefficient,
         "aux model for " + aux.spec.response + " has no bf determinant");
}

} // namespace

double indirect_contribution(const GrowthEstimate& growth, const AuxEstimate& aux_rd_exp_bus,
                             const AuxEstimate& aux_rd_exp_pub, const AuxEstimate& aux_patent,
                             const FundingChange& fc, double r, bool discount_indirect) {
    struct Channel {
        const char* growth_col;
        const AuxEstimate* aux;
    };
    const Channel channels[] = {
        {"log_rd_exp_bus_l1", &aux_rd_exp_bus},
        {"log_rd_exp_pub_l1", &aux_rd_exp_pub},
        {"log_patent_l1", &aux_patent},
    };
    double product_sum = 0.0;
    for (const auto& ch : channels) {
        const double beta = channel_coef(growth.fit, ch.growth_col, "growth coefficient");
        const double theta =
            channel_coef(ch.aux->fit, aux_bf_column(*ch.aux), ch.aux->spec.response);
        product_sum += beta * theta;
    }
    const double disc = discount_indirect ? r : 1.0;
    return product_sum * (fc.traditional_pct + disc * fc.disruptive_pct);
}

const DecompositionRow& GrowthDecomposition::at(const std::string& region, int year) const {
    for (const auto& row : rows) {
        if (row.region == region && row.year == year) return row;
    }
    fail(ErrorCode::MissingRegressor, "no decomposition row for " + region + "/" +
                                          std::to_string(year));
}

std::vector<double> GrowthDecomposition::bf_contributions(int year) const {
    std::vector<double> out;
    for (const auto& row : rows) {
        if (row.year == year) out.push_back(row.bf_total());
    }
    return out;
}

GrowthDecomposition decompose(const ForecastResult& forecast, const GrowthEstimate& growth,
                              const LongRunEstimate& longrun, const AuxEstimate& aux_rd_exp_bus,
                              const AuxEstimate& aux_rd_exp_pub, const AuxEstimate& aux_patent,
                              const FundingChangeMap& changes, double r,
                              bool discount_indirect) {
    (void)longrun;
    GrowthDecomposition out;
    out.returns_discount_r = r;
    out.discount_indirect = discount_indirect;
    const double beta_bf = channel_coef(growth.fit, "log_bf_l1", "bf growth coefficient");

    for (std::size_t i = 0; i < forecast.regions.size(); ++i) {
        const std::string& region = forecast.regions[i];
        for (std::size_t h = 0; h < forecast.years.size(); ++h) {
            const int year = forecast.years[h];
            const ForecastCell& cell = forecast.cells[i][h];
            if (cell.regressors.empty()) {
                fail(ErrorCode::AuditTrailIncomplete,
                     "cell " + region + "/" + std::to_string(year) + " lacks an audit vector");
            }
            DecompositionRow row;
            row.region = region;
            row.year = year;
            row.total = 100.0 * cell.growth_log;
            row.fixed_effect =
                100.0 * growth.fit.region_effects(static_cast<int>(i));

            if (growth.spec.factor_mode != FactorMode::none) {
                const std::string col = growth.spec.factor_mode == FactorMode::homogeneous
                                            ? "factor"
                                            : "factor_" + region;
                auto it = cell.regressors.find(col);
                if (it == cell.regressors.end()) {
                    fail(ErrorCode::AuditTrailIncomplete, "audit lacks " + col);
                }
                row.common_factor = 100.0 * growth.fit.coef(col) * it->second;
            }
            if (growth.spec.include_ec) {
                const std::string col = "ec_l" + std::to_string(growth.spec.ec_lag);
                auto it = cell.regressors.find(col);
                if (it == cell.regressors.end()) {
                    fail(ErrorCode::AuditTrailIncomplete, "audit lacks " + col);
                }
                row.ec_term = 100.0 * growth.fit.coef(col) * it->second;
            }

            auto fc_r = changes.find(region);
            if (fc_r == changes.end() || !fc_r->second.count(year)) {
                fail(ErrorCode::AuditTrailIncomplete,
                     "no funding change for " + region + "/" + std::to_string(year));
            }
            const FundingChange& fc = fc_r->second.at(year);
            row.direct_bf = direct_contribution(beta_bf, fc, r);
            row.indirect_bf = indirect_contribution(growth, aux_rd_exp_bus, aux_rd_exp_pub,
                                                    aux_patent, fc, r, discount_indirect);
            row.other = row.total - row.common_factor - row.ec_term - row.direct_bf -
                        row.indirect_bf - row.fixed_effect;
            out.rows.push_back(row);
        }
    }
    return out;
}

FundingShareReport funding_share_report(
    const PanelDataset& ds, const ForecastScenario& scenario,
    const std::vector<std::pair<std::string, std::map<std::string, double>>>& contributions,
    double funds_scale) {
    FundingShareReport out;
    out.regions = ds.regions();
    const int last_t = ds.year_index(ds.last_year());

    int funds_year = 0;
    for (const auto& [region, by_year] : scenario.bf_funds_total) {
        (void)region;
        for (const auto& [year, v] : by_year) {
            (void)v;
            funds_year = std::max(funds_year, year);
        }
    }

    for (int i = 0; i < ds.n_regions(); ++i) {
        std::vector<double> shares;
        for (int t = 0; t <= last_t; ++t) {
            const auto funds = ds.cell("bf_funds_total", i, t);
            const auto gdp = ds.cell("gdp", i, t);
            const auto empl = ds.cell("empl", i, t);
            if (!funds || !gdp || !empl) continue;
            shares.push_back(100.0 * (*funds * funds_scale) / (*gdp * *empl));
        }
        out.share_insample_pct.push_back(shares.empty() ? 0.0 : mean_of(shares));

        double funds_last = 0.0;
        auto r_it = scenario.bf_funds_total.find(ds.regions()[i]);
        if (r_it != scenario.bf_funds_total.end() && r_it->second.count(funds_year)) {
            funds_last = r_it->second.at(funds_year);
        }
        const double gdp_last = ds.value("gdp", i, last_t);
        const double empl_last = ds.value("empl", i, last_t);
        out.share_2020_pct.push_back(100.0 * (funds_last * funds_scale) /
                                     (gdp_last * empl_last));
    }

    for (const auto& [label, by_region] : contributions) {
        out.contribution_labels.push_back(label);
        std::vector<double> vals;
        for (const auto& region : out.regions) {
            auto it = by_region.find(region);
            vals.push_back(it != by_region.end() ? it->second : 0.0);
        }
        out.contributions.push_back(std::move(vals));
    }
    return out;
}

std::vector<FundingShareReport::SummaryRowOut> FundingShareReport::summary() const {
    auto stat_row = [&](const std::string& name, auto f) {
        SummaryRowOut row;
        row.statistic = name;
        row.values.push_back(f(share_insample_pct));
        row.values.push_back(f(share_2020_pct));
        for (const auto& c : contributions) row.values.push_back(f(c));
        return row;
    };
    auto v_min = [](const std::vector<double>& v) {
        return *std::min_element(v.begin(), v.end());
    };
    auto v_max = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end());
    };
    return {
        stat_row("mean", [](const std::vector<double>& v) { return mean_of(v); }),
        stat_row("sd", [](const std::vector<double>& v) { return stddev_of(v); }),
        stat_row("min", v_min),
        stat_row("max", v_max),
    };
}

void write_decomposition_csv(const std::string& path, const GrowthDecomposition& d) {
    CsvTable table;
    table.header = {"region",      "year",        "total_pct",   "common_factor",
                    "ec_term",     "direct_bf",   "indirect_bf", "other",
                    "fixed_effect"};
    for (const auto& row : d.rows) {
        table.rows.push_back({row.region, std::to_string(row.year), format_numeric(row.total),
                              format_numeric(row.common_factor), format_numeric(row.ec_term),
                              format_numeric(row.direct_bf), format_numeric(row.indirect_bf),
                              format_numeric(row.other), format_numeric(row.fixed_effect)});
    }
    write_csv(path, table);
}

void write_funding_share_csv(const std::string& path, const FundingShareReport& report) {
    CsvTable table;
    table.header = {"statistic", "bf_share_gdp_insample_pct", "bf_funds_last_over_gdp_pct"};
    for (const auto& label : report.contribution_labels) {
        table.header.push_back("contribution_" + label);
    }
    for (const auto& row : report.summary()) {
        std::vector<std::string> cells = {row.statistic};
        for (double v : row.values) cells.push_back(format_numeric(v));
        table.rows.push_back(std::move(cells));
    }
    write_csv(path, table);
}

} // namespace regrowth
