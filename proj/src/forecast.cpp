#include "regrowth/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "regrowth/csv.hpp"
#include "regrowth/errors.hpp"
#include "regrowth/stats.hpp"

namespace regrowth {

void ForecastScenario::validate() const {
    if (horizon_years.empty()) fail(ErrorCode::ConfigError, "scenario has no horizon years");
    for (std::size_t h = 1; h < horizon_years.size(); ++h) {
        if (horizon_years[h] != horizon_years[h - 1] + 1) {
            fail(ErrorCode::ConfigError, "horizon years must be contiguous");
        }
    }
    if (!(rebound_discount_c > 0.0 && rebound_discount_c <= 1.0)) {
        fail(ErrorCode::ConfigError, "rebound discount c must lie in (0,1]");
    }
    if (!(returns_discount_r > 0.0 && returns_discount_r <= 1.0)) {
        fail(ErrorCode::ConfigError, "returns discount r must lie in (0,1]");
    }
    for (int y : horizon_years) {
        if (!national_growth_pct.count(y)) {
            fail(ErrorCode::ConfigError,
                 "scenario lacks national growth for " + std::to_string(y));
        }
    }
    for (const auto& [region, by_year] : bf_funds_disruptive) {
        auto it = bf_funds_total.find(region);
        for (const auto& [year, disr] : by_year) {
            const double total =
                (it != bf_funds_total.end() && it->second.count(year)) ? it->second.at(year) : 0.0;
            if (disr < 0.0 || disr > total + 1e-9) {
                fail(ErrorCode::ConfigError,
                     "disruptive funds exceed total for " + region + "/" + std::to_string(year));
            }
        }
    }
}

double ForecastScenario::effective_national_pct(int year) const {
    auto it = national_growth_pct.find(year);
    if (it == national_growth_pct.end()) {
        fail(ErrorCode::MissingNationalValue, "scenario year " + std::to_string(year));
    }
    // the rebound discount applies to the assumed final-year impulse
    if (!horizon_years.empty() && year == horizon_years.back()) {
        return rebound_discount_c * it->second;
    }
    return it->second;
}

double ExtendedLogSeries::log_at(int region, int year) const {
    const int t = year - first_year;
    if (t < 0 || t >= n_total()) {
        fail(ErrorCode::MissingRegressor,
             var + " has no value for year " + std::to_string(year));
    }
    return log_values(region, t);
}

std::string ExtendedLogSeries::source_tag(int year) const {
    const int t = year - first_year;
    if (t < n_observed) return "obs:" + std::to_string(year);
    return "pred:" + std::to_string(year) + ":" + extra_source[t - n_observed];
}

namespace {

// AR(p) design on log levels with region effects; collinear lags dropped.
struct ArFit {
    FitResult fit;
    std::vector<int> lags;    // kept lags
    bool has_national = false;
    std::string national_mode; // "estimated" or "offset"
};

ArFit fit_panel_ar(const PanelDataset& ds, const std::string& var, int max_lag,
                   const NationalSeries* national, bool unit_coefficient) {
    PanelDataset work = ds;
    TransformTag log_tag;
    log_tag.kind = TransformTag::Kind::log;
    const std::string log_name = "log_" + var;
    if (!work.has_series(log_name)) work = work.transform(var, log_tag, log_name);
    const Series& s = work.series(log_name);

    const int n = ds.n_regions();
    const int t_len = ds.n_years();

    DesignMatrix dm;
    dm.n_regions = n;
    dm.response_name = log_name;
    for (int k = 1; k <= max_lag; ++k) dm.col_names.push_back("ar" + std::to_string(k));
    const bool with_national = national != nullptr && !unit_coefficient;
    if (with_national) dm.col_names.push_back("dlog_national");

    const int k_cols = static_cast<int>(dm.col_names.size());
    dm.X = Eigen::MatrixXd::Zero(n * t_len, k_cols);
    dm.y = Eigen::VectorXd::Zero(n * t_len);
    dm.row_region.resize(n * t_len);
    dm.row_year.resize(n * t_len);
    dm.usable.assign(n * t_len, false);

    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < t_len; ++t) {
            const int r = i * t_len + t;
            const int year = ds.first_year() + t;
            dm.row_region[r] = i;
            dm.row_year[r] = year;
            if (t < max_lag) continue;
            bool ok = !s.missing(i, t);
            double y_val = s.values(i, t);
            for (int k = 1; k <= max_lag; ++k) {
                ok = ok && !s.missing(i, t - k);
                dm.X(r, k - 1) = s.values(i, t - k);
            }
            if (national != nullptr) {
                if (!national->covers(year) || !national->covers(year - 1)) {
                    fail(ErrorCode::MissingNationalValue,
                         var + ": national series lacks " + std::to_string(year));
                }
                const double dn = std::log(national->at(year)) - std::log(national->at(year - 1));
                if (unit_coefficient) {
                    y_val -= dn; // offset variant
                } else {
                    dm.X(r, k_cols - 1) = dn;
                }
            }
            if (ok) {
                dm.y(r) = y_val;
                dm.usable[r] = true;
            } else {
                dm.X.row(r).setZero();
            }
        }
    }

    // drop lags without independent support
    const std::vector<int> keep = select_independent_columns(dm);
    DesignMatrix dm2;
    dm2.n_regions = dm.n_regions;
    dm2.response_name = dm.response_name;
    dm2.row_region = dm.row_region;
    dm2.row_year = dm.row_year;
    dm2.usable = dm.usable;
    dm2.y = dm.y;
    dm2.X.resize(dm.X.rows(), static_cast<int>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        dm2.X.col(static_cast<int>(j)) = dm.X.col(keep[j]);
        dm2.col_names.push_back(dm.col_names[keep[j]]);
    }

    ArFit out;
    out.fit = fit_ols_fe(dm2, false);
    for (int k = 1; k <= max_lag; ++k) {
        if (out.fit.coef_index("ar" + std::to_string(k)) >= 0) out.lags.push_back(k);
    }
    out.has_national = national != nullptr;
    out.national_mode = unit_coefficient ? "offset" : "estimated";
    return out;
}

ExtendedLogSeries observed_logs(const PanelDataset& ds, const std::string& var, int n_extra) {
    const Series& s = ds.series(var);
    ExtendedLogSeries out;
    out.var = var;
    out.first_year = ds.first_year();
    out.n_observed = ds.n_years();
    out.log_values.resize(ds.n_regions(), ds.n_years() + n_extra);
    out.log_values.setZero();
    for (int i = 0; i < ds.n_regions(); ++i) {
        for (int t = 0; t < ds.n_years(); ++t) {
            if (s.missing(i, t)) {
                fail(ErrorCode::MissingRegressor,
                     var + " missing in-sample at " + ds.regions()[i] + "/" +
                         std::to_string(ds.first_year() + t));
            }
            if (s.values(i, t) <= 0.0) {
                fail(ErrorCode::NonPositiveForLog,
                     var + " at " + ds.regions()[i] + "/" + std::to_string(ds.first_year() + t));
            }
            out.log_values(i, t) = std::log(s.values(i, t));
        }
    }
    return out;
}

} // namespace

ExtendedLogSeries extrapolate_regressor(const ExtrapolationContext& ctx,
                                        const std::string& var, ExtrapolationRule rule,
                                        int n_extra) {
    if (ctx.ds == nullptr) fail(ErrorCode::ConfigError, "extrapolation context lacks a panel");
    const PanelDataset& ds = *ctx.ds;
    ExtendedLogSeries out = observed_logs(ds, var, n_extra);
    const int t_obs = out.n_observed;

    switch (rule) {
        case ExtrapolationRule::ar4:
        case ExtrapolationRule::ar4_plus_national: {
            const NationalSeries* national =
                rule == ExtrapolationRule::ar4_plus_national ? ctx.national : nullptr;
            if (rule == ExtrapolationRule::ar4_plus_national && national == nullptr) {
                fail(ErrorCode::MissingNationalValue, var + ": no national series supplied");
            }
            const ArFit ar = fit_panel_ar(ds, var, 4, national, ctx.national_unit_coefficient);
            for (int e = 0; e < n_extra; ++e) {
                const int year = ds.last_year() + 1 + e;
                double dn = 0.0;
                if (national != nullptr) {
                    if (!national->covers(year) || !national->covers(year - 1)) {
                        fail(ErrorCode::MissingNationalValue,
                             var + ": national series lacks " + std::to_string(year));
                    }
                    dn = std::log(national->at(year)) - std::log(national->at(year - 1));
                }
                for (int i = 0; i < ds.n_regions(); ++i) {
                    double pred = ar.fit.region_effects(i);
                    for (int k : ar.lags) {
                        pred += ar.fit.coef("ar" + std::to_string(k)) * out.log_at(i, year - k);
                    }
                    if (national != nullptr) {
                        if (ctx.national_unit_coefficient) {
                            pred += dn;
                        } else {
                            pred += ar.fit.coef("dlog_national") * dn;
                        }
                    }
                    out.log_values(i, t_obs + e) = pred;
                }
                out.extra_source.push_back(rule == ExtrapolationRule::ar4 ? "ar4"
                                                                          : "ar4+national");
            }
            break;
        }
        case ExtrapolationRule::aux_equation: {
            if (ctx.aux == nullptr || ctx.aux->spec.response != var) {
                fail(ErrorCode::RuleVariableMismatch,
                     "aux rule for " + var + " without a matching auxiliary fit");
            }
            const AuxEstimate& aux = *ctx.aux;
            PanelDataset work = ds;
            TransformTag log_tag;
            log_tag.kind = TransformTag::Kind::log;
            std::vector<std::pair<std::string, ShortRunVar>> dets;
            for (const auto& d : aux.spec.determinants) {
                TransformTag tag;
                tag.kind = d.form == ShortRunVar::Form::diff_log ? TransformTag::Kind::log_diff
                                                                 : TransformTag::Kind::log;
                const std::string name =
                    (d.form == ShortRunVar::Form::diff_log ? "d" : "log_") + d.var;
                if (!work.has_series(name)) work = work.transform(d.var, tag, name);
                dets.push_back({name, d});
            }
            for (int e = 0; e < n_extra; ++e) {
                const int year = ds.last_year() + 1 + e;
                for (int i = 0; i < ds.n_regions(); ++i) {
                    double pred = aux.fit.region_effects(i);
                    for (int k : aux.spec.ar_lags) {
                        const int src_year = year - k;
                        if (src_year > ds.last_year()) {
                            fail(ErrorCode::RuleVariableMismatch,
                                 var + ": aux lags too short to predict " + std::to_string(year) +
                                     " from observed data");
                        }
                        pred += aux.fit.coef("ar" + std::to_string(k)) * out.log_at(i, src_year);
                    }
                    for (const auto& [name, d] : dets) {
                        const int src_year = year - d.lag;
                        const int t = ds.year_index(src_year);
                        if (t < 0 || work.series(name).missing(i, t)) {
                            fail(ErrorCode::MissingRegressor,
                                 name + " missing at " + ds.regions()[i] + "/" +
                                     std::to_string(src_year));
                        }
                        pred += aux.fit.coef(d.column_name()) * work.series(name).values(i, t);
                    }
                    out.log_values(i, t_obs + e) = pred;
                }
                out.extra_source.push_back("aux");
            }
            break;
        }
        case ExtrapolationRule::bf_intensity: {
            if (var != "bf") {
                fail(ErrorCode::RuleVariableMismatch, "bf_intensity rule applied to " + var);
            }
            if (ctx.scenario == nullptr || ctx.empl == nullptr) {
                fail(ErrorCode::ConfigError, "bf_intensity needs scenario funds and employment path");
            }
            for (int e = 0; e < n_extra; ++e) {
                const int year = ds.last_year() + 1 + e;
                for (int i = 0; i < ds.n_regions(); ++i) {
                    const std::string& region = ds.regions()[i];
                    auto it = ctx.scenario->bf_funds_total.find(region);
                    if (it == ctx.scenario->bf_funds_total.end() || !it->second.count(year)) {
                        fail(ErrorCode::MissingRegressor,
                             "bf funds missing for " + region + "/" + std::to_string(year));
                    }
                    const double funds = it->second.at(year);
                    if (funds <= 0.0) {
                        fail(ErrorCode::NonPositiveForLog,
                             "bf funds at " + region + "/" + std::to_string(year));
                    }
                    out.log_values(i, t_obs + e) =
                        std::log(funds) - ctx.empl->log_at(i, year);
                }
                out.extra_source.push_back("bf_intensity");
            }
            break;
        }
    }
    return out;
}

const ForecastCell& ForecastResult::cell_at(const std::string& region, int year) const {
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (regions[i] != region) continue;
        for (std::size_t h = 0; h < years.size(); ++h) {
            if (years[h] == year) return cells[i][h];
        }
    }
    fail(ErrorCode::MissingRegressor, "no forecast cell for " + region + "/" + std::to_string(year));
}

ForecastResult forecast_growth(const ForecastContext& ctx, const ForecastScenario& scenario) {
    if (ctx.ds == nullptr || ctx.growth == nullptr || ctx.longrun == nullptr) {
        fail(ErrorCode::ConfigError, "forecast context incomplete");
    }
    scenario.validate();
    const PanelDataset& ds = *ctx.ds;
    const GrowthEstimate& growth = *ctx.growth;
    const int n = ds.n_regions();
    const int last_obs = ds.last_year();
    const int last_horizon = scenario.horizon_years.back();
    if (scenario.horizon_years.front() != last_obs + 1) {
        fail(ErrorCode::ConfigError, "horizon must start the year after the panel ends");
    }
    const int n_extra = std::max(0, last_horizon - 1 - last_obs);

    // build the regressor paths demanded by the fitted specification
    ForecastResult out;
    out.regions = ds.regions();
    out.years = scenario.horizon_years;
    out.scenario = scenario;

    ExtrapolationContext base;
    base.ds = &ds;
    base.national_unit_coefficient = ctx.national_unit_coefficient;

    std::function<const ExtendedLogSeries&(const std::string&)> extend_for =
        [&](const std::string& var) -> const ExtendedLogSeries& {
        auto found = out.extended.find(var);
        if (found != out.extended.end()) return found->second;
        ExtrapolationContext c = base;
        ExtrapolationRule rule;
        if (var == "gfcf") {
            rule = ExtrapolationRule::ar4;
        } else if (var == "unemp") {
            rule = ExtrapolationRule::ar4_plus_national;
            c.national = ctx.national_unemp;
        } else if (var == "empl") {
            rule = ExtrapolationRule::ar4_plus_national;
            c.national = ctx.national_empl;
        } else if (var == "rd_exp_bus") {
            rule = ExtrapolationRule::aux_equation;
            c.aux = ctx.aux_rd_exp_bus;
        } else if (var == "rd_exp_pub") {
            rule = ExtrapolationRule::aux_equation;
            c.aux = ctx.aux_rd_exp_pub;
        } else if (var == "patent") {
            rule = ExtrapolationRule::aux_equation;
            c.aux = ctx.aux_patent;
        } else if (var == "bf") {
            rule = ExtrapolationRule::bf_intensity;
            c.scenario = &scenario;
            c.empl = &extend_for("empl");
        } else {
            rule = ExtrapolationRule::ar4;
        }
        auto [it, inserted] =
            out.extended.emplace(var, extrapolate_regressor(c, var, rule, n_extra));
        (void)inserted;
        return it->second;
    };

    for (const auto& v : growth.spec.short_run) extend_for(v.var);

    const int big_h = static_cast<int>(scenario.horizon_years.size());
    out.cells.assign(n, std::vector<ForecastCell>(big_h));
    out.gdp_levels.resize(n, big_h + 1);

    for (int i = 0; i < n; ++i) {
        const std::string& region = ds.regions()[i];
        const int t_last = ds.year_index(last_obs);
        out.gdp_levels(i, 0) = ds.value(growth.spec.response_var, i, t_last);

        for (int h = 0; h < big_h; ++h) {
            const int year = scenario.horizon_years[h];
            ForecastCell cell;
            double pred = growth.fit.region_effects(i);

            for (const auto& v : growth.spec.short_run) {
                const ExtendedLogSeries& path = out.extended.at(v.var);
                const std::string col = v.column_name();
                double value;
                std::string source;
                if (v.form == ShortRunVar::Form::diff_log) {
                    value = path.log_at(i, year - v.lag) - path.log_at(i, year - v.lag - 1);
                    source = path.source_tag(year - v.lag) + "|" + path.source_tag(year - v.lag - 1);
                } else {
                    value = path.log_at(i, year - v.lag);
                    source = path.source_tag(year - v.lag);
                }
                pred += growth.fit.coef(col) * value;
                cell.regressors[col] = value;
                cell.sources[col] = source;
            }

            if (growth.spec.factor_mode != FactorMode::none) {
                const double f = scenario.effective_national_pct(year) / 100.0;
                const std::string col = growth.spec.factor_mode == FactorMode::homogeneous
                                            ? "factor"
                                            : "factor_" + region;
                pred += growth.fit.coef(col) * f;
                cell.regressors[col] = f;
                cell.sources[col] = "national:" + std::to_string(year);
            }

            if (growth.spec.include_ec) {
                const int ec_year = year - growth.spec.ec_lag;
                const int t = ds.year_index(ec_year);
                if (t < 0 || ctx.longrun->ec.missing(i, t)) {
                    fail(ErrorCode::MissingRegressor,
                         "ec missing for " + region + "/" + std::to_string(ec_year));
                }
                const std::string col = "ec_l" + std::to_string(growth.spec.ec_lag);
                const double value = ctx.longrun->ec.values(i, t);
                pred += growth.fit.coef(col) * value;
                cell.regressors[col] = value;
                cell.sources[col] = "ec:" + std::to_string(ec_year);
            }

            cell.growth_log = pred;
            out.cells[i][h] = std::move(cell);
            out.gdp_levels(i, h + 1) = out.gdp_levels(i, h) * std::exp(pred);
        }
    }

    for (int h = 0; h < big_h; ++h) {
        std::vector<double> g;
        g.reserve(n);
        for (int i = 0; i < n; ++i) g.push_back(out.growth_pct(i, h));
        YearBand band;
        band.year = scenario.horizon_years[h];
        band.mean_pct = mean_of(g);
        const double sd = stddev_of(g);
        band.lo_pct = band.mean_pct - 2.0 * sd;
        band.hi_pct = band.mean_pct + 2.0 * sd;
        out.bands.push_back(band);
    }
    return out;
}

void assert_no_future_leakage(const ForecastResult& result, int panel_last_year,
                              int funds_last_year) {
    auto check_tag = [&](const std::string& tag, const std::string& where) {
        std::stringstream ss(tag);
        std::string atom;
        while (std::getline(ss, atom, '|')) {
            if (atom.rfind("obs:", 0) == 0) {
                const int year = std::stoi(atom.substr(4));
                if (year > panel_last_year) {
                    fail(ErrorCode::AuditTrailIncomplete,
                         where + " consumed regional observation dated " + std::to_string(year));
                }
            } else if (atom.rfind("ec:", 0) == 0) {
                const int year = std::stoi(atom.substr(3));
                if (year > panel_last_year) {
                    fail(ErrorCode::AuditTrailIncomplete,
                         where + " consumed ec dated " + std::to_string(year));
                }
            } else if (atom.rfind("pred:", 0) == 0) {
                const std::string rest = atom.substr(5);
                const auto colon = rest.find(':');
                const std::string rule = rest.substr(colon + 1);
                const int year = std::stoi(rest.substr(0, colon));
                if (rule == "bf_intensity" && year > funds_last_year) {
                    fail(ErrorCode::AuditTrailIncomplete,
                         where + " used funds dated " + std::to_string(year));
                }
            }
        }
    };
    for (std::size_t i = 0; i < result.regions.size(); ++i) {
        for (std::size_t h = 0; h < result.years.size(); ++h) {
            for (const auto& [col, tag] : result.cells[i][h].sources) {
                check_tag(tag, result.regions[i] + "/" + std::to_string(result.years[h]) +
                                   " column " + col);
            }
        }
    }
}

double prediction_from_audit(const ForecastCell& cell, const GrowthEstimate& growth,
                             int region_index, const std::vector<std::string>& regions) {
    (void)regions;
    if (cell.regressors.empty()) {
        fail(ErrorCode::AuditTrailIncomplete, "forecast cell has no stored regressors");
    }
    double pred = growth.fit.region_effects(region_index);
    for (const auto& [name, value] : cell.regressors) {
        pred += growth.fit.coef(name) * value;
    }
    return pred;
}

PredictionPath in_sample_prediction_path(const GrowthEstimate& estimate,
                                         const PanelDataset& ds) {
    const FitResult& fit = estimate.fit;
    int y_lo = fit.resid_year.front(), y_hi = fit.resid_year.front();
    for (int y : fit.resid_year) {
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    const int span = y_hi - y_lo + 1;
    const int n = ds.n_regions();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    PredictionPath out;
    out.regions = ds.regions();
    out.observed_pct = Eigen::MatrixXd::Constant(n, span, nan);
    out.predicted_pct = Eigen::MatrixXd::Constant(n, span, nan);
    for (std::size_t r = 0; r < fit.resid_year.size(); ++r) {
        const int i = fit.resid_region[r];
        const int t = fit.resid_year[r] - y_lo;
        const double fitted = fit.fitted(static_cast<int>(r));
        const double observed = fitted + fit.residuals(static_cast<int>(r));
        out.predicted_pct(i, t) = 100.0 * fitted;
        out.observed_pct(i, t) = 100.0 * observed;
    }
    for (int t = 0; t < span; ++t) {
        std::vector<double> obs, pred;
        for (int i = 0; i < n; ++i) {
            if (std::isfinite(out.observed_pct(i, t))) {
                obs.push_back(out.observed_pct(i, t));
                pred.push_back(out.predicted_pct(i, t));
            }
        }
        if (obs.empty()) continue;
        out.years.push_back(y_lo + t);
        out.observed_mean_pct.push_back(mean_of(obs));
        out.predicted_mean_pct.push_back(mean_of(pred));
    }
    return out;
}

void write_forecast_csv(const std::string& path, const ForecastResult& result) {
    // audit columns: union of regressor names in deterministic order
    std::vector<std::string> audit_cols;
    if (!result.cells.empty() && !result.cells[0].empty()) {
        for (const auto& [name, v] : result.cells[0][0].regressors) {
            (void)v;
            audit_cols.push_back(name);
        }
    }
    CsvTable table;
    table.header = {"region", "year", "predicted_growth_pct", "gdp_level"};
    for (const auto& c : audit_cols) table.header.push_back("x_" + c);
    for (const auto& c : audit_cols) table.header.push_back("src_" + c);
    for (std::size_t i = 0; i < result.regions.size(); ++i) {
        for (std::size_t h = 0; h < result.years.size(); ++h) {
            const ForecastCell& cell = result.cells[i][h];
            std::vector<std::string> row = {
                result.regions[i], std::to_string(result.years[h]),
                format_numeric(result.growth_pct(static_cast<int>(i), static_cast<int>(h))),
                format_numeric(result.gdp_levels(static_cast<int>(i), static_cast<int>(h) + 1))};
            for (const auto& c : audit_cols) {
                auto it = cell.regressors.find(c);
                row.push_back(it != cell.regressors.end() ? format_numeric(it->second) : "");
            }
            for (const auto& c : audit_cols) {
                auto it = cell.sources.find(c);
                row.push_back(it != cell.sources.end() ? it->second : "");
            }
            table.rows.push_back(std::move(row));
        }
    }
    write_csv(path, table);
}

void write_band_csv(const std::string& path, const ForecastResult& result,
                    const PredictionPath* in_sample) {
    CsvTable table;
    table.header = {"year", "segment", "observed_mean_pct", "predicted_mean_pct",
                    "band_lo_pct", "band_hi_pct"};
    if (in_sample != nullptr) {
        for (std::size_t t = 0; t < in_sample->years.size(); ++t) {
            table.rows.push_back({std::to_string(in_sample->years[t]), "in_sample",
                                  format_numeric(in_sample->observed_mean_pct[t]),
                                  format_numeric(in_sample->predicted_mean_pct[t]), "", ""});
        }
    }
    for (const auto& band : result.bands) {
        table.rows.push_back({std::to_string(band.year), "forecast", "",
                              format_numeric(band.mean_pct), format_numeric(band.lo_pct),
                              format_numeric(band.hi_pct)});
    }
    write_csv(path, table);
}

void write_prediction_path_csv(const std::string& path, const PredictionPath& p) {
    CsvTable table;
    table.header = {"region", "year", "observed_pct", "predicted_pct"};
    for (std::size_t i = 0; i < p.regions.size(); ++i) {
        for (std::size_t t = 0; t < p.years.size(); ++t) {
            const int ti = static_cast<int>(p.years[t] - p.years.front());
            const double obs = p.observed_pct(static_cast<int>(i), ti);
            const double pred = p.predicted_pct(static_cast<int>(i), ti);
            if (!std::isfinite(obs)) continue;
            table.rows.push_back({p.regions[i], std::to_string(p.years[t]),
                                  format_numeric(obs), format_numeric(pred)});
        }
    }
    write_csv(path, table);
}

} // namespace regrowth
