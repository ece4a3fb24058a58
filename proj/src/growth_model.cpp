#include "regrowth/growth_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "regrowth/errors.hpp"
#include "regrowth/stats.hpp"

namespace regrowth {

std::string ShortRunVar::column_name() const {
    const std::string base = (form == Form::diff_log) ? "d" + var : "log_" + var;
    return base + "_l" + std::to_string(lag);
}

std::vector<ShortRunVar> GrowthModelSpec::default_short_run() {
    using F = ShortRunVar::Form;
    return {
        {"gfcf", F::diff_log, 1},   {"unemp", F::diff_log, 1},
        {"rd_exp_bus", F::log_level, 1}, {"rd_exp_pub", F::log_level, 1},
        {"patent", F::log_level, 1},     {"bf", F::log_level, 1},
    };
}

GrowthModelSpec GrowthModelSpec::table3_column(int column) {
    GrowthModelSpec spec;
    spec.short_run = default_short_run();
    switch (column) {
        case 1:
            spec.factor_mode = FactorMode::none;
            spec.include_ec = false;
            spec.estimator = "ols_fe";
            break;
        case 2:
            spec.factor_mode = FactorMode::homogeneous;
            spec.include_ec = false;
            spec.estimator = "ols_fe";
            break;
        case 3:
            spec.factor_mode = FactorMode::heterogeneous;
            spec.include_ec = false;
            spec.estimator = "ols_fe";
            break;
        case 4:
            spec.factor_mode = FactorMode::heterogeneous;
            spec.include_ec = true;
            spec.estimator = "ols_fe";
            break;
        case 5:
            spec.factor_mode = FactorMode::heterogeneous;
            spec.include_ec = true;
            spec.estimator = "fgls_ar1_het";
            break;
        case 6:
            spec.factor_mode = FactorMode::heterogeneous;
            spec.include_ec = true;
            spec.estimator = "fgls_ar1_het";
            spec.sample_window = {{2008, 2018}};
            break;
        default:
            fail(ErrorCode::ConfigError, "table3 column must be 1..6");
    }
    return spec;
}

AuxModelSpec AuxModelSpec::standard(const std::string& response) {
    using F = ShortRunVar::Form;
    AuxModelSpec spec;
    spec.response = response;
    spec.ar_lags = {3, 4};
    spec.determinants = {
        {"gfcf", F::diff_log, 3}, {"unemp", F::diff_log, 3}, {"bf", F::log_level, 3}};
    return spec;
}

namespace {

// Derived-series cache so repeated builds reuse log/dlog columns.
PanelDataset ensure_columns(const PanelDataset& ds, const std::vector<ShortRunVar>& vars,
                            const std::string& response_var, bool response_dlog) {
    PanelDataset work = ds;
    auto ensure = [&](const std::string& var, ShortRunVar::Form form) {
        TransformTag tag;
        tag.kind = (form == ShortRunVar::Form::diff_log) ? TransformTag::Kind::log_diff
                                                         : TransformTag::Kind::log;
        const std::string name =
            (form == ShortRunVar::Form::diff_log ? "d" : "log_") + var;
        if (!work.has_series(name)) work = work.transform(var, tag, name);
        return name;
    };
    for (const auto& v : vars) ensure(v.var, v.form);
    if (response_dlog) {
        ensure(response_var, ShortRunVar::Form::diff_log);
    } else {
        ensure(response_var, ShortRunVar::Form::log_level);
    }
    return work;
}

std::string derived_name(const ShortRunVar& v) {
    return (v.form == ShortRunVar::Form::diff_log ? "d" : "log_") + v.var;
}

} // namespace

DesignMatrix build_growth_design(const PanelDataset& ds, const LongRunEstimate* longrun,
                                 const NationalSeries& national_growth_pct,
                                 const GrowthModelSpec& spec) {
    for (const auto& v : spec.short_run) {
        if (v.lag < 1) {
            fail(ErrorCode::ConfigError,
                 "short-run regressor " + v.var + " must be predetermined (lag >= 1)");
        }
    }
    if (spec.include_ec) {
        if (spec.ec_lag < 1) fail(ErrorCode::ConfigError, "ec lag must be >= 1");
        if (longrun == nullptr) {
            fail(ErrorCode::MissingRegressor, "ec term requested without a long-run fit");
        }
    }

    const PanelDataset work = ensure_columns(ds, spec.short_run, spec.response_var, true);
    const std::string response = "d" + spec.response_var;
    const int n = ds.n_regions();
    const int t_len = ds.n_years();

    int win_lo = ds.first_year();
    int win_hi = ds.last_year();
    if (spec.sample_window) {
        win_lo = std::max(win_lo, spec.sample_window->first);
        win_hi = std::min(win_hi, spec.sample_window->second);
    }
    if (win_lo > win_hi) fail(ErrorCode::WindowTooShort, "empty sample window");

    DesignMatrix dm;
    dm.n_regions = n;
    dm.response_name = response;
    for (const auto& v : spec.short_run) dm.col_names.push_back(v.column_name());
    if (spec.factor_mode == FactorMode::homogeneous) {
        dm.col_names.push_back("factor");
    } else if (spec.factor_mode == FactorMode::heterogeneous) {
        for (int i = 0; i < n; ++i) dm.col_names.push_back("factor_" + ds.regions()[i]);
    }
    if (spec.include_ec) dm.col_names.push_back("ec_l" + std::to_string(spec.ec_lag));

    const int k = static_cast<int>(dm.col_names.size());
    const int rows = n * t_len;
    dm.X = Eigen::MatrixXd::Zero(rows, k);
    dm.y = Eigen::VectorXd::Zero(rows);
    dm.row_region.resize(rows);
    dm.row_year.resize(rows);
    dm.usable.assign(rows, false);

    const Series& resp = work.series(response);
    int usable_count = 0;
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < t_len; ++t) {
            const int r = i * t_len + t;
            const int year = ds.first_year() + t;
            dm.row_region[r] = i;
            dm.row_year[r] = year;
            if (year < win_lo || year > win_hi) continue;
            bool ok = !resp.missing(i, t);
            if (ok) dm.y(r) = resp.values(i, t);

            int col = 0;
            for (const auto& v : spec.short_run) {
                const Series& s = work.series(derived_name(v));
                const int tl = t - v.lag;
                if (tl < 0 || s.missing(i, tl)) {
                    ok = false;
                } else {
                    dm.X(r, col) = s.values(i, tl);
                }
                ++col;
            }
            if (spec.factor_mode != FactorMode::none) {
                if (!national_growth_pct.covers(year)) {
                    fail(ErrorCode::MissingNationalValue,
                         "national growth series lacks year " + std::to_string(year));
                }
                const double f = national_growth_pct.at(year) / 100.0; // percent -> log units
                if (spec.factor_mode == FactorMode::homogeneous) {
                    dm.X(r, col) = f;
                    ++col;
                } else {
                    dm.X(r, col + i) = f;
                    col += n;
                }
            }
            if (spec.include_ec) {
                const int tl = t - spec.ec_lag;
                if (tl < 0 || longrun->ec.missing(i, tl)) {
                    ok = false;
                } else {
                    dm.X(r, col) = longrun->ec.values(i, tl);
                }
                ++col;
            }
            if (ok) {
                dm.usable[r] = true;
                ++usable_count;
            } else {
                dm.X.row(r).setZero();
                dm.y(r) = 0.0;
            }
        }
    }
    if (usable_count == 0) fail(ErrorCode::WindowTooShort, "no usable rows in window");
    return dm;
}

GrowthEstimate fit_growth(const DesignMatrix& dm, const GrowthModelSpec& spec) {
    GrowthEstimate out;
    out.spec = spec;
    if (spec.estimator == "fgls_ar1_het") {
        out.fit = fit_fgls_ar1_het(dm);
    } else if (spec.estimator == "ols_fe") {
        out.fit = fit_ols_fe(dm, spec.robust);
    } else {
        fail(ErrorCode::ConfigError, "unknown estimator " + spec.estimator);
    }
    for (const auto& name : dm.col_names) {
        if (name.rfind("factor", 0) == 0) out.factor_coef_names.push_back(name);
    }
    return out;
}

GrowthEstimate fit_growth(const PanelDataset& ds, const LongRunEstimate* longrun,
                          const NationalSeries& national_growth_pct,
                          const GrowthModelSpec& spec) {
    return fit_growth(build_growth_design(ds, longrun, national_growth_pct, spec), spec);
}

GrowthEstimate fit_growth_time_varying_bf(const PanelDataset& ds,
                                          const LongRunEstimate* longrun,
                                          const NationalSeries& national_growth_pct,
                                          const GrowthModelSpec& spec,
                                          const std::vector<int>& period_start_years,
                                          int period_length) {
    DesignMatrix dm = build_growth_design(ds, longrun, national_growth_pct, spec);
    const int bf_col = [&]() {
        for (const auto& v : spec.short_run) {
            if (v.var == "bf") return dm.col_index(v.column_name());
        }
        return -1;
    }();
    if (bf_col < 0) fail(ErrorCode::ConfigError, "spec has no bf regressor");

    std::vector<int> starts = period_start_years;
    std::sort(starts.begin(), starts.end());

    // no breakpoints: a single full-sample bin is the plain fit
    if (starts.empty()) {
        GrowthEstimate out = fit_growth(dm, spec);
        const int jb = out.fit.coef_index(dm.col_names[bf_col]);
        PeriodCoef base;
        const auto [lo, hi] = [&]() {
            int a = 1 << 30, b = 0;
            for (int r = 0; r < dm.n_rows(); ++r) {
                if (!dm.usable[r]) continue;
                a = std::min(a, dm.row_year[r]);
                b = std::max(b, dm.row_year[r]);
            }
            return std::pair<int, int>{a, b};
        }();
        base.start_year = lo;
        base.end_year = hi;
        base.coef = out.fit.coefficients(jb);
        const double se = std::sqrt(std::max(0.0, out.fit.covariance(jb, jb)));
        base.lo90 = base.coef - kNormal90TwoSided * se;
        base.hi90 = base.coef + kNormal90TwoSided * se;
        base.is_baseline = true;
        out.bf_period_coefficients.push_back(base);
        return out;
    }

    // append one interaction column per period bin
    const int base_cols = dm.n_cols();
    const int n_periods = static_cast<int>(starts.size());
    Eigen::MatrixXd X2(dm.X.rows(), base_cols + n_periods);
    X2.leftCols(base_cols) = dm.X;
    X2.rightCols(n_periods).setZero();
    std::vector<int> bin_rows(n_periods, 0);
    for (int r = 0; r < dm.n_rows(); ++r) {
        if (!dm.usable[r]) continue;
        for (int p = 0; p < n_periods; ++p) {
            if (dm.row_year[r] >= starts[p] && dm.row_year[r] < starts[p] + period_length) {
                X2(r, base_cols + p) = dm.X(r, bf_col);
                ++bin_rows[p];
            }
        }
    }
    std::vector<std::string> dev_names;
    for (int p = 0; p < n_periods; ++p) {
        if (bin_rows[p] == 0) {
            fail(ErrorCode::EmptyPeriodBin,
                 "period starting " + std::to_string(starts[p]) + " has no usable rows");
        }
        dev_names.push_back("bf_x_" + std::to_string(starts[p]));
        dm.col_names.push_back(dev_names.back());
    }
    dm.X = std::move(X2);

    GrowthEstimate out = fit_growth(dm, spec);

    const int jb = out.fit.coef_index(dm.col_names[bf_col]);
    const double beta_bf = out.fit.coefficients(jb);
    const double var_bf = out.fit.covariance(jb, jb);

    // baseline period: usable years before the first breakpoint
    int base_lo = 0, base_hi = 0;
    {
        std::set<int> years;
        for (int r = 0; r < dm.n_rows(); ++r) {
            if (dm.usable[r] && dm.row_year[r] < starts.front()) years.insert(dm.row_year[r]);
        }
        if (!years.empty()) {
            base_lo = *years.begin();
            base_hi = *years.rbegin();
        }
    }
    if (base_lo != 0) {
        PeriodCoef base;
        base.start_year = base_lo;
        base.end_year = base_hi;
        base.coef = beta_bf;
        const double se = std::sqrt(std::max(0.0, var_bf));
        base.lo90 = beta_bf - kNormal90TwoSided * se;
        base.hi90 = beta_bf + kNormal90TwoSided * se;
        base.is_baseline = true;
        out.bf_period_coefficients.push_back(base);
    }
    for (int p = 0; p < n_periods; ++p) {
        const int jd = out.fit.coef_index(dev_names[p]);
        const double dev = out.fit.coefficients(jd);
        const double var_total =
            var_bf + out.fit.covariance(jd, jd) + 2.0 * out.fit.covariance(jb, jd);
        PeriodCoef pc;
        pc.start_year = starts[p];
        pc.end_year = starts[p] + period_length - 1;
        pc.coef = beta_bf + dev;
        const double se = std::sqrt(std::max(0.0, var_total));
        pc.lo90 = pc.coef - kNormal90TwoSided * se;
        pc.hi90 = pc.coef + kNormal90TwoSided * se;
        out.bf_period_coefficients.push_back(pc);
    }
    // joint stability test on a classical covariance; the clustered matrix
    // cannot support this many restrictions with few clusters
    if (spec.estimator == "ols_fe" && spec.robust) {
        GrowthModelSpec wspec = spec;
        wspec.robust = false;
        const GrowthEstimate refit = fit_growth(dm, wspec);
        out.bf_stability_wald = wald_zero(refit.fit, dev_names);
    } else {
        out.bf_stability_wald = wald_zero(out.fit, dev_names);
    }
    return out;
}

AuxEstimate fit_aux(const PanelDataset& ds, const AuxModelSpec& spec) {
    for (int k : spec.ar_lags) {
        if (k < 1 || k > 4) fail(ErrorCode::ConfigError, "aux AR lags must lie in 1..4");
    }
    if (spec.ar_lags.empty()) fail(ErrorCode::ConfigError, "aux model needs AR lags");

    PanelDataset work = ensure_columns(ds, spec.determinants, spec.response, false);
    const std::string resp = "log_" + spec.response;

    const int n = ds.n_regions();
    const int t_len = ds.n_years();
    int win_lo = ds.first_year();
    int win_hi = ds.last_year();
    if (spec.sample_window) {
        win_lo = std::max(win_lo, spec.sample_window->first);
        win_hi = std::min(win_hi, spec.sample_window->second);
    }

    DesignMatrix dm;
    dm.n_regions = n;
    dm.response_name = resp;
    std::vector<int> lags = spec.ar_lags;
    std::sort(lags.begin(), lags.end());
    for (int k : lags) dm.col_names.push_back("ar" + std::to_string(k));
    for (const auto& v : spec.determinants) dm.col_names.push_back(v.column_name());

    const int k_cols = static_cast<int>(dm.col_names.size());
    const int rows = n * t_len;
    dm.X = Eigen::MatrixXd::Zero(rows, k_cols);
    dm.y = Eigen::VectorXd::Zero(rows);
    dm.row_region.resize(rows);
    dm.row_year.resize(rows);
    dm.usable.assign(rows, false);

    const Series& rs = work.series(resp);
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < t_len; ++t) {
            const int r = i * t_len + t;
            const int year = ds.first_year() + t;
            dm.row_region[r] = i;
            dm.row_year[r] = year;
            if (year < win_lo || year > win_hi) continue;
            bool ok = !rs.missing(i, t);
            if (ok) dm.y(r) = rs.values(i, t);
            int col = 0;
            for (int kk : lags) {
                const int tl = t - kk;
                if (tl < 0 || rs.missing(i, tl)) {
                    ok = false;
                } else {
                    dm.X(r, col) = rs.values(i, tl);
                }
                ++col;
            }
            for (const auto& v : spec.determinants) {
                const Series& s = work.series(derived_name(v));
                const int tl = t - v.lag;
                if (tl < 0 || s.missing(i, tl)) {
                    ok = false;
                } else {
                    dm.X(r, col) = s.values(i, tl);
                }
                ++col;
            }
            if (ok) {
                dm.usable[r] = true;
            } else {
                dm.X.row(r).setZero();
                dm.y(r) = 0.0;
            }
        }
    }

    AuxEstimate out;
    out.spec = spec;
    if (spec.estimator == "fgls_ar1_het") {
        out.fit = fit_fgls_ar1_het(dm);
    } else {
        out.fit = fit_ols_fe(dm, true);
    }
    // jointly-summed AR coefficient with delta-method standard error
    double sum = 0.0, var = 0.0;
    for (std::size_t a = 0; a < lags.size(); ++a) {
        const int ja = out.fit.coef_index("ar" + std::to_string(lags[a]));
        sum += out.fit.coefficients(ja);
        for (std::size_t b = 0; b < lags.size(); ++b) {
            const int jb = out.fit.coef_index("ar" + std::to_string(lags[b]));
            var += out.fit.covariance(ja, jb);
        }
    }
    out.ar_joint = sum;
    out.ar_joint_se = std::sqrt(std::max(0.0, var));
    return out;
}

WaldTestResult wald_zero(const FitResult& fit, const std::vector<std::string>& names) {
    if (names.empty()) fail(ErrorCode::TestInapplicable, "empty coefficient set");
    const int q = static_cast<int>(names.size());
    Eigen::VectorXd b(q);
    Eigen::MatrixXd V(q, q);
    std::vector<int> idx;
    for (const auto& name : names) {
        const int j = fit.coef_index(name);
        if (j < 0) fail(ErrorCode::UnknownVariable, "coefficient " + name);
        idx.push_back(j);
    }
    for (int a = 0; a < q; ++a) {
        b(a) = fit.coefficients(idx[a]);
        for (int c = 0; c < q; ++c) V(a, c) = fit.covariance(idx[a], idx[c]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
        fail(ErrorCode::SingularRestrictionCovariance, "singular covariance block");
    }
    WaldTestResult out;
    out.statistic = b.dot(lu.solve(b));
    out.dof = q;
    out.p_value = chi_square_sf(out.statistic, out.dof);
    out.hypothesis = "all named coefficients equal zero";
    return out;
}

} // namespace regrowth
