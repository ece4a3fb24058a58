#include "regrowth/longrun.hpp"

#include <algorithm>
#include <cmath>

#include "regrowth/csv.hpp"
#include "regrowth/errors.hpp"
#include "regrowth/stats.hpp"

namespace regrowth {

LongRunEstimate fit_longrun(const PanelDataset& ds,
                            const std::vector<std::string>& regressors,
                            const std::string& gdp_var) {
    const int n = ds.n_regions();
    const int t_len = ds.n_years();

    PanelDataset work = ds;
    std::vector<std::string> log_names;
    TransformTag log_tag;
    log_tag.kind = TransformTag::Kind::log;
    for (const auto& v : regressors) {
        const std::string name = "log_" + v;
        if (!work.has_series(name)) work = work.transform(v, log_tag, name);
        log_names.push_back(name);
    }
    const std::string log_gdp = "log_" + gdp_var;
    if (!work.has_series(log_gdp)) work = work.transform(gdp_var, log_tag, log_gdp);

    DesignMatrix dm;
    dm.n_regions = n;
    dm.col_names = log_names;
    dm.response_name = log_gdp;
    const int rows = n * t_len;
    dm.X.resize(rows, static_cast<int>(log_names.size()));
    dm.y.resize(rows);
    dm.row_region.reserve(rows);
    dm.row_year.reserve(rows);
    dm.usable.reserve(rows);
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < t_len; ++t) {
            const int r = i * t_len + t;
            dm.row_region.push_back(i);
            dm.row_year.push_back(ds.first_year() + t);
            bool ok = !work.series(log_gdp).missing(i, t);
            dm.y(r) = work.series(log_gdp).values(i, t);
            for (std::size_t j = 0; j < log_names.size(); ++j) {
                const Series& s = work.series(log_names[j]);
                ok = ok && !s.missing(i, t);
                dm.X(r, static_cast<int>(j)) = s.values(i, t);
            }
            dm.usable.push_back(ok);
        }
    }

    const FitResult fit = fit_ols_fe(dm, false);

    LongRunEstimate out;
    out.regressors = regressors;
    out.delta = fit.coefficients;
    out.covariance = fit.covariance;
    out.mu = fit.region_effects;
    out.r_squared = fit.r_squared;
    out.n_regions = n;
    out.first_year = ds.first_year();
    out.ec.values = Eigen::MatrixXd::Zero(n, t_len);
    out.ec.missing =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, t_len, true);
    TransformTag tag;
    tag.kind = TransformTag::Kind::raw;
    tag.source = "ec";
    out.ec.provenance = {tag};
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < t_len; ++t) {
            const int r = i * t_len + t;
            if (!dm.usable[r]) continue;
            out.ec.values(i, t) = dm.y(r) - dm.X.row(r).dot(out.delta) - out.mu(i);
            out.ec.missing(i, t) = false;
        }
    }
    return out;
}

PedroniMemberStats pedroni_member_stats(const Eigen::VectorXd& e_raw,
                                        const BandwidthRule& rule) {
    const int t_len = static_cast<int>(e_raw.size());
    // intercept case: per-member demeaning
    Eigen::VectorXd e = e_raw.array() - e_raw.mean();

    double num = 0.0, den = 0.0;
    for (int t = 1; t < t_len; ++t) {
        num += e(t) * e(t - 1);
        den += e(t - 1) * e(t - 1);
    }
    const double gamma = den > 0.0 ? num / den : 0.0;
    Eigen::VectorXd u(t_len - 1);
    for (int t = 1; t < t_len; ++t) u(t - 1) = e(t) - gamma * e(t - 1);
    const int nu = t_len - 1;

    int b = 0;
    if (rule.kind == BandwidthRule::Kind::fixed) {
        b = std::max(0, rule.value);
    } else {
        b = static_cast<int>(std::floor(4.0 * std::pow(t_len / 100.0, 2.0 / 9.0)));
    }
    b = std::min(b, nu - 1);

    const double s2 = u.squaredNorm() / static_cast<double>(nu);
    double lrv = s2;
    for (int s = 1; s <= b; ++s) {
        double acov = 0.0;
        for (int t = s; t < nu; ++t) acov += u(t) * u(t - s);
        acov /= static_cast<double>(nu);
        lrv += 2.0 * (1.0 - static_cast<double>(s) / (b + 1.0)) * acov;
    }
    lrv = std::max(lrv, 1e-300);
    const double lambda = 0.5 * (lrv - s2);

    PedroniMemberStats ms;
    ms.bandwidth = b;
    ms.lrv = lrv;
    for (int t = 1; t < t_len; ++t) {
        ms.num += e(t - 1) * (e(t) - e(t - 1));
        ms.den += e(t - 1) * e(t - 1);
    }
    ms.num -= static_cast<double>(t_len - 1) * lambda;
    return ms;
}

CointegrationTestResult pedroni_pp_test(const LongRunEstimate& lr,
                                        const BandwidthRule& rule,
                                        const PedroniMomentTable& table,
                                        bool group_mean) {
    const int n = static_cast<int>(lr.ec.values.rows());
    const int t_all = static_cast<int>(lr.ec.values.cols());

    // common usable window across regions
    int t0 = 0, t1 = t_all - 1;
    auto all_present = [&](int t) {
        for (int i = 0; i < n; ++i) {
            if (lr.ec.missing(i, t)) return false;
        }
        return true;
    };
    while (t0 <= t1 && !all_present(t0)) ++t0;
    while (t1 >= t0 && !all_present(t1)) --t1;
    const int t_len = t1 - t0 + 1;
    if (t_len < 8) {
        fail(ErrorCode::InsufficientTimeLength,
             "usable window has " + std::to_string(t_len) + " periods, need >= 8");
    }
    for (int t = t0; t <= t1; ++t) {
        if (!all_present(t)) {
            fail(ErrorCode::InsufficientTimeLength,
                 "ec series has interior gaps in the test window");
        }
    }

    const std::string variant = group_mean ? "group_pp" : "panel_pp";
    const auto adj = table.lookup(variant, lr.standardization_regressors(), t_len);

    double sum_a = 0.0, sum_b = 0.0, sum_lrv = 0.0, sum_t = 0.0;
    int bw = 0;
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd e = lr.ec.values.row(i).segment(t0, t_len);
        const PedroniMemberStats ms = pedroni_member_stats(e, rule);
        sum_a += ms.num;
        sum_b += ms.den;
        sum_lrv += ms.lrv;
        sum_t += ms.num / std::sqrt(std::max(ms.lrv * ms.den, 1e-300));
        bw = std::max(bw, ms.bandwidth);
    }

    CointegrationTestResult out;
    out.variant = variant;
    out.bandwidth = bw;
    out.adjustment_mean = adj.mean;
    out.adjustment_variance = adj.variance;
    const double root_n = std::sqrt(static_cast<double>(n));
    if (group_mean) {
        out.raw_statistic = sum_t / root_n;
    } else {
        const double pooled_lrv = sum_lrv / static_cast<double>(n);
        out.raw_statistic = sum_a / std::sqrt(std::max(pooled_lrv * sum_b, 1e-300));
    }
    out.standardized_statistic =
        (out.raw_statistic - adj.mean * root_n) / std::sqrt(adj.variance);
    out.decision_at_5pct = out.standardized_statistic < kNormalLower5pct;
    return out;
}

PedroniMomentTable PedroniMomentTable::load(const std::string& path) {
    const CsvTable csv = read_csv(path);
    const int c_stat = csv.column("statistic");
    const int c_m = csv.column("num_regressors");
    const int c_t = csv.column("window_length");
    const int c_mean = csv.column("mean");
    const int c_var = csv.column("variance");
    if (c_stat < 0 || c_m < 0 || c_t < 0 || c_mean < 0 || c_var < 0) {
        fail(ErrorCode::MissingColumn,
             path + ": need statistic,num_regressors,window_length,mean,variance");
    }
    PedroniMomentTable table;
    for (const auto& row : csv.rows) {
        double m = 0.0, t = 0.0;
        Entry e;
        if (!parse_numeric(row[c_m], m) || !parse_numeric(row[c_t], t) ||
            !parse_numeric(row[c_mean], e.mean) || !parse_numeric(row[c_var], e.variance)) {
            fail(ErrorCode::NonNumericCell, path + ": bad row");
        }
        table.entries_[{row[c_stat], static_cast<int>(m)}][static_cast<int>(t)] = e;
    }
    return table;
}

std::string PedroniMomentTable::default_path() {
    return std::string(REGROWTH_DATA_DIR) + "/pedroni_adjustments.csv";
}

PedroniMomentTable::Entry PedroniMomentTable::lookup(const std::string& variant,
                                                     int num_regressors,
                                                     int window_length) const {
    auto it = entries_.find({variant, num_regressors});
    if (it == entries_.end() || it->second.empty()) {
        fail(ErrorCode::MissingAdjustmentConstants,
             variant + " with " + std::to_string(num_regressors) + " regressors");
    }
    const auto& by_t = it->second;
    auto exact = by_t.find(window_length);
    if (exact != by_t.end()) return exact->second;

    // interpolate in 1/T; clamp outside the tabulated range
    const int t_min = by_t.begin()->first;
    const int t_max = by_t.rbegin()->first;
    if (window_length <= t_min) return by_t.begin()->second;
    if (window_length >= t_max) return by_t.rbegin()->second;
    auto hi = by_t.lower_bound(window_length);
    auto lo = std::prev(hi);
    const double x = 1.0 / window_length;
    const double x_lo = 1.0 / lo->first;
    const double x_hi = 1.0 / hi->first;
    const double w = (x - x_lo) / (x_hi - x_lo);
    Entry e;
    e.mean = lo->second.mean + w * (hi->second.mean - lo->second.mean);
    e.variance = lo->second.variance + w * (hi->second.variance - lo->second.variance);
    return e;
}

void write_cointegration_report(const std::string& path,
                                const CointegrationTestResult& r) {
    CsvTable table;
    table.header = {"variant", "raw_statistic", "standardized_statistic",
                    "adjustment_mean", "adjustment_variance", "bandwidth",
                    "reject_no_cointegration_5pct"};
    table.rows.push_back({r.variant, format_numeric(r.raw_statistic),
                          format_numeric(r.standardized_statistic),
                          format_numeric(r.adjustment_mean),
                          format_numeric(r.adjustment_variance),
                          std::to_string(r.bandwidth),
                          r.decision_at_5pct ? "yes" : "no"});
    write_csv(path, table);
}

} // namespace regrowth
