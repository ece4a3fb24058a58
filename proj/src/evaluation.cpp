#include "regrowth/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "regrowth/errors.hpp"

namespace regrowth {

DesignMatrix build_growth_ar_benchmark(const PanelDataset& ds, int max_lag,
                                       std::optional<std::pair<int, int>> window,
                                       const std::string& response_var) {
    PanelDataset work = ds;
    TransformTag tag;
    tag.kind = TransformTag::Kind::log_diff;
    const std::string growth = "d" + response_var;
    if (!work.has_series(growth)) work = work.transform(response_var, tag, growth);
    const Series& s = work.series(growth);

    const int n = ds.n_regions();
    const int t_len = ds.n_years();
    int win_lo = ds.first_year();
    int win_hi = ds.last_year();
    if (window) {
        win_lo = std::max(win_lo, window->first);
        win_hi = std::min(win_hi, window->second);
    }

    DesignMatrix dm;
    dm.n_regions = n;
    dm.response_name = growth;
    for (int k = 1; k <= max_lag; ++k) dm.col_names.push_back("ar" + std::to_string(k));
    dm.X = Eigen::MatrixXd::Zero(n * t_len, max_lag);
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
            if (year < win_lo || year > win_hi || t < max_lag) continue;
            bool ok = !s.missing(i, t);
            for (int k = 1; k <= max_lag; ++k) {
                ok = ok && !s.missing(i, t - k);
                dm.X(r, k - 1) = s.values(i, t - k);
            }
            if (ok) {
                dm.y(r) = s.values(i, t);
                dm.usable[r] = true;
            } else {
                dm.X.row(r).setZero();
            }
        }
    }
    return dm;
}

namespace {

DesignMatrix mask_to_rows(const DesignMatrix& dm, const std::set<std::pair<int, int>>& keep) {
    DesignMatrix out = dm;
    for (int r = 0; r < out.n_rows(); ++r) {
        if (out.usable[r] && !keep.count({out.row_region[r], out.row_year[r]})) {
            out.usable[r] = false;
        }
    }
    return out;
}

double fit_rmse_pct(const FitResult& fit) {
    return 100.0 * std::sqrt(fit.residuals.squaredNorm() /
                             static_cast<double>(fit.residuals.size()));
}

} // namespace

EvalReport relative_rmse(const DesignMatrix& model_design, const std::string& model_estimator,
                         const PanelDataset& ds, int benchmark_max_lag,
                         const std::string& response_var) {
    DesignMatrix bench = build_growth_ar_benchmark(ds, benchmark_max_lag, {}, response_var);

    std::set<std::pair<int, int>> model_rows, bench_rows, common;
    for (int r = 0; r < model_design.n_rows(); ++r) {
        if (model_design.usable[r]) {
            model_rows.insert({model_design.row_region[r], model_design.row_year[r]});
        }
    }
    for (int r = 0; r < bench.n_rows(); ++r) {
        if (bench.usable[r]) bench_rows.insert({bench.row_region[r], bench.row_year[r]});
    }
    std::set_intersection(model_rows.begin(), model_rows.end(), bench_rows.begin(),
                          bench_rows.end(), std::inserter(common, common.begin()));
    if (common.empty()) {
        fail(ErrorCode::WindowMismatch, "model and benchmark share no usable rows");
    }

    const DesignMatrix model_masked = mask_to_rows(model_design, common);
    const DesignMatrix bench_masked = mask_to_rows(bench, common);

    FitResult model_fit;
    if (model_estimator == "fgls_ar1_het") {
        model_fit = fit_fgls_ar1_het(model_masked);
    } else {
        model_fit = fit_ols_fe(model_masked, false);
    }
    const FitResult bench_fit = fit_ols_fe(bench_masked, false);

    EvalReport report;
    report.r_squared = model_fit.r_squared;
    report.rmse = fit_rmse_pct(model_fit);
    report.benchmark_rmse = fit_rmse_pct(bench_fit);
    report.relative_rmse = report.rmse / report.benchmark_rmse;
    return report;
}

EvalReport evaluate_growth(const PanelDataset& ds, GrowthEstimate& estimate,
                           const LongRunEstimate* longrun,
                           const NationalSeries& national_growth_pct) {
    const DesignMatrix dm =
        build_growth_design(ds, longrun, national_growth_pct, estimate.spec);
    EvalReport report = relative_rmse(dm, estimate.spec.estimator, ds, 4,
                                      estimate.spec.response_var);
    estimate.relative_rmse = report.relative_rmse;
    return report;
}

} // namespace regrowth
