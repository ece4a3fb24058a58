#pragma once

// Shared fixtures and independent oracles for the unit and acceptance
// suites. Oracles intentionally re-derive results through a different
// computational route than the library (explicit dummy regressions, direct
// recursion), so agreement is evidence rather than tautology.

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "regrowth/estimators.hpp"
#include "regrowth/longrun.hpp"
#include "regrowth/panel.hpp"
#include "regrowth/stats.hpp"

namespace testsup {

// Builds a stacked design from per-row data; all rows usable.
inline regrowth::DesignMatrix make_design(const std::vector<int>& region,
                                          const std::vector<int>& year,
                                          const Eigen::MatrixXd& x,
                                          const Eigen::VectorXd& y,
                                          const std::vector<std::string>& names,
                                          int n_regions) {
    regrowth::DesignMatrix dm;
    dm.row_region = region;
    dm.row_year = year;
    dm.col_names = names;
    dm.X = x;
    dm.y = y;
    dm.response_name = "y";
    dm.usable.assign(region.size(), true);
    dm.n_regions = n_regions;
    return dm;
}

// Random panel regression data: y = x'beta + mu_region + noise.
struct RandomPanel {
    regrowth::DesignMatrix dm;
    Eigen::VectorXd beta;
    std::vector<double> mu;
};

inline RandomPanel random_panel(regrowth::Rng& rng, int n_regions, int n_years, int k,
                                double noise_sd) {
    RandomPanel out;
    out.beta = Eigen::VectorXd::Zero(k);
    for (int j = 0; j < k; ++j) out.beta(j) = rng.normal(0.0, 1.0);
    out.mu.resize(n_regions);
    for (int i = 0; i < n_regions; ++i) out.mu[i] = rng.normal(0.0, 1.0);

    const int rows = n_regions * n_years;
    std::vector<int> region(rows), year(rows);
    Eigen::MatrixXd x(rows, k);
    Eigen::VectorXd y(rows);
    for (int i = 0; i < n_regions; ++i) {
        for (int t = 0; t < n_years; ++t) {
            const int r = i * n_years + t;
            region[r] = i;
            year[r] = 2000 + t;
            for (int j = 0; j < k; ++j) x(r, j) = rng.normal();
            y(r) = x.row(r).dot(out.beta) + out.mu[i] + rng.normal(0.0, noise_sd);
        }
    }
    std::vector<std::string> names;
    for (int j = 0; j < k; ++j) names.push_back("x" + std::to_string(j));
    out.dm = make_design(region, year, x, y, names, n_regions);
    return out;
}

// Long-run estimate assembled from known coefficients: ec built directly
// from delta with region effects recovered as means. Bypasses the fitted
// first stage for exact-identification checks.
inline regrowth::LongRunEstimate longrun_from_truth(
    const regrowth::PanelDataset& ds, const std::map<std::string, double>& delta,
    const std::vector<std::string>& regressors, const std::string& gdp_var = "gdp") {
    const int n = ds.n_regions();
    const int t_len = ds.n_years();
    regrowth::LongRunEstimate lr;
    lr.regressors = regressors;
    lr.delta.resize(static_cast<int>(regressors.size()));
    for (std::size_t j = 0; j < regressors.size(); ++j) {
        lr.delta(static_cast<int>(j)) = delta.at(regressors[j]);
    }
    lr.n_regions = n;
    lr.first_year = ds.first_year();
    lr.mu.resize(n);
    lr.ec.values = Eigen::MatrixXd::Zero(n, t_len);
    lr.ec.missing =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, t_len, false);
    for (int i = 0; i < n; ++i) {
        double mu = 0.0;
        for (int t = 0; t < t_len; ++t) {
            double v = std::log(ds.value(gdp_var, i, t));
            for (std::size_t j = 0; j < regressors.size(); ++j) {
                v -= lr.delta(static_cast<int>(j)) * std::log(ds.value(regressors[j], i, t));
            }
            lr.ec.values(i, t) = v;
            mu += v;
        }
        mu /= t_len;
        lr.mu(i) = mu;
        for (int t = 0; t < t_len; ++t) lr.ec.values(i, t) -= mu;
    }
    return lr;
}

// Oracle: pooled OLS with explicit region dummies, solved via the normal
// equations. Returns the slope subvector.
inline Eigen::VectorXd dummy_ols_slopes(const regrowth::DesignMatrix& dm) {
    std::vector<int> rows;
    for (int r = 0; r < dm.n_rows(); ++r) {
        if (dm.usable[r]) rows.push_back(r);
    }
    const int n = static_cast<int>(rows.size());
    const int k = dm.n_cols();
    const int g = dm.n_regions;
    Eigen::MatrixXd x(n, k + g);
    Eigen::VectorXd y(n);
    x.setZero();
    for (int a = 0; a < n; ++a) {
        const int r = rows[a];
        x.block(a, 0, 1, k) = dm.X.row(r);
        x(a, k + dm.row_region[r]) = 1.0;
        y(a) = dm.y(r);
    }
    const Eigen::MatrixXd xtx = x.transpose() * x;
    const Eigen::VectorXd xty = x.transpose() * y;
    const Eigen::VectorXd full = xtx.ldlt().solve(xty);
    return full.head(k);
}

} // namespace testsup
