#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "regrowth/panel.hpp"

namespace regrowth {

// Stacked regression data indexed by (region, year). Rows whose response or
// any included column is missing are masked out rather than dropped, so one
// year index works across equations with different lag depths.
struct DesignMatrix {
    std::vector<int> row_region;        // region index per row
    std::vector<int> row_year;          // calendar year per row
    std::vector<std::string> col_names; // unique
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::string response_name;
    std::vector<bool> usable;
    int n_regions = 0;

    int n_rows() const { return static_cast<int>(row_region.size()); }
    int n_cols() const { return static_cast<int>(col_names.size()); }
    int n_usable() const;
    int col_index(const std::string& name) const; // -1 when absent
};

struct FitResult {
    std::vector<std::string> coef_names;
    Eigen::VectorXd coefficients;
    Eigen::MatrixXd covariance;
    // residuals on the original scale, one per usable design row
    std::vector<int> resid_region;
    std::vector<int> resid_year;
    Eigen::VectorXd residuals;
    Eigen::VectorXd fitted; // slope part + region effect
    std::string estimator_tag; // "ols_fe" or "fgls_ar1_het"
    int dof = 0;
    double r_squared = 0.0;
    std::optional<double> rho_hat;
    std::optional<Eigen::VectorXd> sigma_i; // per-region residual scale
    Eigen::VectorXd region_effects;         // mu_i for every panel region (0 when absent)
    std::vector<bool> region_present;
    bool converged = true;

    int coef_index(const std::string& name) const; // -1 when absent
    double coef(const std::string& name) const;    // throws UnknownVariable
    double std_error(const std::string& name) const;
};

struct WaldTestResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    std::string hypothesis;
};

struct FglsOptions {
    int max_iter = 100;
    double tol = 1e-8;           // max absolute coefficient change
    bool panel_specific_rho = false;
    // test hooks: pin the AR(1) coefficient and/or skip the variance weights
    std::optional<double> force_rho;
    bool force_equal_variances = false;
};

// Fixed-effects OLS via the within transformation. Region effects are
// recovered as per-region means of (response - slope part). With
// robust = true the covariance is region-clustered, otherwise classical.
FitResult fit_ols_fe(const DesignMatrix& dm, bool robust);

// Iterated feasible GLS: common AR(1) rho from the pooled lag-1 residual
// regression, Prais-Winsten quasi-differencing (first usable row of each
// region scaled by sqrt(1-rho^2)), per-region variance weights, refit until
// the coefficients move less than tol.
FitResult fit_fgls_ar1_het(const DesignMatrix& dm, const FglsOptions& opts = {});

// Wald test of pairwise equality across the named coefficient group.
WaldTestResult wald_equality(const FitResult& fit,
                             const std::vector<std::string>& coefficient_group);

// Pivot-selected maximal independent column subset after within-demeaning;
// returns kept column indices in ascending order. Used to drop lags without
// independent support before an autoregressive fit.
std::vector<int> select_independent_columns(const DesignMatrix& dm);

// Serialization of a fitted model: coefficient table and machine report.
void write_fit_csv(const std::string& path, const FitResult& fit);
std::string fit_to_json(const FitResult& fit);

} // namespace regrowth
