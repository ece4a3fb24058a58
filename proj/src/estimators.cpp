#include "regrowth/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "regrowth/csv.hpp"
#include "regrowth/errors.hpp"
#include "regrowth/stats.hpp"

namespace regrowth {

int DesignMatrix::n_usable() const {
    return static_cast<int>(std::count(usable.begin(), usable.end(), true));
}

int DesignMatrix::col_index(const std::string& name) const {
    for (std::size_t j = 0; j < col_names.size(); ++j) {
        if (col_names[j] == name) return static_cast<int>(j);
    }
    return -1;
}

int FitResult::coef_index(const std::string& name) const {
    for (std::size_t j = 0; j < coef_names.size(); ++j) {
        if (coef_names[j] == name) return static_cast<int>(j);
    }
    return -1;
}

double FitResult::coef(const std::string& name) const {
    const int j = coef_index(name);
    if (j < 0) fail(ErrorCode::UnknownVariable, "coefficient " + name);
    return coefficients(j);
}

double FitResult::std_error(const std::string& name) const {
    const int j = coef_index(name);
    if (j < 0) fail(ErrorCode::UnknownVariable, "coefficient " + name);
    return std::sqrt(std::max(0.0, covariance(j, j)));
}

namespace {

struct CompactData {
    // usable rows only, ordered by (region, year)
    std::vector<int> region;
    std::vector<int> year;
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<int> group_start; // per present region: first row
    std::vector<int> group_size;
    std::vector<int> group_region;
};

CompactData compact_usable(const DesignMatrix& dm, int min_rows_per_region) {
    std::vector<int> order;
    for (int r = 0; r < dm.n_rows(); ++r) {
        if (dm.usable[r]) order.push_back(r);
    }
    if (order.empty()) fail(ErrorCode::TooFewObservations, "no usable rows");
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (dm.row_region[a] != dm.row_region[b]) return dm.row_region[a] < dm.row_region[b];
        return dm.row_year[a] < dm.row_year[b];
    });

    CompactData cd;
    const int n = static_cast<int>(order.size());
    cd.X.resize(n, dm.n_cols());
    cd.y.resize(n);
    cd.region.resize(n);
    cd.year.resize(n);
    for (int k = 0; k < n; ++k) {
        const int r = order[k];
        cd.X.row(k) = dm.X.row(r);
        cd.y(k) = dm.y(r);
        cd.region[k] = dm.row_region[r];
        cd.year[k] = dm.row_year[r];
    }
    int k = 0;
    while (k < n) {
        int j = k;
        while (j < n && cd.region[j] == cd.region[k]) ++j;
        cd.group_start.push_back(k);
        cd.group_size.push_back(j - k);
        cd.group_region.push_back(cd.region[k]);
        if (j - k < min_rows_per_region) {
            fail(ErrorCode::TooFewObservations,
                 "region index " + std::to_string(cd.region[k]) + " has " +
                     std::to_string(j - k) + " usable rows");
        }
        k = j;
    }
    return cd;
}

// Column-pivoted QR rank check; names the pivot-rejected columns.
void check_rank(const Eigen::MatrixXd& X, const std::vector<std::string>& names) {
    if (X.cols() == 0) return;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    if (rank < X.cols()) {
        const auto& perm = qr.colsPermutation().indices();
        std::string bad;
        for (int j = rank; j < X.cols(); ++j) {
            if (!bad.empty()) bad += ", ";
            bad += names[perm(j)];
        }
        fail(ErrorCode::RankDeficient, bad);
    }
}

Eigen::VectorXd solve_ls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const std::vector<std::string>& names) {
    if (X.cols() == 0) return Eigen::VectorXd(0);
    check_rank(X, names);
    return Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(X).solve(y);
}

double corr_squared(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double ma = a.mean();
    const double mb = b.mean();
    const Eigen::VectorXd da = a.array() - ma;
    const Eigen::VectorXd db = b.array() - mb;
    const double num = da.dot(db);
    const double den = std::sqrt(da.squaredNorm() * db.squaredNorm());
    if (den <= 0.0) return 0.0;
    const double r = num / den;
    return r * r;
}

} // namespace

FitResult fit_ols_fe(const DesignMatrix& dm, bool robust) {
    CompactData cd = compact_usable(dm, 2);
    const int n = static_cast<int>(cd.y.size());
    const int k = dm.n_cols();
    const int n_groups = static_cast<int>(cd.group_start.size());

    // within transformation
    Eigen::MatrixXd Xd = cd.X;
    Eigen::VectorXd yd = cd.y;
    for (int g = 0; g < n_groups; ++g) {
        const int s = cd.group_start[g];
        const int m = cd.group_size[g];
        const Eigen::RowVectorXd xm = cd.X.middleRows(s, m).colwise().mean();
        const double ym = cd.y.segment(s, m).mean();
        Xd.middleRows(s, m).rowwise() -= xm;
        yd.segment(s, m).array() -= ym;
    }

    const Eigen::VectorXd beta = solve_ls(Xd, yd, dm.col_names);
    const Eigen::VectorXd resid = yd - Xd * beta; // within residuals == original residuals

    const int dof = n - k - n_groups;
    if (dof <= 0) fail(ErrorCode::TooFewObservations, "nonpositive degrees of freedom");

    const Eigen::MatrixXd xtx_inv =
        (Xd.transpose() * Xd).ldlt().solve(Eigen::MatrixXd::Identity(k, k));

    Eigen::MatrixXd cov;
    if (robust) {
        // region-clustered sandwich with the usual small-sample factor
        Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
        for (int g = 0; g < n_groups; ++g) {
            const int s = cd.group_start[g];
            const int m = cd.group_size[g];
            const Eigen::VectorXd score = Xd.middleRows(s, m).transpose() * resid.segment(s, m);
            meat += score * score.transpose();
        }
        const double c = (static_cast<double>(n_groups) / (n_groups - 1.0)) *
                         ((n - 1.0) / static_cast<double>(dof));
        cov = c * xtx_inv * meat * xtx_inv;
    } else {
        const double sigma2 = resid.squaredNorm() / static_cast<double>(dof);
        cov = sigma2 * xtx_inv;
    }

    FitResult out;
    out.coef_names = dm.col_names;
    out.coefficients = beta;
    out.covariance = 0.5 * (cov + cov.transpose());
    out.estimator_tag = "ols_fe";
    out.dof = dof;
    out.resid_region = cd.region;
    out.resid_year = cd.year;
    out.residuals = resid;
    out.region_effects = Eigen::VectorXd::Zero(dm.n_regions);
    out.region_present.assign(dm.n_regions, false);
    for (int g = 0; g < n_groups; ++g) {
        const int s = cd.group_start[g];
        const int m = cd.group_size[g];
        const double mu =
            (cd.y.segment(s, m) - cd.X.middleRows(s, m) * beta).mean();
        out.region_effects(cd.group_region[g]) = mu;
        out.region_present[cd.group_region[g]] = true;
    }
    out.fitted.resize(n);
    for (int r = 0; r < n; ++r) {
        out.fitted(r) = cd.X.row(r).dot(beta) + out.region_effects(cd.region[r]);
    }
    out.r_squared = corr_squared(out.fitted, cd.y);
    return out;
}

FitResult fit_fgls_ar1_het(const DesignMatrix& dm, const FglsOptions& opts) {
    CompactData cd = compact_usable(dm, 4);
    const int n = static_cast<int>(cd.y.size());
    const int k = dm.n_cols();
    const int n_groups = static_cast<int>(cd.group_start.size());
    const int k_total = k + n_groups;

    // region dummies travel through the quasi-differencing with the data
    auto dummy_names = [&]() {
        std::vector<std::string> names = dm.col_names;
        for (int g = 0; g < n_groups; ++g) {
            names.push_back("mu_" + std::to_string(cd.group_region[g]));
        }
        return names;
    }();

    FitResult init = fit_ols_fe(dm, false);
    Eigen::VectorXd beta = init.coefficients;
    Eigen::VectorXd mu(n_groups);
    for (int g = 0; g < n_groups; ++g) mu(g) = init.region_effects(cd.group_region[g]);

    auto residuals_at = [&](const Eigen::VectorXd& b, const Eigen::VectorXd& m) {
        Eigen::VectorXd e(n);
        for (int g = 0; g < n_groups; ++g) {
            const int s = cd.group_start[g];
            const int len = cd.group_size[g];
            e.segment(s, len) =
                cd.y.segment(s, len) - cd.X.middleRows(s, len) * b -
                Eigen::VectorXd::Constant(len, m(g));
        }
        return e;
    };

    double rho = 0.0;
    std::vector<double> rho_by_group(n_groups, 0.0);
    Eigen::VectorXd sigma = Eigen::VectorXd::Ones(n_groups);
    Eigen::VectorXd sigma_raw = Eigen::VectorXd::Ones(n_groups);
    Eigen::MatrixXd Xt(n, k_total);
    Eigen::VectorXd yt(n);
    Eigen::MatrixXd cov_full;
    double s2 = 1.0;
    bool converged = false;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        const Eigen::VectorXd e = residuals_at(beta, mu);

        // pooled lag-1 residual regression over within-region consecutive years
        if (opts.force_rho) {
            rho = *opts.force_rho;
            std::fill(rho_by_group.begin(), rho_by_group.end(), rho);
        } else {
            // an (almost) exact fit carries no autocorrelation information
            const double den_floor = 1e-20 * std::max(1.0, cd.y.squaredNorm());
            double num_all = 0.0, den_all = 0.0;
            for (int g = 0; g < n_groups; ++g) {
                double num = 0.0, den = 0.0;
                const int s = cd.group_start[g];
                const int len = cd.group_size[g];
                for (int r = 1; r < len; ++r) {
                    if (cd.year[s + r] != cd.year[s + r - 1] + 1) continue;
                    num += e(s + r) * e(s + r - 1);
                    den += e(s + r - 1) * e(s + r - 1);
                }
                rho_by_group[g] = den > den_floor ? std::clamp(num / den, -0.98, 0.98) : 0.0;
                num_all += num;
                den_all += den;
            }
            rho = den_all > den_floor ? std::clamp(num_all / den_all, -0.98, 0.98) : 0.0;
            if (!opts.panel_specific_rho) {
                std::fill(rho_by_group.begin(), rho_by_group.end(), rho);
            }
        }

        // Prais-Winsten quasi-differencing; a gap in usable years restarts the run
        for (int g = 0; g < n_groups; ++g) {
            const double rg = rho_by_group[g];
            const double head = std::sqrt(1.0 - rg * rg);
            const int s = cd.group_start[g];
            const int len = cd.group_size[g];
            for (int r = 0; r < len; ++r) {
                const bool run_start = (r == 0) || (cd.year[s + r] != cd.year[s + r - 1] + 1);
                Eigen::RowVectorXd xrow = Eigen::RowVectorXd::Zero(k_total);
                double yv;
                if (run_start) {
                    xrow.head(k) = head * cd.X.row(s + r);
                    xrow(k + g) = head;
                    yv = head * cd.y(s + r);
                } else {
                    xrow.head(k) = cd.X.row(s + r) - rg * cd.X.row(s + r - 1);
                    xrow(k + g) = 1.0 - rg;
                    yv = cd.y(s + r) - rg * cd.y(s + r - 1);
                }
                Xt.row(s + r) = xrow;
                yt(s + r) = yv;
            }
        }

        // per-region residual scale of the quasi-differenced system
        if (opts.force_equal_variances) {
            sigma.setOnes();
        } else {
            Eigen::VectorXd full(k_total);
            full.head(k) = beta;
            full.tail(n_groups) = mu;
            for (int g = 0; g < n_groups; ++g) {
                const int s = cd.group_start[g];
                const int len = cd.group_size[g];
                const Eigen::VectorXd u =
                    yt.segment(s, len) - Xt.middleRows(s, len) * full;
                sigma(g) = std::sqrt(u.squaredNorm() / static_cast<double>(len));
            }
            sigma_raw = sigma;
            // scale-free weights: only relative variances matter, and the
            // normalization keeps an exact-fit system well conditioned
            const double s_mean = sigma.mean();
            const double y_scale = std::sqrt(cd.y.squaredNorm() / n);
            if (!(s_mean > 1e-12 * std::max(1.0, y_scale)) || !std::isfinite(s_mean)) {
                sigma.setOnes();
            } else {
                sigma /= s_mean;
                sigma = sigma.cwiseMax(1e-8);
            }
        }

        // weighted refit
        Eigen::MatrixXd Xw = Xt;
        Eigen::VectorXd yw = yt;
        for (int g = 0; g < n_groups; ++g) {
            const int s = cd.group_start[g];
            const int len = cd.group_size[g];
            Xw.middleRows(s, len) /= sigma(g);
            yw.segment(s, len) /= sigma(g);
        }
        const Eigen::VectorXd full_new = solve_ls(Xw, yw, dummy_names);
        const Eigen::VectorXd beta_new = full_new.head(k);
        const Eigen::VectorXd mu_new = full_new.tail(n_groups);

        const double delta = (beta_new - beta).cwiseAbs().maxCoeff();
        beta = beta_new;
        mu = mu_new;

        const Eigen::VectorXd uw = yw - Xw * full_new;
        const int dof_t = n - k_total;
        s2 = uw.squaredNorm() / static_cast<double>(std::max(dof_t, 1));
        cov_full = s2 * (Xw.transpose() * Xw)
                            .ldlt()
                            .solve(Eigen::MatrixXd::Identity(k_total, k_total));

        if (delta < opts.tol) {
            converged = true;
            break;
        }
    }

    FitResult out;
    out.coef_names = dm.col_names;
    out.coefficients = beta;
    out.covariance = 0.5 * (cov_full.topLeftCorner(k, k) +
                            cov_full.topLeftCorner(k, k).transpose());
    out.estimator_tag = "fgls_ar1_het";
    out.dof = n - k_total;
    out.rho_hat = rho;
    Eigen::VectorXd sig_report = Eigen::VectorXd::Zero(dm.n_regions);
    for (int g = 0; g < n_groups; ++g) sig_report(cd.group_region[g]) = sigma_raw(g);
    out.sigma_i = sig_report;
    out.converged = converged;
    out.resid_region = cd.region;
    out.resid_year = cd.year;
    out.residuals = residuals_at(beta, mu);
    out.region_effects = Eigen::VectorXd::Zero(dm.n_regions);
    out.region_present.assign(dm.n_regions, false);
    for (int g = 0; g < n_groups; ++g) {
        out.region_effects(cd.group_region[g]) = mu(g);
        out.region_present[cd.group_region[g]] = true;
    }
    out.fitted.resize(n);
    for (int r = 0; r < n; ++r) {
        out.fitted(r) = cd.X.row(r).dot(beta) + out.region_effects(cd.region[r]);
    }
    out.r_squared = corr_squared(out.fitted, cd.y);
    return out;
}

std::vector<int> select_independent_columns(const DesignMatrix& dm) {
    CompactData cd = compact_usable(dm, 2);
    const int n_groups = static_cast<int>(cd.group_start.size());
    Eigen::MatrixXd Xd = cd.X;
    for (int g = 0; g < n_groups; ++g) {
        const int s = cd.group_start[g];
        const int m = cd.group_size[g];
        const Eigen::RowVectorXd xm = cd.X.middleRows(s, m).colwise().mean();
        Xd.middleRows(s, m).rowwise() -= xm;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xd);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    const auto& perm = qr.colsPermutation().indices();
    std::vector<int> keep;
    for (int j = 0; j < rank; ++j) keep.push_back(perm(j));
    std::sort(keep.begin(), keep.end());
    return keep;
}

WaldTestResult wald_equality(const FitResult& fit,
                             const std::vector<std::string>& coefficient_group) {
    const int g = static_cast<int>(coefficient_group.size());
    if (g < 2) {
        fail(ErrorCode::TestInapplicable,
             "equality test needs at least two coefficients, got " + std::to_string(g));
    }
    std::vector<int> idx;
    for (const auto& name : coefficient_group) {
        const int j = fit.coef_index(name);
        if (j < 0) fail(ErrorCode::UnknownVariable, "coefficient " + name);
        idx.push_back(j);
    }
    const int q = g - 1;
    const int k = static_cast<int>(fit.coefficients.size());
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(q, k);
    for (int r = 0; r < q; ++r) {
        R(r, idx[0]) = 1.0;
        R(r, idx[r + 1]) = -1.0;
    }
    const Eigen::VectorXd rb = R * fit.coefficients;
    const Eigen::MatrixXd S = R * fit.covariance * R.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
        fail(ErrorCode::SingularRestrictionCovariance,
             "restriction covariance is singular (rank " + std::to_string(lu.rank()) + "/" +
                 std::to_string(q) + ")");
    }
    WaldTestResult out;
    out.statistic = rb.dot(lu.solve(rb));
    out.dof = q;
    out.p_value = chi_square_sf(out.statistic, out.dof);
    std::ostringstream h;
    h << "equal coefficients:";
    for (const auto& name : coefficient_group) h << ' ' << name;
    out.hypothesis = h.str();
    return out;
}

void write_fit_csv(const std::string& path, const FitResult& fit) {
    CsvTable table;
    table.header = {"name", "estimate", "std_error", "t_stat", "p_value"};
    for (std::size_t j = 0; j < fit.coef_names.size(); ++j) {
        const double b = fit.coefficients(static_cast<int>(j));
        const double se = std::sqrt(std::max(0.0, fit.covariance(static_cast<int>(j), static_cast<int>(j))));
        const double t = se > 0.0 ? b / se : 0.0;
        const double p = se > 0.0 ? student_t_pvalue(t, fit.dof) : 1.0;
        table.rows.push_back({fit.coef_names[j], format_numeric(b), format_numeric(se),
                              format_numeric(t), format_numeric(p)});
    }
    write_csv(path, table);
}

std::string fit_to_json(const FitResult& fit) {
    nlohmann::ordered_json j;
    j["estimator"] = fit.estimator_tag;
    j["dof"] = fit.dof;
    j["r_squared"] = fit.r_squared;
    j["converged"] = fit.converged;
    if (fit.rho_hat) j["rho_hat"] = *fit.rho_hat;
    nlohmann::ordered_json coefs = nlohmann::ordered_json::object();
    nlohmann::ordered_json ses = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < fit.coef_names.size(); ++c) {
        coefs[fit.coef_names[c]] = fit.coefficients(static_cast<int>(c));
        ses[fit.coef_names[c]] =
            std::sqrt(std::max(0.0, fit.covariance(static_cast<int>(c), static_cast<int>(c))));
    }
    j["coefficients"] = coefs;
    j["std_errors"] = ses;
    nlohmann::ordered_json effects = nlohmann::ordered_json::object();
    for (int i = 0; i < fit.region_effects.size(); ++i) {
        if (fit.region_present[i]) effects[std::to_string(i)] = fit.region_effects(i);
    }
    j["region_effects"] = effects;
    return j.dump(2);
}

} // namespace regrowth
