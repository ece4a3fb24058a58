#include "regrowth/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "regrowth/errors.hpp"
#include "regrowth/stats.hpp"

namespace regrowth {

namespace {

// spectral radius of the companion matrix of x^p - c_1 x^{p-1} - ... - c_p
double companion_radius(const std::vector<double>& coefs) {
    const int p = static_cast<int>(coefs.size());
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p, p);
    for (int j = 0; j < p; ++j) comp(0, j) = coefs[j];
    for (int i = 1; i < p; ++i) comp(i, i - 1) = 1.0;
    const auto eigs = Eigen::EigenSolver<Eigen::MatrixXd>(comp, false).eigenvalues();
    double radius = 0.0;
    for (int i = 0; i < p; ++i) radius = std::max(radius, std::abs(eigs(i)));
    return radius;
}

} // namespace

void DGPConfig::validate() const {
    if (n_regions < 2 || n_years < 12) {
        fail(ErrorCode::UnstableConfig, "panel must have >= 2 regions and >= 12 years");
    }
    if (!(phi > -1.0 && phi < 0.0)) {
        fail(ErrorCode::UnstableConfig, "phi must lie in (-1, 0)");
    }
    if (ec_lag < 1) fail(ErrorCode::UnstableConfig, "ec lag must be >= 1");
    // gap recursion gap_t = gap_{t-1} + phi gap_{t-ec_lag} + noise
    std::vector<double> gap_coefs(ec_lag, 0.0);
    gap_coefs[0] = 1.0;
    gap_coefs[ec_lag - 1] += phi;
    if (companion_radius(gap_coefs) >= 1.0 - 1e-9) {
        fail(ErrorCode::UnstableConfig, "error-correction dynamics are explosive");
    }
    for (const AuxTruth* aux : {&aux_rd_exp_bus, &aux_rd_exp_pub, &aux_patent}) {
        std::vector<double> c(4, 0.0);
        c[2] = aux->ar3;
        c[3] = aux->ar4;
        if (companion_radius(c) >= 1.0 - 1e-9) {
            fail(ErrorCode::UnstableConfig, "auxiliary AR roots are explosive");
        }
        if (aux->noise_sd < 0.0) fail(ErrorCode::UnstableConfig, "negative aux noise scale");
    }
    if (std::abs(eps_ar1) >= 1.0) fail(ErrorCode::UnstableConfig, "growth shock AR(1) unstable");
    if (std::abs(national_cycle_ar1) >= 1.0) {
        fail(ErrorCode::UnstableConfig, "national cycle AR(1) unstable");
    }
    if (z_shock_sd <= 0.0 || bf_shock_sd <= 0.0 || national_cycle_sd <= 0.0) {
        fail(ErrorCode::UnstableConfig, "driver volatilities must be positive");
    }
    if (eps_sd < 0.0 || gap0_sd < 0.0) {
        fail(ErrorCode::UnstableConfig, "negative noise scale");
    }
    for (double v : funding_change_2020_pct) {
        if (v <= -100.0) fail(ErrorCode::UnstableConfig, "funding change below -100%");
    }
    for (double s : disruptive_share_2020) {
        if (s < 0.0 || s > 1.0) fail(ErrorCode::UnstableConfig, "disruptive share outside [0,1]");
    }
}

DGPConfig DGPConfig::preset(const std::string& name, std::uint64_t seed) {
    DGPConfig cfg;
    cfg.seed = seed;
    if (name == "finland_like") {
        cfg.preset_name = "finland_like";
        cfg.eps_sd = 0.016;
        cfg.z_shock_sd = 0.06;
        cfg.aux_rd_exp_bus = {0.203, 0.203, 0.004, -0.064, 0.048, 0.15, -0.25, 0.70};
        cfg.aux_rd_exp_pub = {0.2225, 0.2225, -0.019, 0.172, 0.058, 0.12, -0.85, 0.60};
        cfg.aux_patent = {0.0515, 0.0515, 0.113, 0.373, -0.001, 0.30, -1.70, 0.80};
        // 2020 funding surge: most regions between +50% and +160%, two regions
        // with flat totals but heavy substitution toward the new program
        cfg.funding_change_2020_pct = {135, 95, 120, 60, 130, 85, 110, 125, 55,
                                       100, 130, 75, 135, 90, 65, 120, 20, 35};
        cfg.disruptive_share_2020 = {0.80, 0.75, 0.78, 0.70, 0.85, 0.72, 0.80, 0.82, 0.65,
                                     0.76, 0.84, 0.70, 0.88, 0.74, 0.68, 0.80, 0.95, 0.92};
    } else if (name == "minimal") {
        cfg.preset_name = "minimal";
        cfg.n_regions = 4;
        cfg.first_year = 2003;
        cfg.n_years = 16;
        cfg.lambda_mean = 1.0;
        cfg.lambda_spread = 0.0;
        cfg.aux_rd_exp_bus = {0.2, 0.2, 0.0, 0.0, 0.05, 0.10, -0.25, 0.3};
        cfg.aux_rd_exp_pub = {0.2, 0.2, 0.0, 0.0, 0.05, 0.10, -0.85, 0.3};
        cfg.aux_patent = {0.1, 0.1, 0.0, 0.0, 0.0, 0.20, -1.70, 0.3};
        cfg.funding_change_2020_pct = {120, 60, 100, 30};
        cfg.disruptive_share_2020 = {0.8, 0.7, 0.75, 0.9};
    } else {
        fail(ErrorCode::ConfigError, "unknown DGP preset " + name);
    }
    return cfg;
}

namespace {

using nlohmann::json;

void aux_from_json(const json& j, DGPConfig::AuxTruth& a) {
    a.ar3 = j.at("ar3");
    a.ar4 = j.at("ar4");
    a.c_gfcf = j.at("c_gfcf");
    a.c_unemp = j.at("c_unemp");
    a.c_bf = j.at("c_bf");
    a.noise_sd = j.at("noise_sd");
    a.target_log_mean = j.at("target_log_mean");
    a.region_sd = j.at("region_sd");
}

} // namespace

DGPConfig DGPConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorCode::ConfigError, path + ": " + e.what());
    }
    DGPConfig cfg;
    if (j.contains("base")) cfg = preset(j.at("base"), 1);
    cfg.preset_name = j.value("name", cfg.preset_name);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.n_regions = j.value("n_regions", cfg.n_regions);
    cfg.first_year = j.value("first_year", cfg.first_year);
    cfg.n_years = j.value("n_years", cfg.n_years);
    cfg.beta_dgfcf = j.value("beta_dgfcf", cfg.beta_dgfcf);
    cfg.beta_dunemp = j.value("beta_dunemp", cfg.beta_dunemp);
    cfg.beta_rd_exp_bus = j.value("beta_rd_exp_bus", cfg.beta_rd_exp_bus);
    cfg.beta_rd_exp_pub = j.value("beta_rd_exp_pub", cfg.beta_rd_exp_pub);
    cfg.beta_patent = j.value("beta_patent", cfg.beta_patent);
    cfg.beta_bf = j.value("beta_bf", cfg.beta_bf);
    cfg.phi = j.value("phi", cfg.phi);
    cfg.ec_lag = j.value("ec_lag", cfg.ec_lag);
    cfg.lambda_mean = j.value("lambda_mean", cfg.lambda_mean);
    cfg.lambda_spread = j.value("lambda_spread", cfg.lambda_spread);
    cfg.lambda_random = j.value("lambda_random", cfg.lambda_random);
    cfg.eps_sd = j.value("eps_sd", cfg.eps_sd);
    cfg.eps_ar1 = j.value("eps_ar1", cfg.eps_ar1);
    cfg.eps_het = j.value("eps_het", cfg.eps_het);
    cfg.delta_gfcf = j.value("delta_gfcf", cfg.delta_gfcf);
    cfg.delta_highedu = j.value("delta_highedu", cfg.delta_highedu);
    cfg.delta_unemp = j.value("delta_unemp", cfg.delta_unemp);
    cfg.delta_patstock = j.value("delta_patstock", cfg.delta_patstock);
    cfg.delta_rd_per_bus = j.value("delta_rd_per_bus", cfg.delta_rd_per_bus);
    cfg.delta_rd_per_pub = j.value("delta_rd_per_pub", cfg.delta_rd_per_pub);
    cfg.gap0_sd = j.value("gap0_sd", cfg.gap0_sd);
    cfg.z_shock_sd = j.value("z_shock_sd", cfg.z_shock_sd);
    cfg.bf_shock_sd = j.value("bf_shock_sd", cfg.bf_shock_sd);
    cfg.national_cycle_sd = j.value("national_cycle_sd", cfg.national_cycle_sd);
    cfg.national_cycle_mean = j.value("national_cycle_mean", cfg.national_cycle_mean);
    cfg.national_cycle_ar1 = j.value("national_cycle_ar1", cfg.national_cycle_ar1);
    if (j.contains("aux_rd_exp_bus")) aux_from_json(j.at("aux_rd_exp_bus"), cfg.aux_rd_exp_bus);
    if (j.contains("aux_rd_exp_pub")) aux_from_json(j.at("aux_rd_exp_pub"), cfg.aux_rd_exp_pub);
    if (j.contains("aux_patent")) aux_from_json(j.at("aux_patent"), cfg.aux_patent);
    if (j.contains("funding_change_2020_pct")) {
        cfg.funding_change_2020_pct =
            j.at("funding_change_2020_pct").get<std::vector<double>>();
    }
    if (j.contains("disruptive_share_2020")) {
        cfg.disruptive_share_2020 = j.at("disruptive_share_2020").get<std::vector<double>>();
    }
    return cfg;
}

std::string DGPConfig::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = preset_name;
    j["seed"] = seed;
    j["n_regions"] = n_regions;
    j["first_year"] = first_year;
    j["n_years"] = n_years;
    j["beta_dgfcf"] = beta_dgfcf;
    j["beta_dunemp"] = beta_dunemp;
    j["beta_rd_exp_bus"] = beta_rd_exp_bus;
    j["beta_rd_exp_pub"] = beta_rd_exp_pub;
    j["beta_patent"] = beta_patent;
    j["beta_bf"] = beta_bf;
    j["phi"] = phi;
    j["ec_lag"] = ec_lag;
    j["lambda_mean"] = lambda_mean;
    j["lambda_spread"] = lambda_spread;
    j["lambda_random"] = lambda_random;
    j["eps_sd"] = eps_sd;
    j["eps_ar1"] = eps_ar1;
    j["eps_het"] = eps_het;
    j["delta_gfcf"] = delta_gfcf;
    j["delta_highedu"] = delta_highedu;
    j["delta_unemp"] = delta_unemp;
    j["delta_patstock"] = delta_patstock;
    j["delta_rd_per_bus"] = delta_rd_per_bus;
    j["delta_rd_per_pub"] = delta_rd_per_pub;
    j["gap0_sd"] = gap0_sd;
    j["z_shock_sd"] = z_shock_sd;
    j["bf_shock_sd"] = bf_shock_sd;
    j["national_cycle_sd"] = national_cycle_sd;
    j["national_cycle_mean"] = national_cycle_mean;
    j["national_cycle_ar1"] = national_cycle_ar1;
    auto aux_json = [](const AuxTruth& a) {
        return nlohmann::ordered_json{
            {"ar3", a.ar3},           {"ar4", a.ar4},
            {"c_gfcf", a.c_gfcf},     {"c_unemp", a.c_unemp},
            {"c_bf", a.c_bf},         {"noise_sd", a.noise_sd},
            {"target_log_mean", a.target_log_mean}, {"region_sd", a.region_sd}};
    };
    j["aux_rd_exp_bus"] = aux_json(aux_rd_exp_bus);
    j["aux_rd_exp_pub"] = aux_json(aux_rd_exp_pub);
    j["aux_patent"] = aux_json(aux_patent);
    j["funding_change_2020_pct"] = funding_change_2020_pct;
    j["disruptive_share_2020"] = disruptive_share_2020;
    return j.dump(2);
}

namespace {

struct ZSpec {
    const char* name;
    double drift;
    double target_mean;
    double region_sd;
};

} // namespace

SyntheticWorld generate_panel(const DGPConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    const int n = cfg.n_regions;
    const int pre = 9;                       // warm-up years before the panel
    const int extra = 2;                     // true values past the panel end
    const int t_total = pre + cfg.n_years + extra;
    const int panel0 = pre;                  // internal index of the first panel year
    const int year0 = cfg.first_year - pre;
    const int last_panel = panel0 + cfg.n_years - 1;
    auto year_of = [&](int t) { return year0 + t; };

    // --- national cycle (fraction units) -------------------------------
    std::vector<double> g(t_total + 1, cfg.national_cycle_mean);
    for (int t = 1; t <= t_total; ++t) {
        g[t] = cfg.national_cycle_mean +
               cfg.national_cycle_ar1 * (g[t - 1] - cfg.national_cycle_mean) +
               rng.normal(0.0, cfg.national_cycle_sd);
    }
    // crisis shape for the two post-panel years
    g[last_panel + 1] = 0.011;
    g[last_panel + 2] = -0.018;

    // --- region heterogeneity -------------------------------------------
    std::vector<double> lambda(n);
    for (int i = 0; i < n; ++i) {
        if (cfg.lambda_random) {
            lambda[i] = cfg.lambda_mean + cfg.lambda_spread * (2.0 * rng.uniform() - 1.0);
        } else if (n == 1) {
            lambda[i] = cfg.lambda_mean;
        } else {
            lambda[i] = cfg.lambda_mean - cfg.lambda_spread +
                        2.0 * cfg.lambda_spread * i / (n - 1.0);
        }
    }
    std::vector<double> empl_size(n);
    for (int i = 0; i < n; ++i) empl_size[i] = rng.normal(0.0, 0.8);

    // --- exogenous level series (log space) ------------------------------
    // Drifts vary across regions; without that the six trends would be
    // collinear and the long-run coefficients unidentified.
    const ZSpec z_specs[] = {
        {"gfcf", 0.030, 373.69, 0.08},   {"highedu", 0.035, 9.06, 0.08},
        {"unemp", 0.000, 14.15, 0.15},   {"patstock", 0.055, 3.99, 0.10},
        {"rd_per_bus", 0.030, 1.06, 0.10}, {"rd_per_pub", 0.015, 1.06, 0.10},
        {"empl", 0.002, 132890.0, 0.0},
    };
    std::map<std::string, Eigen::MatrixXd> logs;
    std::map<std::string, std::vector<double>> drifts;
    const double mid = pre + cfg.n_years / 2.0;
    for (const auto& zs : z_specs) {
        Eigen::MatrixXd m(n, t_total);
        std::vector<double> drift_i(n);
        const bool is_empl = std::string(zs.name) == "empl";
        const bool is_unemp = std::string(zs.name) == "unemp";
        for (int i = 0; i < n; ++i) {
            drift_i[i] = is_unemp ? 0.008 * (2.0 * rng.uniform() - 1.0)
                                  : zs.drift * (2.0 * rng.uniform());
            const double region_eff = is_empl ? empl_size[i] : rng.normal(0.0, zs.region_sd);
            m(i, 0) = std::log(zs.target_mean) - drift_i[i] * mid + region_eff +
                      rng.normal(0.0, 0.08);
        }
        const double sd = is_empl ? 0.01 : cfg.z_shock_sd;
        for (int t = 1; t < t_total; ++t) {
            const double common = rng.normal();
            for (int i = 0; i < n; ++i) {
                double shock = sd * (0.5 * common + 0.8660254037844386 * rng.normal());
                // crisis year: unemployment jumps, employment dips
                if (t == last_panel + 2) {
                    if (is_unemp) shock += 0.10;
                    if (is_empl) shock -= 0.012;
                }
                m(i, t) = m(i, t - 1) + drift_i[i] + shock;
            }
        }
        logs[zs.name] = std::move(m);
        drifts[zs.name] = std::move(drift_i);
    }

    // --- BF funding intensity (log space) --------------------------------
    Eigen::MatrixXd log_bf(n, t_total);
    {
        std::vector<double> u(n);
        for (int i = 0; i < n; ++i) u[i] = rng.normal(0.0, 0.45);
        std::vector<double> v(n, 0.0);
        for (int i = 0; i < n; ++i) v[i] = rng.normal(0.0, cfg.bf_shock_sd);
        for (int t = 0; t < t_total; ++t) {
            for (int i = 0; i < n; ++i) {
                if (t > 0) v[i] = 0.6 * v[i] + rng.normal(0.0, cfg.bf_shock_sd);
                log_bf(i, t) = std::log(105.0) + u[i] + v[i];
            }
        }
        // post-panel path: modest 2019 drift, designed 2020 surge
        for (int i = 0; i < n; ++i) {
            const double g19 = 0.05 + 0.02 * (2.0 * rng.uniform() - 1.0);
            log_bf(i, last_panel + 1) = log_bf(i, last_panel) + std::log1p(g19);
            const double change =
                cfg.funding_change_2020_pct.empty()
                    ? 100.0
                    : cfg.funding_change_2020_pct[i % cfg.funding_change_2020_pct.size()];
            log_bf(i, last_panel + 2) = log_bf(i, last_panel + 1) + std::log1p(change / 100.0);
        }
    }

    // --- auxiliary R&I responses -----------------------------------------
    const std::pair<std::string, const DGPConfig::AuxTruth*> aux_list[] = {
        {"rd_exp_bus", &cfg.aux_rd_exp_bus},
        {"rd_exp_pub", &cfg.aux_rd_exp_pub},
        {"patent", &cfg.aux_patent},
    };
    std::map<std::string, Eigen::MatrixXd> aux_logs;
    for (const auto& [name, truth] : aux_list) {
        Eigen::MatrixXd m(n, t_total);
        std::vector<double> region_eff(n);
        for (int i = 0; i < n; ++i) region_eff[i] = rng.normal(0.0, truth->region_sd);
        for (int i = 0; i < n; ++i) {
            for (int t = 0; t < 4; ++t) {
                m(i, t) = truth->target_log_mean + region_eff[i] +
                          rng.normal(0.0, truth->noise_sd);
            }
        }
        for (int t = 4; t < t_total; ++t) {
            for (int i = 0; i < n; ++i) {
                const double mean_level = truth->target_log_mean + region_eff[i];
                const double c_i = (1.0 - truth->ar3 - truth->ar4) * mean_level -
                                   truth->c_gfcf * 0.020 -
                                   truth->c_bf * (std::log(105.0));
                const double dgfcf =
                    logs["gfcf"](i, t - 3) - logs["gfcf"](i, t - 4);
                const double dunemp =
                    logs["unemp"](i, t - 3) - logs["unemp"](i, t - 4);
                m(i, t) = c_i + truth->ar3 * m(i, t - 3) + truth->ar4 * m(i, t - 4) +
                          truth->c_gfcf * dgfcf + truth->c_unemp * dunemp +
                          truth->c_bf * log_bf(i, t - 3) +
                          rng.normal(0.0, truth->noise_sd);
            }
        }
        aux_logs[name] = std::move(m);
    }

    // --- GDP per employee via the error-correction recursion -------------
    auto long_run_value = [&](int i, int t) {
        return cfg.delta_gfcf * logs["gfcf"](i, t) + cfg.delta_highedu * logs["highedu"](i, t) +
               cfg.delta_unemp * logs["unemp"](i, t) +
               cfg.delta_patstock * logs["patstock"](i, t) +
               cfg.delta_rd_per_bus * logs["rd_per_bus"](i, t) +
               cfg.delta_rd_per_pub * logs["rd_per_pub"](i, t);
    };
    std::vector<double> mu_lr(n);
    for (int i = 0; i < n; ++i) mu_lr[i] = 9.708 + rng.normal(0.0, 0.10);

    Eigen::MatrixXd log_gdp(n, t_total);
    const int burn = std::max(cfg.ec_lag + 2, 5);
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < burn; ++t) {
            log_gdp(i, t) = long_run_value(i, t) + mu_lr[i] + rng.normal(0.0, cfg.gap0_sd);
        }
    }
    std::vector<double> eps_scale(n, 1.0);
    if (cfg.eps_het && n > 1) {
        for (int i = 0; i < n; ++i) eps_scale[i] = 1.0 + static_cast<double>(i) / (n - 1.0);
    }
    // Region intercept that centers the error-correction gap at zero: the
    // log-level regressors and the factor would otherwise push the level
    // path a constant multiple away from the long-run relation.
    std::vector<double> mu_sr(n);
    for (int i = 0; i < n; ++i) {
        double x_part = 0.0, trend = 0.0, g_mean = 0.0;
        int cnt = 0;
        for (int t = burn; t < t_total; ++t) {
            x_part += cfg.beta_dgfcf * (logs["gfcf"](i, t - 1) - logs["gfcf"](i, t - 2)) +
                      cfg.beta_dunemp * (logs["unemp"](i, t - 1) - logs["unemp"](i, t - 2)) +
                      cfg.beta_rd_exp_bus * aux_logs["rd_exp_bus"](i, t - 1) +
                      cfg.beta_rd_exp_pub * aux_logs["rd_exp_pub"](i, t - 1) +
                      cfg.beta_patent * aux_logs["patent"](i, t - 1) +
                      cfg.beta_bf * log_bf(i, t - 1);
            trend += long_run_value(i, t) - long_run_value(i, t - 1);
            g_mean += g[t];
            ++cnt;
        }
        mu_sr[i] = (trend - x_part - lambda[i] * g_mean) / cnt;
    }
    std::vector<double> eps_prev(n, 0.0);
    for (int t = burn; t < t_total; ++t) {
        for (int i = 0; i < n; ++i) {
            const double dgfcf = logs["gfcf"](i, t - 1) - logs["gfcf"](i, t - 2);
            const double dunemp = logs["unemp"](i, t - 1) - logs["unemp"](i, t - 2);
            const double gap =
                log_gdp(i, t - cfg.ec_lag) - long_run_value(i, t - cfg.ec_lag) - mu_lr[i];
            double eps = cfg.eps_ar1 * eps_prev[i] +
                         rng.normal(0.0, cfg.eps_sd * eps_scale[i]);
            eps_prev[i] = eps;
            const double beta_bf_t =
                (cfg.bf_coef_break_year && year_of(t) >= *cfg.bf_coef_break_year)
                    ? cfg.beta_bf_late
                    : cfg.beta_bf;
            const double growth = cfg.beta_dgfcf * dgfcf + cfg.beta_dunemp * dunemp +
                                  cfg.beta_rd_exp_bus * aux_logs["rd_exp_bus"](i, t - 1) +
                                  cfg.beta_rd_exp_pub * aux_logs["rd_exp_pub"](i, t - 1) +
                                  cfg.beta_patent * aux_logs["patent"](i, t - 1) +
                                  beta_bf_t * log_bf(i, t - 1) + lambda[i] * g[t] +
                                  cfg.phi * gap + mu_sr[i] + eps;
            log_gdp(i, t) = log_gdp(i, t - 1) + growth;
        }
    }

    // --- assemble the panel ----------------------------------------------
    std::vector<std::string> regions;
    for (int i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "R%02d", i + 1);
        regions.emplace_back(buf);
    }
    SyntheticWorld world{PanelDataset(regions, cfg.first_year, cfg.n_years),
                         {}, {}, {}, {}, {}, cfg, {}, {}, 0.0, {}};

    auto make_series = [&](auto value_at, const std::string& unit) {
        Series s;
        s.values.resize(n, cfg.n_years);
        s.missing = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
            n, cfg.n_years, false);
        s.unit = unit;
        TransformTag raw;
        raw.kind = TransformTag::Kind::raw;
        s.provenance = {raw};
        for (int i = 0; i < n; ++i) {
            for (int t = 0; t < cfg.n_years; ++t) s.values(i, t) = value_at(i, panel0 + t);
        }
        return s;
    };
    auto exp_of = [&](const Eigen::MatrixXd& m) {
        return [&m](int i, int t) { return std::exp(m(i, t)); };
    };

    world.panel.add_series("gdp", make_series(exp_of(log_gdp), "euro per employee"));
    world.panel.add_series("gfcf", make_series(exp_of(logs["gfcf"]), "thousand euro per employee"));
    world.panel.add_series("empl", make_series(exp_of(logs["empl"]), "persons"));
    world.panel.add_series("rd_exp_bus", make_series(exp_of(aux_logs["rd_exp_bus"]), "% of gdp"));
    world.panel.add_series("rd_exp_pub", make_series(exp_of(aux_logs["rd_exp_pub"]), "% of gdp"));
    world.panel.add_series("rd_per_bus", make_series(exp_of(logs["rd_per_bus"]), "% of employment"));
    world.panel.add_series("rd_per_pub", make_series(exp_of(logs["rd_per_pub"]), "% of employment"));
    world.panel.add_series("patent", make_series(exp_of(aux_logs["patent"]), "per 1000 employees"));
    world.panel.add_series("patstock", make_series(exp_of(logs["patstock"]), "per employee"));
    world.panel.add_series("unemp", make_series(exp_of(logs["unemp"]), "%"));
    world.panel.add_series("highedu", make_series(exp_of(logs["highedu"]), "% of employment"));
    world.panel.add_series("bf", make_series(
        [&](int i, int t) { return std::exp(log_bf(i, t)); }, "euro per employee"));
    world.panel.add_series("bf_funds_total", make_series(
        [&](int i, int t) { return std::exp(log_bf(i, t) + logs["empl"](i, t)); }, "euro"));

    // --- national series --------------------------------------------------
    world.national_gdp_growth_pct.first_year = cfg.first_year;
    world.national_unemp.first_year = cfg.first_year;
    world.national_empl.first_year = cfg.first_year;
    for (int t = panel0; t <= last_panel + extra; ++t) {
        world.national_gdp_growth_pct.values.push_back(100.0 * g[t]);
        double mean_log_unemp = 0.0;
        double total_empl = 0.0;
        for (int i = 0; i < n; ++i) {
            mean_log_unemp += logs["unemp"](i, t);
            total_empl += std::exp(logs["empl"](i, t));
        }
        world.national_unemp.values.push_back(std::exp(mean_log_unemp / n));
        world.national_empl.values.push_back(total_empl);
    }

    // --- post-panel funding volumes ---------------------------------------
    for (int i = 0; i < n; ++i) {
        const double share = cfg.disruptive_share_2020.empty()
                                 ? 0.6
                                 : cfg.disruptive_share_2020[i % cfg.disruptive_share_2020.size()];
        for (int e = 1; e <= extra; ++e) {
            const int t = last_panel + e;
            const double funds = std::exp(log_bf(i, t) + logs["empl"](i, t));
            world.bf_funds_total[regions[i]][year_of(t)] = funds;
            world.bf_funds_disruptive[regions[i]][year_of(t)] = (e == extra) ? share * funds : 0.0;
        }
    }

    // --- truths -------------------------------------------------------------
    world.true_beta["dgfcf_l1"] = cfg.beta_dgfcf;
    world.true_beta["dunemp_l1"] = cfg.beta_dunemp;
    world.true_beta["log_rd_exp_bus_l1"] = cfg.beta_rd_exp_bus;
    world.true_beta["log_rd_exp_pub_l1"] = cfg.beta_rd_exp_pub;
    world.true_beta["log_patent_l1"] = cfg.beta_patent;
    world.true_beta["log_bf_l1"] = cfg.beta_bf;
    world.true_lambda = lambda;
    world.true_phi = cfg.phi;
    world.true_delta["gfcf"] = cfg.delta_gfcf;
    world.true_delta["highedu"] = cfg.delta_highedu;
    world.true_delta["unemp"] = cfg.delta_unemp;
    world.true_delta["patstock"] = cfg.delta_patstock;
    world.true_delta["rd_per_bus"] = cfg.delta_rd_per_bus;
    world.true_delta["rd_per_pub"] = cfg.delta_rd_per_pub;
    return world;
}

ForecastScenario SyntheticWorld::make_scenario(const std::string& name, double r, double c,
                                               double national_2021_pct) const {
    ForecastScenario sc;
    sc.name = name;
    const int last = panel.last_year();
    sc.horizon_years = {last + 1, last + 2, last + 3};
    sc.national_growth_pct[last + 1] = national_gdp_growth_pct.at(last + 1);
    sc.national_growth_pct[last + 2] = national_gdp_growth_pct.at(last + 2);
    sc.national_growth_pct[last + 3] = national_2021_pct;
    sc.rebound_discount_c = c;
    sc.returns_discount_r = r;
    sc.bf_funds_total = bf_funds_total;
    sc.bf_funds_disruptive = bf_funds_disruptive;
    return sc;
}

} // namespace regrowth
