#include <doctest.h>

#include <cmath>

#include "regrowth/dgp.hpp"
#include "regrowth/errors.hpp"
#include "regrowth/evaluation.hpp"
#include "regrowth/forecast.hpp"
#include "regrowth/longrun.hpp"
#include "test_support.hpp"

using namespace regrowth;

namespace {

const std::vector<std::string> kLongRunVars = {"gfcf",     "highedu",    "unemp",
                                               "patstock", "rd_per_bus", "rd_per_pub"};

bool panels_equal(const PanelDataset& a, const PanelDataset& b) {
    if (a.series_names() != b.series_names()) return false;
    for (const auto& name : a.series_names()) {
        if (a.series(name).values != b.series(name).values) return false;
    }
    return true;
}

} // namespace

TEST_CASE("generation is bit-identical for a fixed seed") {
    const SyntheticWorld a = generate_panel(DGPConfig::preset("finland_like", 99));
    const SyntheticWorld b = generate_panel(DGPConfig::preset("finland_like", 99));
    CHECK(panels_equal(a.panel, b.panel));
    CHECK(a.national_gdp_growth_pct.values == b.national_gdp_growth_pct.values);
    CHECK(a.bf_funds_total == b.bf_funds_total);

    const SyntheticWorld c = generate_panel(DGPConfig::preset("finland_like", 100));
    CHECK(!panels_equal(a.panel, c.panel));
}

TEST_CASE("unstable configurations are rejected") {
    DGPConfig cfg = DGPConfig::preset("minimal", 1);
    cfg.phi = -1.5;
    CHECK_THROWS_AS(generate_panel(cfg), Error);
    cfg = DGPConfig::preset("minimal", 1);
    cfg.phi = 0.2; // positive feedback is outside the contract
    CHECK_THROWS_AS(generate_panel(cfg), Error);
    cfg = DGPConfig::preset("minimal", 1);
    cfg.aux_patent.ar3 = 0.7;
    cfg.aux_patent.ar4 = 0.5; // explosive AR roots
    CHECK_THROWS_AS(generate_panel(cfg), Error);
    cfg = DGPConfig::preset("minimal", 1);
    cfg.z_shock_sd = 0.0;
    CHECK_THROWS_AS(generate_panel(cfg), Error);
}

TEST_CASE("the ar(4) benchmark measured against itself is exactly one") {
    const SyntheticWorld w = generate_panel(DGPConfig::preset("finland_like", 101));
    const DesignMatrix bench = build_growth_ar_benchmark(w.panel, 4);
    const EvalReport report = relative_rmse(bench, "ols_fe", w.panel, 4);
    CHECK(report.relative_rmse == 1.0);
    CHECK(report.rmse == report.benchmark_rmse);
}

TEST_CASE("a slope-free model cannot beat the ar(4) benchmark") {
    const SyntheticWorld w = generate_panel(DGPConfig::preset("finland_like", 102));
    // means-only model: zero regressors, region effects alone
    DesignMatrix empty = build_growth_ar_benchmark(w.panel, 4);
    empty.col_names.clear();
    empty.X = Eigen::MatrixXd::Zero(empty.X.rows(), 0);
    const EvalReport report = relative_rmse(empty, "ols_fe", w.panel, 4);
    CHECK(report.relative_rmse >= 1.0);
}

TEST_CASE("the factor plus ec model beats the benchmark on a synthetic world") {
    const SyntheticWorld w = generate_panel(DGPConfig::preset("finland_like", 103));
    const LongRunEstimate lr = fit_longrun(w.panel, kLongRunVars);
    GrowthEstimate ge = fit_growth(w.panel, &lr, w.national_gdp_growth_pct,
                                   GrowthModelSpec::table3_column(5));
    const EvalReport report = evaluate_growth(w.panel, ge, &lr, w.national_gdp_growth_pct);
    CHECK(report.relative_rmse < 1.0);
    CHECK(ge.relative_rmse.has_value());
    CHECK(*ge.relative_rmse == report.relative_rmse);
    CHECK(report.relative_rmse == report.rmse / report.benchmark_rmse);
}

TEST_CASE("r-squared equals the anova value for within-ols with effects") {
    Rng rng(7);
    auto panel = testsup::random_panel(rng, 5, 10, 2, 0.6);
    const FitResult fit = fit_ols_fe(panel.dm, false);
    // anova route: 1 - SSR / total sum of squares around the grand mean
    double ssr = fit.residuals.squaredNorm();
    std::vector<double> y;
    for (int r = 0; r < panel.dm.n_rows(); ++r) y.push_back(panel.dm.y(r));
    const double gm = mean_of(y);
    double sst = 0.0;
    for (double v : y) sst += (v - gm) * (v - gm);
    CHECK(fit.r_squared == doctest::Approx(1.0 - ssr / sst).epsilon(1e-10));
}

TEST_CASE("monte carlo: estimation error shrinks at the root-T rate") {
    auto median_abs_err = [](int t_years, int reps) {
        std::vector<double> errs;
        for (int rep = 0; rep < reps; ++rep) {
            DGPConfig cfg = DGPConfig::preset("minimal", Rng::derive_seed(4242, rep));
            cfg.n_years = t_years;
            cfg.first_year = 2019 - t_years + 1;
            SyntheticWorld w = generate_panel(cfg);
            const LongRunEstimate lr = fit_longrun(w.panel, kLongRunVars);
            GrowthModelSpec spec = GrowthModelSpec::table3_column(4);
            const GrowthEstimate ge =
                fit_growth(w.panel, &lr, w.national_gdp_growth_pct, spec);
            errs.push_back(std::fabs(ge.fit.coef("log_bf_l1") - cfg.beta_bf));
        }
        return median_of(errs);
    };
    const double err_t = median_abs_err(16, 200);
    const double err_2t = median_abs_err(32, 200);
    const double ratio = err_2t / err_t;
    // the root-T rate predicts 0.707; allow 30 percent either way
    CHECK(ratio > 0.707 * 0.7);
    CHECK(ratio < 0.707 * 1.3);
}

TEST_CASE("panel-length pipeline rejects far more often than a unit-root world") {
    // the gap's dominant autoregressive root (about 0.8) limits power at
    // T=24; the contrast against a genuinely non-stationary counterfactual
    // still has to be visible
    const PedroniMomentTable table =
        PedroniMomentTable::load(PedroniMomentTable::default_path());
    int reject = 0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
        const SyntheticWorld w =
            generate_panel(DGPConfig::preset("finland_like", Rng::derive_seed(515, rep)));
        const LongRunEstimate lr = fit_longrun(w.panel, kLongRunVars);
        reject += pedroni_pp_test(lr, BandwidthRule::automatic(), table, false)
                      .decision_at_5pct;
    }
    // calibrated size is 5-8%; the cointegrated world should clear it well
    CHECK(static_cast<double>(reject) / reps >= 0.2);
}

TEST_CASE("monte carlo runner is deterministic across thread counts") {
    auto fn = [](int rep, std::uint64_t seed) {
        Rng rng(seed);
        return rng.normal() + rep;
    };
    const auto seq = monte_carlo<double>(64, 11, 1, fn);
    const auto par = monte_carlo<double>(64, 11, 4, fn);
    CHECK(seq == par);
}

TEST_CASE("preset files mirror the built-in configurations") {
    for (const char* name : {"finland_like", "minimal"}) {
        const DGPConfig builtin = DGPConfig::preset(name, 1);
        const DGPConfig loaded = DGPConfig::from_json_file(
            std::string(REGROWTH_DATA_DIR) + "/presets/" + name + ".json");
        CHECK(loaded.to_json() == builtin.to_json());
    }
}

TEST_CASE("long-horizon worlds confirm the deviations are stationary") {
    // at panel length the unit-root tests lack power against the gap's
    // dominant root; a long simulated horizon verifies the DGP property
    const PedroniMomentTable table =
        PedroniMomentTable::load(PedroniMomentTable::default_path());
    int reject = 0;
    const int reps = 10;
    for (int rep = 0; rep < reps; ++rep) {
        DGPConfig cfg = DGPConfig::preset("finland_like", Rng::derive_seed(909, rep));
        cfg.n_years = 200;
        cfg.first_year = 1819;
        const SyntheticWorld w = generate_panel(cfg);
        const LongRunEstimate lr =
            testsup::longrun_from_truth(w.panel, w.true_delta, kLongRunVars);
        reject += pedroni_pp_test(lr, BandwidthRule::automatic(), table, false)
                      .decision_at_5pct;
    }
    CHECK(reject == reps);
}

TEST_CASE("bundled panel matches its documented calibration targets") {
    // data/synthetic ships the seed-128 world; its moments and fitted signs
    // are fixture properties the rest of the documentation relies on
    const PanelDataset ds = load_panel_csv(
        std::string(REGROWTH_SOURCE_DIR) + "/data/synthetic/panel.csv",
        {"gdp", "gfcf", "empl", "rd_exp_bus", "rd_exp_pub", "rd_per_bus", "rd_per_pub",
         "patent", "patstock", "unemp", "highedu", "bf_funds_total", "bf"});
    CHECK(ds.n_regions() == 18);
    CHECK(ds.n_years() == 24);
    double gdp_mean = 0.0, bf_mean = 0.0, unemp_mean = 0.0;
    for (const auto& row : ds.summarize()) {
        CHECK(row.obs == 432);
        CHECK(std::isfinite(row.mean));
        CHECK(std::isfinite(row.sd));
        if (row.variable == "gdp") gdp_mean = row.mean;
        if (row.variable == "bf") bf_mean = row.mean;
        if (row.variable == "unemp") unemp_mean = row.mean;
    }
    CHECK(std::fabs(bf_mean - 122.58) / 122.58 < 0.20);
    CHECK(std::fabs(gdp_mean - 64477.0) / 64477.0 < 0.25);
    CHECK(std::fabs(unemp_mean - 14.15) / 14.15 < 0.25);

    // committed files reproduce bit-for-bit from the generator
    const SyntheticWorld w = generate_panel(DGPConfig::preset("finland_like", 128));
    for (const auto& name : ds.series_names()) {
        const Series& a = ds.series(name);
        const Series& b = w.panel.series(name);
        for (int i = 0; i < ds.n_regions(); ++i) {
            for (int t = 0; t < ds.n_years(); ++t) {
                // CSV carries 12 significant digits
                CHECK(a.values(i, t) ==
                      doctest::Approx(b.values(i, t)).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("bundled world reproduces the documented estimation pattern") {
    const SyntheticWorld w = generate_panel(DGPConfig::preset("finland_like", 128));
    const LongRunEstimate lr = fit_longrun(w.panel, kLongRunVars);
    // production-factor elasticity signs
    CHECK(lr.delta(0) > 0.0); // gfcf
    CHECK(lr.delta(1) > 0.0); // highedu
    CHECK(lr.delta(2) < 0.0); // unemp
    CHECK(lr.delta(3) > 0.0); // patstock

    const GrowthEstimate ge = fit_growth(w.panel, &lr, w.national_gdp_growth_pct,
                                         GrowthModelSpec::table3_column(5));
    CHECK(ge.fit.coef("log_bf_l1") > 0.0);
    CHECK(ge.fit.coef("ec_l3") < 0.0);
    CHECK(ge.fit.coef("dunemp_l1") > 0.0);

    // crisis-shaped forecast: a dip in the second horizon year, a rebound in
    // the third
    const AuxEstimate ab = fit_aux(w.panel, AuxModelSpec::standard("rd_exp_bus"));
    const AuxEstimate ap = fit_aux(w.panel, AuxModelSpec::standard("rd_exp_pub"));
    const AuxEstimate at = fit_aux(w.panel, AuxModelSpec::standard("patent"));
    ForecastContext ctx;
    ctx.ds = &w.panel;
    ctx.growth = &ge;
    ctx.longrun = &lr;
    ctx.national_growth_pct = &w.national_gdp_growth_pct;
    ctx.national_unemp = &w.national_unemp;
    ctx.national_empl = &w.national_empl;
    ctx.aux_rd_exp_bus = &ab;
    ctx.aux_rd_exp_pub = &ap;
    ctx.aux_patent = &at;
    const ForecastResult fc = forecast_growth(ctx, w.make_scenario("baseline", 1.0, 1.0));
    CHECK(fc.bands[1].mean_pct > -2.5);
    CHECK(fc.bands[1].mean_pct < 0.5);
    CHECK(fc.bands[2].mean_pct > 2.0);
    CHECK(fc.bands[2].mean_pct < 6.0);
}
