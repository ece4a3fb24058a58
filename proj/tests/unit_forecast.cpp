#include <doctest.h>

#include <cmath>

#include "regrowth/dgp.hpp"
#include "regrowth/errors.hpp"
#include "regrowth/forecast.hpp"
#include "regrowth/stats.hpp"
#include "test_support.hpp"

using namespace regrowth;

namespace {

const std::vector<std::string> kLongRunVars = {"gfcf",     "highedu",    "unemp",
                                               "patstock", "rd_per_bus", "rd_per_pub"};

struct Pipeline {
    SyntheticWorld world;
    LongRunEstimate longrun;
    GrowthEstimate growth;
    AuxEstimate aux_bus, aux_pub, aux_pat;

    explicit Pipeline(std::uint64_t seed, int column = 5)
        : world(generate_panel(DGPConfig::preset("finland_like", seed))),
          longrun(fit_longrun(world.panel, kLongRunVars)),
          growth(fit_growth(world.panel, &longrun, world.national_gdp_growth_pct,
                            GrowthModelSpec::table3_column(column))),
          aux_bus(fit_aux(world.panel, AuxModelSpec::standard("rd_exp_bus"))),
          aux_pub(fit_aux(world.panel, AuxModelSpec::standard("rd_exp_pub"))),
          aux_pat(fit_aux(world.panel, AuxModelSpec::standard("patent"))) {}

    ForecastContext context() const {
        ForecastContext ctx;
        ctx.ds = &world.panel;
        ctx.growth = &growth;
        ctx.longrun = &longrun;
        ctx.national_growth_pct = &world.national_gdp_growth_pct;
        ctx.national_unemp = &world.national_unemp;
        ctx.national_empl = &world.national_empl;
        ctx.aux_rd_exp_bus = &aux_bus;
        ctx.aux_rd_exp_pub = &aux_pub;
        ctx.aux_patent = &aux_pat;
        return ctx;
    }
};

} // namespace

TEST_CASE("ar extrapolation nests an exact AR(1) process") {
    // log x_t = 0.5 log x_{t-1} exactly; the pivoted rank check drops the
    // collinear higher lags and the one-step forecast is 0.5 * log x_T
    const int n = 3, t_len = 14;
    std::vector<std::string> regions = {"a", "b", "c"};
    PanelDataset ds(regions, 2000, t_len);
    Series x = Series::constant(n, t_len, 0.0);
    const double inits[] = {4.0, 2.5, 6.0};
    for (int i = 0; i < n; ++i) {
        double lx = inits[i];
        for (int t = 0; t < t_len; ++t) {
            x.values(i, t) = std::exp(lx);
            lx *= 0.5;
        }
    }
    ds.add_series("x", x);
    ExtrapolationContext ctx;
    ctx.ds = &ds;
    const ExtendedLogSeries ext = extrapolate_regressor(ctx, "x", ExtrapolationRule::ar4, 1);
    for (int i = 0; i < n; ++i) {
        const double last = std::log(x.values(i, t_len - 1));
        CHECK(ext.log_at(i, 2000 + t_len) == doctest::Approx(0.5 * last).epsilon(1e-8));
    }
}

TEST_CASE("aux extrapolation for two years ahead uses only observed lags") {
    Pipeline p(30);
    const PanelDataset& ds = p.world.panel;
    ExtrapolationContext ctx;
    ctx.ds = &ds;
    ctx.aux = &p.aux_bus;
    const ExtendedLogSeries ext =
        extrapolate_regressor(ctx, "rd_exp_bus", ExtrapolationRule::aux_equation, 2);

    // independent recomputation for 2020 from the 2016/2017 panel cells only
    const int t2016 = ds.year_index(2016);
    const int t2017 = ds.year_index(2017);
    for (int i = 0; i < ds.n_regions(); ++i) {
        const double ar3 = p.aux_bus.fit.coef("ar3");
        const double ar4 = p.aux_bus.fit.coef("ar4");
        double pred = p.aux_bus.fit.region_effects(i);
        pred += ar3 * std::log(ds.value("rd_exp_bus", i, t2017));
        pred += ar4 * std::log(ds.value("rd_exp_bus", i, t2016));
        pred += p.aux_bus.fit.coef("dgfcf_l3") *
                (std::log(ds.value("gfcf", i, t2017)) - std::log(ds.value("gfcf", i, t2016)));
        pred += p.aux_bus.fit.coef("dunemp_l3") *
                (std::log(ds.value("unemp", i, t2017)) - std::log(ds.value("unemp", i, t2016)));
        pred += p.aux_bus.fit.coef("log_bf_l3") * std::log(ds.value("bf", i, t2017));
        CHECK(ext.log_at(i, 2020) == doctest::Approx(pred).epsilon(1e-12));
    }
}

TEST_CASE("bf intensity is funds over predicted employment") {
    Pipeline p(32);
    ForecastScenario sc = p.world.make_scenario("baseline", 1.0, 1.0);
    ExtrapolationContext ec;
    ec.ds = &p.world.panel;
    ec.national = &p.world.national_empl;
    const ExtendedLogSeries empl =
        extrapolate_regressor(ec, "empl", ExtrapolationRule::ar4_plus_national, 2);
    ExtrapolationContext cb;
    cb.ds = &p.world.panel;
    cb.scenario = &sc;
    cb.empl = &empl;
    const ExtendedLogSeries bf =
        extrapolate_regressor(cb, "bf", ExtrapolationRule::bf_intensity, 2);
    for (int i = 0; i < p.world.panel.n_regions(); ++i) {
        const std::string& region = p.world.panel.regions()[i];
        const double funds = sc.bf_funds_total.at(region).at(2020);
        const double expect = std::log(funds) - empl.log_at(i, 2020);
        CHECK(bf.log_at(i, 2020) == doctest::Approx(expect).epsilon(1e-12));
    }

    // doubling funds doubles the intensity exactly
    ForecastScenario doubled = sc;
    for (auto& [region, by_year] : doubled.bf_funds_total) {
        for (auto& [year, v] : by_year) v *= 2.0;
        for (auto& [year, v] : doubled.bf_funds_disruptive[region]) v *= 2.0;
    }
    ExtrapolationContext cb2 = cb;
    cb2.scenario = &doubled;
    const ExtendedLogSeries bf2 =
        extrapolate_regressor(cb2, "bf", ExtrapolationRule::bf_intensity, 2);
    for (int i = 0; i < p.world.panel.n_regions(); ++i) {
        const double ratio = std::exp(bf2.log_at(i, 2020)) / std::exp(bf.log_at(i, 2020));
        CHECK(ratio == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("rule and variable mismatches are rejected") {
    Pipeline p(33);
    ExtrapolationContext ctx;
    ctx.ds = &p.world.panel;
    try {
        extrapolate_regressor(ctx, "gfcf", ExtrapolationRule::bf_intensity, 2);
        FAIL("expected RuleVariableMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RuleVariableMismatch);
    }
    try {
        extrapolate_regressor(ctx, "unemp", ExtrapolationRule::ar4_plus_national, 2);
        FAIL("expected MissingNationalValue");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingNationalValue);
    }
}

TEST_CASE("forecast with zeroed slopes returns the fixed effects") {
    Pipeline p(34);
    GrowthEstimate zeroed = p.growth;
    zeroed.fit.coefficients.setZero();
    ForecastContext ctx = p.context();
    ctx.growth = &zeroed;
    const ForecastScenario sc = p.world.make_scenario("baseline", 1.0, 1.0);
    const ForecastResult fc = forecast_growth(ctx, sc);
    for (int i = 0; i < p.world.panel.n_regions(); ++i) {
        for (std::size_t h = 0; h < fc.years.size(); ++h) {
            CHECK(fc.cells[i][h].growth_log ==
                  doctest::Approx(zeroed.fit.region_effects(i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("final-year forecast is affine in the national impulse") {
    Pipeline p(36);
    ForecastContext ctx = p.context();
    const ForecastResult full = forecast_growth(ctx, p.world.make_scenario("b", 1.0, 1.0, 1.8));
    const ForecastResult half = forecast_growth(ctx, p.world.make_scenario("c", 1.0, 0.5, 1.8));
    for (int i = 0; i < p.world.panel.n_regions(); ++i) {
        const double lambda_i =
            p.growth.fit.coef("factor_" + p.world.panel.regions()[i]);
        const double diff = full.growth_pct(i, 2) - half.growth_pct(i, 2);
        // halving a 1.8% impulse changes growth by lambda_i * 0.9 points
        CHECK(diff == doctest::Approx(lambda_i * 0.9).epsilon(1e-10));
        // earlier horizon years are untouched by the final-year discount
        CHECK(full.growth_pct(i, 0) == doctest::Approx(half.growth_pct(i, 0)).epsilon(1e-12));
        CHECK(full.growth_pct(i, 1) == doctest::Approx(half.growth_pct(i, 1)).epsilon(1e-12));
    }
}

TEST_CASE("audit closure: stored regressors reproduce every prediction") {
    Pipeline p(38);
    const ForecastResult fc =
        forecast_growth(p.context(), p.world.make_scenario("baseline", 1.0, 1.0));
    for (std::size_t i = 0; i < fc.regions.size(); ++i) {
        for (std::size_t h = 0; h < fc.years.size(); ++h) {
            const double recon = prediction_from_audit(fc.cells[i][h], p.growth,
                                                       static_cast<int>(i), fc.regions);
            CHECK(std::fabs(recon - fc.cells[i][h].growth_log) < 1e-12);
        }
    }
}

TEST_CASE("m=1 timing: each forecast year reads the prior year's funding") {
    Pipeline p(40);
    const ForecastResult fc =
        forecast_growth(p.context(), p.world.make_scenario("baseline", 1.0, 1.0));
    const ExtendedLogSeries& bf = fc.extended.at("bf");
    for (std::size_t i = 0; i < fc.regions.size(); ++i) {
        const ForecastCell& y2020 = fc.cells[i][1];
        const ForecastCell& y2021 = fc.cells[i][2];
        CHECK(y2020.regressors.at("log_bf_l1") ==
              doctest::Approx(bf.log_at(static_cast<int>(i), 2019)).epsilon(1e-12));
        CHECK(y2021.regressors.at("log_bf_l1") ==
              doctest::Approx(bf.log_at(static_cast<int>(i), 2020)).epsilon(1e-12));
        CHECK(y2020.sources.at("log_bf_l1") == "pred:2019:bf_intensity");
        CHECK(y2021.sources.at("log_bf_l1") == "pred:2020:bf_intensity");
    }
}

TEST_CASE("no forecast consumes regional data past the panel") {
    Pipeline p(42);
    const ForecastResult fc =
        forecast_growth(p.context(), p.world.make_scenario("baseline", 1.0, 1.0));
    CHECK_NOTHROW(assert_no_future_leakage(fc, p.world.panel.last_year(), 2020));

    ForecastResult tampered = fc;
    tampered.cells[0][0].sources["dgfcf_l1"] = "obs:2019";
    CHECK_THROWS_AS(assert_no_future_leakage(tampered, p.world.panel.last_year(), 2020),
                    Error);
}

TEST_CASE("three-step forecast equals an independent recursive oracle") {
    for (std::uint64_t seed : {50ULL, 51ULL}) {
        Pipeline p(seed);
        const ForecastScenario sc = p.world.make_scenario("baseline", 1.0, 1.0);
        const ForecastResult fc = forecast_growth(p.context(), sc);
        const PanelDataset& ds = p.world.panel;

        // oracle: recompute the whole chain with plain loops
        const int n = ds.n_regions();
        const int T = ds.n_years();
        auto logv = [&](const std::string& var, int i, int year) {
            return std::log(ds.value(var, i, ds.year_index(year)));
        };
        // employment and unemployment paths: AR coefficients from the fitted
        // extrapolations are not exposed, so re-derive from the stored paths
        // only where observed; predicted values come from fc.extended, which
        // the oracle treats as its own inputs for the growth equation alone.
        for (int i = 0; i < n; ++i) {
            for (std::size_t h = 0; h < fc.years.size(); ++h) {
                const int year = fc.years[h];
                double pred = p.growth.fit.region_effects(i);
                auto path_log = [&](const std::string& var, int y) {
                    if (y <= ds.last_year()) return logv(var, i, y);
                    return fc.extended.at(var).log_at(i, y);
                };
                pred += p.growth.fit.coef("dgfcf_l1") *
                        (path_log("gfcf", year - 1) - path_log("gfcf", year - 2));
                pred += p.growth.fit.coef("dunemp_l1") *
                        (path_log("unemp", year - 1) - path_log("unemp", year - 2));
                pred += p.growth.fit.coef("log_rd_exp_bus_l1") * path_log("rd_exp_bus", year - 1);
                pred += p.growth.fit.coef("log_rd_exp_pub_l1") * path_log("rd_exp_pub", year - 1);
                pred += p.growth.fit.coef("log_patent_l1") * path_log("patent", year - 1);
                pred += p.growth.fit.coef("log_bf_l1") * path_log("bf", year - 1);
                double f = sc.national_growth_pct.at(year);
                if (year == sc.horizon_years.back()) f *= sc.rebound_discount_c;
                pred += p.growth.fit.coef("factor_" + ds.regions()[i]) * (f / 100.0);
                pred += p.growth.fit.coef("ec_l3") *
                        p.longrun.ec.values(i, ds.year_index(year - 3));
                CHECK(std::fabs(pred - fc.cells[i][h].growth_log) < 1e-10);
            }
            // level chaining
            double level = ds.value("gdp", i, T - 1);
            for (std::size_t h = 0; h < fc.years.size(); ++h) {
                level *= std::exp(fc.cells[i][h].growth_log);
                CHECK(level == doctest::Approx(fc.gdp_levels(i, static_cast<int>(h) + 1))
                                   .epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("bands are the cross-region mean plus-minus two sd") {
    Pipeline p(54);
    const ForecastResult fc =
        forecast_growth(p.context(), p.world.make_scenario("baseline", 1.0, 1.0));
    for (std::size_t h = 0; h < fc.years.size(); ++h) {
        std::vector<double> g;
        for (std::size_t i = 0; i < fc.regions.size(); ++i) {
            g.push_back(fc.growth_pct(static_cast<int>(i), static_cast<int>(h)));
        }
        const double m = mean_of(g);
        const double sd = stddev_of(g);
        CHECK(fc.bands[h].mean_pct == doctest::Approx(m).epsilon(1e-12));
        CHECK(fc.bands[h].lo_pct == doctest::Approx(m - 2 * sd).epsilon(1e-12));
        CHECK(fc.bands[h].hi_pct == doctest::Approx(m + 2 * sd).epsilon(1e-12));
    }
}

TEST_CASE("in-sample path: zero-noise world reproduces observed growth") {
    DGPConfig cfg = DGPConfig::preset("finland_like", 56);
    cfg.eps_sd = 0.0;
    SyntheticWorld w = generate_panel(cfg);
    LongRunEstimate lr = testsup::longrun_from_truth(w.panel, w.true_delta, kLongRunVars);
    GrowthModelSpec spec = GrowthModelSpec::table3_column(4);
    const GrowthEstimate ge = fit_growth(w.panel, &lr, w.national_gdp_growth_pct, spec);
    const PredictionPath path = in_sample_prediction_path(ge, w.panel);
    for (std::size_t t = 0; t < path.years.size(); ++t) {
        CHECK(std::fabs(path.predicted_mean_pct[t] - path.observed_mean_pct[t]) < 1e-8);
    }
    // identical paths share every turning point
    for (std::size_t t = 2; t < path.years.size(); ++t) {
        const double d_obs =
            (path.observed_mean_pct[t] - path.observed_mean_pct[t - 1]) *
            (path.observed_mean_pct[t - 1] - path.observed_mean_pct[t - 2]);
        const double d_pred =
            (path.predicted_mean_pct[t] - path.predicted_mean_pct[t - 1]) *
            (path.predicted_mean_pct[t - 1] - path.predicted_mean_pct[t - 2]);
        CHECK((d_obs < 0) == (d_pred < 0));
    }
}

TEST_CASE("in-sample path tracks the observed mean on a noisy world") {
    Pipeline p(58);
    const PredictionPath path = in_sample_prediction_path(p.growth, p.world.panel);
    CHECK(path.years.front() == 1998);
    CHECK(path.years.back() == 2018);
    CHECK(correlation(path.observed_mean_pct, path.predicted_mean_pct) >= 0.6);
}

TEST_CASE("scenario invariants are validated") {
    Pipeline p(60);
    ForecastScenario sc = p.world.make_scenario("bad", 1.0, 1.0);
    sc.returns_discount_r = 1.4;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc = p.world.make_scenario("bad2", 1.0, 1.0);
    sc.bf_funds_disruptive["R01"][2020] =
        sc.bf_funds_total["R01"][2020] * 1.5; // exceeds total
    CHECK_THROWS_AS(sc.validate(), Error);
    sc = p.world.make_scenario("bad3", 1.0, 1.0);
    sc.national_growth_pct.erase(sc.horizon_years.back());
    CHECK_THROWS_AS(sc.validate(), Error);
}

TEST_CASE("national coupling supports estimated and unit-offset variants") {
    Pipeline p(62);
    ExtrapolationContext ctx;
    ctx.ds = &p.world.panel;
    ctx.national = &p.world.national_unemp;
    const ExtendedLogSeries est =
        extrapolate_regressor(ctx, "unemp", ExtrapolationRule::ar4_plus_national, 2);
    ctx.national_unit_coefficient = true;
    const ExtendedLogSeries offset =
        extrapolate_regressor(ctx, "unemp", ExtrapolationRule::ar4_plus_national, 2);
    bool differs = false;
    for (int i = 0; i < p.world.panel.n_regions(); ++i) {
        for (int year : {2019, 2020}) {
            CHECK(std::isfinite(est.log_at(i, year)));
            CHECK(std::isfinite(offset.log_at(i, year)));
            if (std::fabs(est.log_at(i, year) - offset.log_at(i, year)) > 1e-12) {
                differs = true;
            }
        }
    }
    CHECK(differs); // the estimated coefficient is not exactly one
}
