#include <doctest.h>

#include <cmath>

#include "regrowth/dgp.hpp"
#include "regrowth/errors.hpp"
#include "regrowth/longrun.hpp"
#include "regrowth/stats.hpp"
#include "test_support.hpp"

using namespace regrowth;

namespace {

// small panel where log gdp = 0.7 log highedu + mu_i holds up to AR(1) noise
PanelDataset exact_longrun_panel(int n, int t_len, double noise_sd, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> regions;
    for (int i = 0; i < n; ++i) regions.push_back("r" + std::to_string(i));
    PanelDataset ds(regions, 2000, t_len);
    Series highedu = Series::constant(n, t_len, 0.0);
    Series gdp = Series::constant(n, t_len, 0.0);
    for (int i = 0; i < n; ++i) {
        double walk = std::log(9.0) + rng.normal(0.0, 0.2);
        double u = 0.0;
        for (int t = 0; t < t_len; ++t) {
            walk += 0.02 + rng.normal(0.0, 0.08);
            u = 0.5 * u + rng.normal(0.0, noise_sd);
            highedu.values(i, t) = std::exp(walk);
            gdp.values(i, t) = std::exp(0.7 * walk + 1.0 + 0.3 * i + u);
        }
    }
    ds.add_series("highedu", highedu);
    ds.add_series("gdp", gdp);
    return ds;
}

PedroniMomentTable moments() {
    return PedroniMomentTable::load(PedroniMomentTable::default_path());
}

LongRunEstimate wrap_ec(const Eigen::MatrixXd& ec, int m) {
    LongRunEstimate lr;
    lr.regressors.resize(m);
    lr.delta = Eigen::VectorXd::Zero(m);
    lr.pooled_first_stage = false; // exercise the requested moment row
    lr.n_regions = static_cast<int>(ec.rows());
    lr.first_year = 1995;
    lr.ec.values = ec;
    lr.ec.missing = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
        ec.rows(), ec.cols(), false);
    return lr;
}

Eigen::MatrixXd simulate_ec(int n, int t_len, bool random_walk, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd ec(n, t_len);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int t = 0; t < t_len; ++t) {
            const double e = rng.normal();
            s += e;
            ec(i, t) = random_walk ? s : e;
        }
    }
    return ec;
}

} // namespace

TEST_CASE("zero-noise long-run data gives an exactly zero ec series") {
    PanelDataset ds = exact_longrun_panel(4, 15, 0.0, 21);
    LongRunEstimate lr = fit_longrun(ds, {"highedu"});
    CHECK(lr.delta(0) == doctest::Approx(0.7).epsilon(1e-10));
    for (int i = 0; i < 4; ++i) {
        for (int t = 0; t < 15; ++t) {
            CHECK(std::fabs(lr.ec.values(i, t)) < 1e-10);
        }
    }
}

TEST_CASE("ec series has zero mean per region by construction") {
    PanelDataset ds = exact_longrun_panel(5, 20, 0.05, 33);
    LongRunEstimate lr = fit_longrun(ds, {"highedu"});
    for (int i = 0; i < 5; ++i) {
        CHECK(std::fabs(lr.ec.values.row(i).mean()) < 1e-8);
    }
}

TEST_CASE("adding a constant to one region's log gdp only moves its effect") {
    PanelDataset ds = exact_longrun_panel(4, 16, 0.04, 55);
    LongRunEstimate base = fit_longrun(ds, {"highedu"});

    Series gdp = ds.series("gdp");
    for (int t = 0; t < 16; ++t) gdp.values(1, t) *= std::exp(0.25);
    PanelDataset ds2(ds.regions(), ds.first_year(), ds.n_years());
    ds2.add_series("highedu", ds.series("highedu"));
    ds2.add_series("gdp", gdp);
    LongRunEstimate moved = fit_longrun(ds2, {"highedu"});

    CHECK(moved.mu(1) - base.mu(1) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(std::fabs(moved.mu(0) - base.mu(0)) < 1e-9);
    CHECK(std::fabs(moved.delta(0) - base.delta(0)) < 1e-9);
    for (int i = 0; i < 4; ++i) {
        for (int t = 0; t < 16; ++t) {
            CHECK(std::fabs(moved.ec.values(i, t) - base.ec.values(i, t)) < 1e-10);
        }
    }
}

TEST_CASE("monte carlo: single-regressor delta recovery") {
    std::vector<double> deltas;
    for (int rep = 0; rep < 500; ++rep) {
        PanelDataset ds = exact_longrun_panel(18, 24, 0.05, Rng::derive_seed(606, rep));
        deltas.push_back(fit_longrun(ds, {"highedu"}).delta(0));
    }
    CHECK(std::fabs(median_of(deltas) - 0.7) < 0.05);
}

TEST_CASE("cointegration test separates stationary from random-walk residuals") {
    const PedroniMomentTable table = moments();
    const auto wn = pedroni_pp_test(wrap_ec(simulate_ec(18, 24, false, 5), 0),
                                    BandwidthRule::automatic(), table, false);
    CHECK(wn.standardized_statistic < -5.0);
    CHECK(wn.decision_at_5pct);

    const auto rw = pedroni_pp_test(wrap_ec(simulate_ec(18, 24, true, 5), 0),
                                    BandwidthRule::automatic(), table, false);
    CHECK(std::fabs(rw.standardized_statistic) < 3.0);
    CHECK(std::isfinite(rw.raw_statistic));
}

TEST_CASE("statistic is invariant to relabeling regions") {
    const PedroniMomentTable table = moments();
    Eigen::MatrixXd ec = simulate_ec(10, 20, false, 77);
    Eigen::MatrixXd permuted(10, 20);
    for (int i = 0; i < 10; ++i) permuted.row(i) = ec.row((i + 3) % 10);
    const auto a = pedroni_pp_test(wrap_ec(ec, 0), BandwidthRule::automatic(), table, false);
    const auto b =
        pedroni_pp_test(wrap_ec(permuted, 0), BandwidthRule::automatic(), table, false);
    CHECK(a.raw_statistic == doctest::Approx(b.raw_statistic).epsilon(1e-12));
    CHECK(a.standardized_statistic ==
          doctest::Approx(b.standardized_statistic).epsilon(1e-12));
}

TEST_CASE("bandwidth zero drops the kernel correction but stays finite") {
    const PedroniMomentTable table = moments();
    const auto r = pedroni_pp_test(wrap_ec(simulate_ec(8, 20, true, 11), 0),
                                   BandwidthRule::fixed(0), table, false);
    CHECK(r.bandwidth == 0);
    CHECK(std::isfinite(r.raw_statistic));
    CHECK(std::isfinite(r.standardized_statistic));
}

TEST_CASE("group-mean variant runs with its own moments") {
    const PedroniMomentTable table = moments();
    const auto g = pedroni_pp_test(wrap_ec(simulate_ec(12, 24, false, 13), 0),
                                   BandwidthRule::automatic(), table, true);
    CHECK(g.variant == "group_pp");
    CHECK(g.decision_at_5pct); // white noise still rejects
}

TEST_CASE("short windows and unknown regressor counts fail loudly") {
    const PedroniMomentTable table = moments();
    try {
        pedroni_pp_test(wrap_ec(simulate_ec(6, 7, false, 3), 0),
                        BandwidthRule::automatic(), table, false);
        FAIL("expected InsufficientTimeLength");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientTimeLength);
    }
    try {
        pedroni_pp_test(wrap_ec(simulate_ec(6, 20, false, 3), 9),
                        BandwidthRule::automatic(), table, false);
        FAIL("expected MissingAdjustmentConstants");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingAdjustmentConstants);
    }
}

TEST_CASE("moment table interpolates between window lengths") {
    const PedroniMomentTable table = moments();
    const auto a = table.lookup("panel_pp", 0, 24);
    const auto b = table.lookup("panel_pp", 0, 26); // interpolated
    const auto c = table.lookup("panel_pp", 0, 28);
    const bool between = (b.mean >= std::min(a.mean, c.mean) - 1e-12) &&
                         (b.mean <= std::max(a.mean, c.mean) + 1e-12);
    CHECK(between);
    // clamped outside the grid
    const auto lo = table.lookup("panel_pp", 0, 4);
    const auto lo_edge = table.lookup("panel_pp", 0, 12);
    CHECK(lo.mean == lo_edge.mean);
}

TEST_CASE("finland-like pipeline finds cointegration on the bundled world") {
    SyntheticWorld w = generate_panel(DGPConfig::preset("finland_like", 128));
    LongRunEstimate lr = fit_longrun(
        w.panel, {"gfcf", "highedu", "unemp", "patstock", "rd_per_bus", "rd_per_pub"});
    const auto r = pedroni_pp_test(lr, BandwidthRule::automatic(), moments(), false);
    CHECK(r.decision_at_5pct);
    CHECK(r.standardized_statistic < kNormalLower5pct);
}
