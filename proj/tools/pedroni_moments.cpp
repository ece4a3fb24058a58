// Generates the standardization-moment table for the pooled residual
// unit-root statistics (panel and group-mean Phillips-Perron t variants).
//
// Under the no-cointegration null each member contributes functionals of a
// demeaned random walk projected on the regressor walks. Their moments
// depend on the member window length, so the table carries finite-sample
// rows on a T grid (the largest T approximates the asymptotic values; the
// test interpolates in 1/T). Member statistics are computed by the same
// routine the test itself uses, including the Bartlett kernel correction at
// the automatic bandwidth, so the tabulated construction cannot drift from
// the tested one.
//
// Panel variant: Z = sum(num_i) / sqrt(mean(lrv_i) * sum(den_i)); the
// mean/variance adjustment comes from a second-order delta expansion in the
// member moments of (num, den, lrv). Group variant: member t-ratios, direct
// moments. Standardization in both cases: (Z - mean*sqrt(N)) / sqrt(var).
//
// The table ships as data/pedroni_adjustments.csv; rerun this tool to
// regenerate or refine it.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "regrowth/longrun.hpp"
#include "regrowth/stats.hpp"

namespace {

struct Accum {
    // raw moments of (a=num, b=den, l=lrv) and of the member t-ratio
    double sa = 0, sb = 0, sl = 0;
    double saa = 0, sbb = 0, sll = 0, sab = 0, sal = 0, sbl = 0;
    double st = 0, stt = 0;
    long n = 0;

    void add(const regrowth::PedroniMemberStats& ms) {
        const double a = ms.num, b = ms.den, l = ms.lrv;
        sa += a;
        sb += b;
        sl += l;
        saa += a * a;
        sbb += b * b;
        sll += l * l;
        sab += a * b;
        sal += a * l;
        sbl += b * l;
        const double t = a / std::sqrt(std::max(l * b, 1e-300));
        st += t;
        stt += t * t;
        ++n;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulate standardization moments for the pooled PP statistics"};
    int reps = 200000;
    int max_regressors = 7;
    std::uint64_t seed = 20240817ULL;
    std::string out_path = "data/pedroni_adjustments.csv";
    std::vector<int> window_grid = {12, 16, 20, 24, 28, 32, 40, 60, 100, 250, 1000};
    app.add_option("--reps", reps, "Monte Carlo replications per window length");
    app.add_option("--max-regressors", max_regressors, "largest regressor count");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--windows", window_grid, "window-length grid");
    CLI11_PARSE(app, argc, argv);

    const int dims = max_regressors + 1;
    const regrowth::BandwidthRule rule = regrowth::BandwidthRule::automatic();

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 1;
    }
    out << "# Standardization moments for the pooled residual unit-root statistics\n";
    out << "# (panel_pp and group_pp variants), by regressor count and member window\n";
    out << "# length. Finite-sample Monte Carlo of the exact member construction\n";
    out << "# (demeaned projected random walk, AR(1) residuals, Bartlett kernel at\n";
    out << "# the automatic bandwidth). The largest window approximates the\n";
    out << "# asymptotic values; lookups interpolate in 1/T.\n";
    out << "# Generated by tools/pedroni_moments.cpp with reps=" << reps
        << " seed=" << seed << ".\n";
    out << "statistic,num_regressors,window_length,mean,variance\n";
    out.precision(10);

    for (int big_t : window_grid) {
        // fewer reps on long paths keep the total cost bounded
        const int reps_t = big_t > 100 ? std::max(reps / 10, 1000) : reps;
        std::vector<Accum> acc(static_cast<std::size_t>(max_regressors) + 1);
        regrowth::Rng rng(seed + static_cast<std::uint64_t>(big_t));
        Eigen::MatrixXd w(big_t, dims);
        Eigen::VectorXd q(big_t);
        for (int rep = 0; rep < reps_t; ++rep) {
            for (int j = 0; j < dims; ++j) {
                double s = 0.0;
                for (int t = 0; t < big_t; ++t) {
                    s += rng.normal();
                    w(t, j) = s;
                }
            }
            const Eigen::RowVectorXd means = w.colwise().mean();
            w.rowwise() -= means;
            for (int m = 0; m <= max_regressors; ++m) {
                if (m == 0) {
                    q = w.col(0);
                } else {
                    const auto x = w.middleCols(1, m);
                    const Eigen::VectorXd proj =
                        (x.transpose() * x).ldlt().solve(x.transpose() * w.col(0));
                    q = w.col(0) - x * proj;
                }
                acc[static_cast<std::size_t>(m)].add(regrowth::pedroni_member_stats(q, rule));
            }
        }
        for (int m = 0; m <= max_regressors; ++m) {
            const Accum& a = acc[static_cast<std::size_t>(m)];
            const double n = static_cast<double>(a.n);
            const double ea = a.sa / n, eb = a.sb / n, el = a.sl / n;
            const double vaa = a.saa / n - ea * ea;
            const double vbb = a.sbb / n - eb * eb;
            const double vll = a.sll / n - el * el;
            const double vab = a.sab / n - ea * eb;
            const double val = a.sal / n - ea * el;
            const double vbl = a.sbl / n - eb * el;
            // Z = sqrt(N) * g(mean a, mean b, mean l), g = a / sqrt(l b)
            const double mu_panel = ea / std::sqrt(el * eb);
            const double ga = 1.0 / std::sqrt(el * eb);
            const double gb = -0.5 * ea / (std::sqrt(el) * std::pow(eb, 1.5));
            const double gl = -0.5 * ea / (std::sqrt(eb) * std::pow(el, 1.5));
            const double v_panel = ga * ga * vaa + gb * gb * vbb + gl * gl * vll +
                                   2.0 * ga * gb * vab + 2.0 * ga * gl * val +
                                   2.0 * gb * gl * vbl;
            const double mu_group = a.st / n;
            const double v_group = a.stt / n - mu_group * mu_group;
            out << "panel_pp," << m << ',' << big_t << ',' << mu_panel << ',' << v_panel
                << "\n";
            out << "group_pp," << m << ',' << big_t << ',' << mu_group << ',' << v_group
                << "\n";
        }
        std::cerr << "window " << big_t << " done (" << reps_t << " reps)\n";
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}
