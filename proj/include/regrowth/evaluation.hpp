#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "regrowth/growth_model.hpp"
#include "regrowth/panel.hpp"
#include "regrowth/stats.hpp"

namespace regrowth {

struct EvalReport {
    double r_squared = 0.0;
    double rmse = 0.0;           // percent units
    double benchmark_rmse = 0.0; // percent units
    double relative_rmse = 0.0;  // rmse / benchmark_rmse
};

// Panel AR(max_lag) of growth with region effects: the benchmark every
// relative-RMSE figure is measured against.
DesignMatrix build_growth_ar_benchmark(const PanelDataset& ds, int max_lag = 4,
                                       std::optional<std::pair<int, int>> window = {},
                                       const std::string& response_var = "gdp");

// Fits the candidate design and the AR(4) benchmark on their common usable
// rows and compares in-sample RMSEs. Passing the benchmark design as the
// candidate gives a ratio of exactly one.
EvalReport relative_rmse(const DesignMatrix& model_design, const std::string& model_estimator,
                         const PanelDataset& ds, int benchmark_max_lag = 4,
                         const std::string& response_var = "gdp");

// Convenience wrapper: evaluates a fitted growth model against the benchmark
// and stores the ratio on the estimate.
EvalReport evaluate_growth(const PanelDataset& ds, GrowthEstimate& estimate,
                           const LongRunEstimate* longrun,
                           const NationalSeries& national_growth_pct);

// Runs fn(rep, seed) for every replication with deterministically derived
// per-replication seeds; results come back in replication order regardless
// of the thread count.
template <typename T>
std::vector<T> monte_carlo(int n_reps, std::uint64_t master_seed, int threads,
                           const std::function<T(int, std::uint64_t)>& fn) {
    std::vector<T> results(static_cast<std::size_t>(std::max(n_reps, 0)));
    if (n_reps <= 0) return results;
    threads = std::max(1, threads);
    if (threads == 1) {
        for (int rep = 0; rep < n_reps; ++rep) {
            results[rep] = fn(rep, Rng::derive_seed(master_seed, rep));
        }
        return results;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const int rep = next.fetch_add(1);
                if (rep >= n_reps) break;
                results[rep] = fn(rep, Rng::derive_seed(master_seed, rep));
            }
        });
    }
    for (auto& th : pool) th.join();
    return results;
}

} // namespace regrowth
