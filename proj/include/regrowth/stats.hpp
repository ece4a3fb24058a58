#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace regrowth {

// Seedable, portable random source. std::mt19937_64 has a fully specified
// sequence; uniform and normal draws are derived here with fixed algorithms
// (53-bit mantissa scaling, Box-Muller) instead of the standard-library
// distributions, whose output is implementation-defined. Identical seeds give
// identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; one pair of uniforms per draw.
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    std::uint64_t next_u64() { return engine_(); }

    // Deterministic per-replication seed derived from a master seed.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
        // splitmix64 step over master ^ index
        std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

// Distribution tail functions used for test statistics.
double normal_cdf(double x);
double normal_sf(double x);
// Upper-tail probability of a chi-square variate with dof degrees of freedom.
double chi_square_sf(double x, int dof);
// Two-sided p-value of a Student-t statistic.
double student_t_pvalue(double t, int dof);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);
// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Lower 5% critical value of the standard normal.
inline constexpr double kNormalLower5pct = -1.6448536269514722;
// Two-sided 90% / 95% normal quantiles.
inline constexpr double kNormal90TwoSided = 1.6448536269514722;
inline constexpr double kNormal95TwoSided = 1.9599639845400545;

double mean_of(const std::vector<double>& v);
double stddev_of(const std::vector<double>& v); // sample sd, n-1 denominator
double median_of(std::vector<double> v);        // by copy, sorts
double correlation(const std::vector<double>& a, const std::vector<double>& b);

} // namespace regrowth
