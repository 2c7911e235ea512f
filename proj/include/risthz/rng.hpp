#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "risthz/types.hpp"

namespace risthz {

// Named sub-streams of one Monte Carlo trial. Keeping them separate means a
// change of solver or error level never shifts the channel draws, so paired
// comparisons see identical realizations.
enum class Stream : std::uint64_t {
    geometry = 1,
    visibility = 2,
    channel = 3,
    csi = 4,
    optimizer = 5,
    symbols = 6,
};

// splitmix64 finalizer; used only to decorrelate derived seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    // Counter-derived stream: (master seed, trial index, stream tag).
    static Rng for_trial(std::uint64_t master, std::uint64_t trial, Stream stream)
    {
        const auto s = mix_seed(mix_seed(master) ^ mix_seed(trial * 0x100000001b3ULL + static_cast<std::uint64_t>(stream)));
        return Rng(s);
    }

    double uniform() { return unit_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }
    double normal() { return normal_(engine_); }

    // Uniform phase on [-pi, pi).
    double phase() { return -kPi + 2.0 * kPi * unit_(engine_); }

    // Circularly symmetric complex normal with E|z|^2 = variance.
    cdouble complex_normal(double variance = 1.0)
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    bool bernoulli(double p) { return unit_(engine_) < p; }

    CMat complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0)
    {
        CMat out(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                out(i, j) = complex_normal(variance);
        return out;
    }

    CVec complex_normal_vector(Eigen::Index n, double variance = 1.0)
    {
        CVec out(n);
        for (Eigen::Index i = 0; i < n; ++i)
            out(i) = complex_normal(variance);
        return out;
    }

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace risthz
