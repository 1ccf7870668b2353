#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace regretlab {

// One global 64-bit seed; every estimator derives an independent substream by
// hashing (seed, operation-name, replicate-index). Estimates are therefore
// reproducible regardless of execution order or worker count.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view op, std::uint64_t replicate);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
    // uniform integer in [0, n)
    int uniform_int(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }
    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

// Worker count for parallel estimators; REGRETLAB_THREADS caps it.
int worker_count();

// Runs fn(i) for i in [0, n) across workers with a static partition.
// Results must be written to disjoint slots; no shared accumulation.
// Stays serial below `grain` items.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn,
                  std::int64_t grain = 256);

// Deterministic pairwise summation in fixed order; the result is independent
// of the worker count that produced the buffer.
double pairwise_sum(std::span<const double> v);

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::int64_t samples = 0;
};

// Monte Carlo driver: one substream per replicate, pairwise-reduced mean and
// standard error. Bit-stable for a given seed across worker counts.
Estimate mc_run(std::string_view op, std::uint64_t seed, std::int64_t samples,
                const std::function<double(std::int64_t, Rng&)>& replicate);

// Neumaier compensated accumulator for sums with heavy cancellation.
class CompensatedSum {
public:
    void add(double x) {
        double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace regretlab
