#include "regretlab/rng.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace regretlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::string_view op, std::uint64_t replicate) {
    std::uint64_t x = splitmix64(seed ^ fnv1a64(op));
    return splitmix64(x ^ splitmix64(replicate));
}

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("REGRETLAB_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn,
                  std::int64_t grain) {
    if (n <= 0) return;
    int workers = std::min<std::int64_t>(worker_count(), n);
    if (workers <= 1 || n < grain) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        std::int64_t lo = n * w / workers;
        std::int64_t hi = n * (w + 1) / workers;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

Estimate mc_run(std::string_view op, std::uint64_t seed, std::int64_t samples,
                const std::function<double(std::int64_t, Rng&)>& replicate) {
    std::vector<double> vals(static_cast<std::size_t>(samples));
    parallel_for(samples, [&](std::int64_t i) {
        Rng rng(substream_seed(seed, op, static_cast<std::uint64_t>(i)));
        vals[static_cast<std::size_t>(i)] = replicate(i, rng);
    });
    double mean = pairwise_sum(vals) / static_cast<double>(samples);
    double se = 0.0;
    if (samples > 1) {
        std::vector<double> sq(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            double d = vals[i] - mean;
            sq[i] = d * d;
        }
        double var = pairwise_sum(sq) / static_cast<double>(samples - 1);
        se = std::sqrt(var / static_cast<double>(samples));
    }
    return {mean, se, samples};
}

}  // namespace regretlab
