#include "regretlab/games.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "regretlab/errors.hpp"

namespace regretlab {

AdversaryStrategy iid_strategy(const SimplexDist& p, int T) {
    p.validate();
    if (T < 1) throw std::invalid_argument("iid_strategy: T >= 1 required");
    AdversaryStrategy s;
    s.T = T;
    s.num_outcomes = p.size();
    s.kind = StrategyKind::iid;
    s.conditional = [p](const History&) { return p; };
    return s;
}

AdversaryStrategy product_strategy(std::vector<SimplexDist> per_round) {
    if (per_round.empty()) throw std::invalid_argument("product_strategy: empty");
    for (const auto& p : per_round) {
        p.validate();
        if (p.size() != per_round[0].size())
            throw std::invalid_argument("product_strategy: outcome count mismatch");
    }
    AdversaryStrategy s;
    s.T = static_cast<int>(per_round.size());
    s.num_outcomes = per_round[0].size();
    s.kind = StrategyKind::product;
    s.conditional = [ps = std::move(per_round)](const History& h) { return ps.at(h.size()); };
    return s;
}

ShrinkageSchedule c_sequence(int T) {
    if (T < 1) throw std::invalid_argument("c_sequence: T >= 1 required");
    ShrinkageSchedule s;
    s.T = T;
    s.c.assign(static_cast<std::size_t>(T), 0.0);
    double c = 1.0 / T;
    s.c[static_cast<std::size_t>(T - 1)] = c;
    CompensatedSum sum;
    sum.add(c);
    for (int t = T - 1; t >= 1; --t) {
        c = c + c * c;
        s.c[static_cast<std::size_t>(t - 1)] = c;
        sum.add(c);
    }
    s.sum = sum.value();
    return s;
}

AdversaryStrategy quadratic_shrinkage_adversary(int T) {
    if (T < 1) throw std::invalid_argument("quadratic_shrinkage_adversary: T >= 1 required");
    auto sched = c_sequence(T);
    AdversaryStrategy s;
    s.T = T;
    s.num_outcomes = 2;
    s.kind = StrategyKind::dependent;
    s.conditional = [c = std::move(sched.c)](const History& h) {
        double partial = 0.0;
        for (int z : h) partial += (z == 1 ? 1.0 : -1.0);
        double m = c.at(h.size()) * partial;  // c_{t} for round t = |h|+1
        return SimplexDist({(1.0 - m) / 2.0, (1.0 + m) / 2.0});
    };
    return s;
}

std::vector<double> q_invariant_sequence(int T) {
    if (T < 1) throw std::invalid_argument("q_invariant_sequence: T >= 1 required");
    if (T > 20) throw resource_limit_error("q_invariant_sequence: T too large for exact enumeration", 20);
    auto sched = c_sequence(T);
    const auto& c = sched.c;
    // tail[t] = c_{t+1} + ... + c_T
    std::vector<double> tail(static_cast<std::size_t>(T + 1), 0.0);
    for (int t = T - 1; t >= 0; --t)
        tail[static_cast<std::size_t>(t)] = tail[static_cast<std::size_t>(t + 1)] + c[static_cast<std::size_t>(t)];

    std::vector<double> Q(static_cast<std::size_t>(T + 1), 0.0);
    Q[0] = tail[0];  // all sums empty, Z_{1:0} = 0
    for (int t = 1; t <= T; ++t) {
        // E[ sum_{s<=t} (Z_s - E_s Z_s)^2 + c_t Z_{1:t}^2 - sum_{s<=t} Z_s^2 ] + tail
        CompensatedSum acc;
        const std::int64_t paths = std::int64_t{1} << t;
        for (std::int64_t bits = 0; bits < paths; ++bits) {
            double prob = 1.0, partial = 0.0, inner = 0.0;
            for (int s = 1; s <= t; ++s) {
                double m = c[static_cast<std::size_t>(s - 1)] * partial;
                double z = (bits >> (s - 1)) & 1 ? 1.0 : -1.0;
                prob *= (1.0 + z * m) / 2.0;
                inner += (z - m) * (z - m) - 1.0;  // Z_s^2 = 1
                partial += z;
            }
            inner += c[static_cast<std::size_t>(t - 1)] * partial * partial;
            acc.add(prob * inner);
        }
        Q[static_cast<std::size_t>(t)] = acc.value() + tail[static_cast<std::size_t>(t)];
    }
    return Q;
}

Game quadratic_game(int grid_points, bool exact_min) {
    if (grid_points < 2) throw std::invalid_argument("quadratic_game: grid_points >= 2 required");
    Game g;
    g.name = "quadratic";
    g.outcome_labels = {"-1", "+1"};
    g.outcome_coords = {{-1.0}, {1.0}};
    g.embedding_norm = NormTag::abs1d;
    g.action_labels.reserve(static_cast<std::size_t>(grid_points));
    g.action_coords.reserve(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        double f = -1.0 + 2.0 * i / (grid_points - 1);
        g.action_labels.push_back("f" + std::to_string(i));
        g.action_coords.push_back({f});
    }
    g.loss.assign(2, std::vector<double>(static_cast<std::size_t>(grid_points)));
    for (int z = 0; z < 2; ++z) {
        double zz = z == 0 ? -1.0 : 1.0;
        for (int f = 0; f < grid_points; ++f) {
            double d = g.action_coords[static_cast<std::size_t>(f)][0] - zz;
            g.loss[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)] = d * d;
        }
    }
    if (exact_min) g.quad_exact = Game::QuadExact{-1.0, 1.0};
    g.validate();
    return g;
}

Game experts_simple_game(int N, bool include_uniform_action) {
    if (N < 2) throw std::invalid_argument("experts_simple_game: N >= 2 required");
    Game g;
    g.name = "experts-simple";
    g.embedding_norm = NormTag::euclidean;
    for (int i = 0; i < N; ++i) {
        g.outcome_labels.push_back("e" + std::to_string(i + 1));
        std::vector<double> e(static_cast<std::size_t>(N), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        g.outcome_coords.push_back(e);
        g.action_labels.push_back("e" + std::to_string(i + 1));
        g.action_coords.push_back(std::move(e));
    }
    if (include_uniform_action) {
        g.action_labels.push_back("uniform");
        g.action_coords.push_back(std::vector<double>(static_cast<std::size_t>(N), 1.0 / N));
    }
    const int nf = static_cast<int>(g.action_coords.size());
    g.loss.assign(static_cast<std::size_t>(N), std::vector<double>(static_cast<std::size_t>(nf)));
    for (int z = 0; z < N; ++z)
        for (int f = 0; f < nf; ++f)
            g.loss[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)] =
                g.action_coords[static_cast<std::size_t>(f)][static_cast<std::size_t>(z)];
    g.validate();
    return g;
}

Game experts_general_game(int N) {
    if (N < 1 || N > 6) throw std::invalid_argument("experts_general_game: need 1 <= N <= 6");
    Game g;
    g.name = "experts-general";
    g.embedding_norm = NormTag::euclidean;
    const int nz = 1 << N;
    for (int m = 0; m < nz; ++m) {
        std::string lbl = "z";
        std::vector<double> c(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i) {
            int bit = (m >> i) & 1;
            lbl += static_cast<char>('0' + bit);
            c[static_cast<std::size_t>(i)] = bit;
        }
        g.outcome_labels.push_back(lbl);
        g.outcome_coords.push_back(std::move(c));
    }
    for (int i = 0; i < N; ++i) {
        g.action_labels.push_back("e" + std::to_string(i + 1));
        std::vector<double> e(static_cast<std::size_t>(N), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        g.action_coords.push_back(std::move(e));
    }
    g.loss.assign(static_cast<std::size_t>(nz), std::vector<double>(static_cast<std::size_t>(N)));
    for (int m = 0; m < nz; ++m)
        for (int i = 0; i < N; ++i)
            g.loss[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] = (m >> i) & 1;
    g.validate();
    return g;
}

Game disjoint_interval_game(int grid) {
    if (grid < 2 || grid > 64) throw std::invalid_argument("disjoint_interval_game: need 2 <= grid <= 64");
    Game g;
    g.name = "disjoint-interval";
    g.embedding_norm = NormTag::abs1d;
    for (int j = 0; j < grid; ++j) {
        double x = (2.0 * j + 1.0) / (2.0 * grid);
        g.outcome_labels.push_back("z" + std::to_string(j));
        g.outcome_coords.push_back({x});
        g.action_labels.push_back("f" + std::to_string(j));
        g.action_coords.push_back({x});
    }
    g.loss.assign(static_cast<std::size_t>(grid), std::vector<double>(static_cast<std::size_t>(grid)));
    for (int z = 0; z < grid; ++z)
        for (int f = 0; f < grid; ++f)
            g.loss[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)] =
                std::abs(g.outcome_coords[static_cast<std::size_t>(z)][0] - g.action_coords[static_cast<std::size_t>(f)][0]);
    g.validate();
    return g;
}

AdversaryStrategy disjoint_interval_strategy(int T, int grid) {
    if (T < 1) throw std::invalid_argument("disjoint_interval_strategy: T >= 1 required");
    if (grid < T) throw std::invalid_argument("disjoint_interval_strategy: grid >= T required");
    std::vector<SimplexDist> rounds;
    rounds.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        std::vector<double> w(static_cast<std::size_t>(grid), 0.0);
        int count = 0;
        for (int j = 0; j < grid; ++j) {
            double x = (2.0 * j + 1.0) / (2.0 * grid);
            if (static_cast<int>(std::floor(x * T)) == t) {
                w[static_cast<std::size_t>(j)] = 1.0;
                ++count;
            }
        }
        for (double& x : w) x /= count;
        rounds.emplace_back(std::move(w));
    }
    return product_strategy(std::move(rounds));
}

namespace {

// Multinomial probability of counts (c_1..c_N) under T uniform draws, via a
// product of binomials; exact in floating point for desk-scale T.
double multinomial_prob(const std::vector<int>& counts, int T, int N) {
    double prob = 1.0;
    int remaining = T;
    for (int c : counts) {
        // C(remaining, c) * (1/N)^c ... accumulate gradually to avoid overflow
        for (int k = 0; k < c; ++k) prob *= static_cast<double>(remaining - k) / (k + 1);
        remaining -= c;
    }
    return prob * std::pow(1.0 / N, T);
}

}  // namespace

double experts_simple_regret_exact(int N, int T, std::int64_t composition_cap) {
    if (N < 2) throw std::invalid_argument("experts_simple_regret_exact: N >= 2 required");
    if (T < 1) throw std::invalid_argument("experts_simple_regret_exact: T >= 1 required");
    // composition count C(T+N-1, N-1)
    double comps = 1.0;
    for (int i = 1; i < N; ++i) comps *= static_cast<double>(T + i) / i;
    if (comps > static_cast<double>(composition_cap))
        throw resource_limit_error("experts_simple_regret_exact: composition count over cap", composition_cap);
    if (T * std::log(static_cast<double>(N)) > 690.0)
        throw resource_limit_error("experts_simple_regret_exact: N^T not representable", composition_cap);

    CompensatedSum acc;
    std::vector<int> counts(static_cast<std::size_t>(N), 0);
    auto rec = [&](auto&& self, int i, int rem) -> void {
        if (i == N - 1) {
            counts[static_cast<std::size_t>(i)] = rem;
            int cmin = *std::min_element(counts.begin(), counts.end());
            acc.add(multinomial_prob(counts, T, N) * (1.0 / N - static_cast<double>(cmin) / T));
            return;
        }
        for (int c = 0; c <= rem; ++c) {
            counts[static_cast<std::size_t>(i)] = c;
            self(self, i + 1, rem - c);
        }
    };
    rec(rec, 0, T);
    return acc.value();
}

Estimate experts_simple_regret_mc(int N, int T, std::int64_t samples, std::uint64_t seed) {
    if (N < 2 || T < 1 || samples < 2)
        throw std::invalid_argument("experts_simple_regret_mc: bad arguments");
    return mc_run("experts_simple_regret_mc", seed, samples, [N, T](std::int64_t, Rng& rng) {
        std::vector<int> counts(static_cast<std::size_t>(N), 0);
        for (int t = 0; t < T; ++t) counts[static_cast<std::size_t>(rng.uniform_int(N))]++;
        int cmin = *std::min_element(counts.begin(), counts.end());
        return 1.0 / N - static_cast<double>(cmin) / T;
    });
}

Estimate experts_general_lb(int N, int T, std::int64_t samples, std::uint64_t seed) {
    if (N < 1 || T < 1 || samples < 2) throw std::invalid_argument("experts_general_lb: bad arguments");
    const int words = T / 64;
    const int rest = T % 64;
    return mc_run("experts_general_lb", seed, samples, [N, T, words, rest](std::int64_t, Rng& rng) {
        double best = -1e300;
        for (int i = 0; i < N; ++i) {
            std::int64_t ones = 0;
            for (int wi = 0; wi < words; ++wi) ones += std::popcount(rng.bits());
            if (rest > 0) ones += std::popcount(rng.bits() >> (64 - rest));
            best = std::max(best, 0.5 - static_cast<double>(ones) / T);
        }
        return best;
    });
}

BallTrace ball_orthogonal_strategy(int d, int T, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("ball_orthogonal_strategy: d >= 2 required");
    if (T < 1) throw std::invalid_argument("ball_orthogonal_strategy: T >= 1 required");
    Rng rng(substream_seed(seed, "ball_orthogonal_strategy", 0));
    std::vector<double> sum(static_cast<std::size_t>(d), 0.0);
    BallTrace trace;
    trace.norms.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        // unit vector orthogonal to the running sum, fair sign
        std::vector<double> u(static_cast<std::size_t>(d));
        double nrm = 0.0;
        do {
            for (double& x : u) x = rng.normal();
            double s2 = 0.0;
            for (double x : sum) s2 += x * x;
            if (s2 > 0.0) {
                double dot = 0.0;
                for (int i = 0; i < d; ++i) dot += u[static_cast<std::size_t>(i)] * sum[static_cast<std::size_t>(i)];
                for (int i = 0; i < d; ++i) u[static_cast<std::size_t>(i)] -= dot / s2 * sum[static_cast<std::size_t>(i)];
            }
            nrm = 0.0;
            for (double x : u) nrm += x * x;
        } while (nrm < 1e-24);
        nrm = std::sqrt(nrm);
        double sign = (rng.bits() & 1) ? 1.0 : -1.0;
        std::vector<double> step(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            step[static_cast<std::size_t>(i)] = sign * u[static_cast<std::size_t>(i)] / nrm;
            sum[static_cast<std::size_t>(i)] += step[static_cast<std::size_t>(i)];
        }
        trace.steps.push_back(std::move(step));
        double s2 = 0.0;
        for (double x : sum) s2 += x * x;
        trace.norms.push_back(std::sqrt(s2));
    }
    return trace;
}

Estimate ball_iid_two_point(int T, std::int64_t samples, std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("ball_iid_two_point: T >= 1 required");
    if (T <= 30) {
        // exact: E|2B - T| with B ~ Binomial(T, 1/2)
        double pmf = std::pow(0.5, T);  // P(B = 0)
        double e = 0.0;
        for (int b = 0; b <= T; ++b) {
            e += pmf * std::abs(2.0 * b - T);
            pmf *= static_cast<double>(T - b) / (b + 1);
        }
        return {e, 0.0, 0};
    }
    if (samples < 2) throw std::invalid_argument("ball_iid_two_point: samples >= 2 required");
    const int words = T / 64;
    const int rest = T % 64;
    return mc_run("ball_iid_two_point", seed, samples, [T, words, rest](std::int64_t, Rng& rng) {
        std::int64_t ones = 0;
        for (int wi = 0; wi < words; ++wi) ones += std::popcount(rng.bits());
        if (rest > 0) ones += std::popcount(rng.bits() >> (64 - rest));
        return std::abs(2.0 * static_cast<double>(ones) - T);
    });
}

Estimate ball_symmetric_iid_check(int d, int T, std::int64_t samples, std::uint64_t seed) {
    if (d < 1 || T < 1 || samples < 2)
        throw std::invalid_argument("ball_symmetric_iid_check: bad arguments");
    return mc_run("ball_symmetric_iid_check", seed, samples, [d, T](std::int64_t, Rng& rng) {
        std::vector<double> sum(static_cast<std::size_t>(d), 0.0);
        std::vector<double> u(static_cast<std::size_t>(d));
        for (int t = 0; t < T; ++t) {
            double nrm = 0.0;
            do {
                nrm = 0.0;
                for (double& x : u) {
                    x = rng.normal();
                    nrm += x * x;
                }
            } while (nrm < 1e-24);
            nrm = std::sqrt(nrm);
            for (int i = 0; i < d; ++i) sum[static_cast<std::size_t>(i)] += u[static_cast<std::size_t>(i)] / nrm;
        }
        double s2 = 0.0;
        for (double x : sum) s2 += x * x;
        return std::sqrt(s2);
    });
}

}  // namespace regretlab
