#include "regretlab/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "regretlab/divergence.hpp"
#include "regretlab/errors.hpp"

namespace regretlab {

namespace {

double coord_dist(const Game& game, int f, int g) {
    const auto& a = game.action_coords[static_cast<std::size_t>(f)];
    const auto& b = game.action_coords[static_cast<std::size_t>(g)];
    NormTag tag = game.embedding_norm.value_or(NormTag::euclidean);
    double d = 0.0;
    switch (tag) {
        case NormTag::euclidean:
            for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(d);
        case NormTag::sup:
            for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
            return d;
        case NormTag::abs1d:
            return std::abs(a[0] - b[0]);
    }
    return d;
}

double l1_dist(const SimplexDist& p, const SimplexDist& q) {
    double d = 0.0;
    for (int z = 0; z < p.size(); ++z) d += std::abs(p[z] - q[z]);
    return d;
}

SimplexDist random_simplex_point(int n, Rng& rng) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double s = 0.0;
    for (double& x : w) {
        x = -std::log(std::max(rng.uniform(), 1e-300));
        s += x;
    }
    for (double& x : w) x /= s;
    return SimplexDist(std::move(w));
}

// smallest positive nearest-neighbour spacing of the action grid
double grid_step(const Game& game) {
    double best = std::numeric_limits<double>::infinity();
    const int nf = game.num_actions();
    for (int f = 0; f < nf; ++f) {
        double nn = std::numeric_limits<double>::infinity();
        for (int g = 0; g < nf; ++g) {
            if (g == f) continue;
            double d = coord_dist(game, f, g);
            if (d > 0.0) nn = std::min(nn, d);
        }
        if (std::isfinite(nn)) best = std::min(best, nn);
    }
    return std::isfinite(best) ? best : 0.0;
}

}  // namespace

ConstantEstimates estimate_constants(const Game& game) {
    if (game.action_coords.empty() || !game.embedding_norm)
        throw std::invalid_argument("estimate_constants: action embedding with norm tag required");
    const int nz = game.num_outcomes();
    const int nf = game.num_actions();
    if (static_cast<std::int64_t>(nf) * nf * nz > 200'000'000)
        throw resource_limit_error("estimate_constants: pair scan too large", 200'000'000);

    // midpoint lookup by quantized coordinates
    std::map<std::vector<long long>, int> index;
    auto key = [&](const std::vector<double>& c) {
        std::vector<long long> k(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) k[i] = std::llround(c[i] * 1e9);
        return k;
    };
    for (int f = 0; f < nf; ++f) index[key(game.action_coords[static_cast<std::size_t>(f)])] = f;

    ConstantEstimates est;
    est.norm_tag = *game.embedding_norm;
    double min_ratio = std::numeric_limits<double>::infinity();
    bool any_negative = false;
    bool any_midpoint = false;
    for (int f = 0; f < nf; ++f) {
        for (int g = f + 1; g < nf; ++g) {
            double dist = coord_dist(game, f, g);
            if (dist <= 0.0) continue;
            double maxdiff = 0.0;
            for (int z = 0; z < nz; ++z)
                maxdiff = std::max(maxdiff, std::abs(loss_at(game, z, f) - loss_at(game, z, g)));
            est.lipschitz_L = std::max(est.lipschitz_L, maxdiff / dist);

            std::vector<double> mid(game.action_coords[static_cast<std::size_t>(f)].size());
            for (std::size_t i = 0; i < mid.size(); ++i)
                mid[i] = 0.5 * (game.action_coords[static_cast<std::size_t>(f)][i] +
                                game.action_coords[static_cast<std::size_t>(g)][i]);
            auto it = index.find(key(mid));
            if (it == index.end()) continue;
            any_midpoint = true;
            for (int z = 0; z < nz; ++z) {
                double deficit =
                    0.5 * (loss_at(game, z, f) + loss_at(game, z, g)) - loss_at(game, z, it->second);
                if (deficit < 0.0) any_negative = true;
                min_ratio = std::min(min_ratio, deficit / (dist * dist));
            }
        }
    }
    if (!any_midpoint || any_negative || min_ratio <= 0.0) {
        est.strong_convexity_sigma = 0.0;
        est.alpha_infinite = true;
        est.alpha = std::numeric_limits<double>::infinity();
    } else {
        est.strong_convexity_sigma = 8.0 * min_ratio;
        est.alpha = 2.0 * est.lipschitz_L * est.lipschitz_L / est.strong_convexity_sigma;
    }
    return est;
}

namespace {

double flatness_margin(const Game& game, const SimplexDist& p, const SimplexDist& q, double alpha) {
    return bregman_divergence(game, q, p).value - alpha * l1_dist(p, q) * l1_dist(p, q);
}

}  // namespace

BoundCheckResult flatness_check(const Game& game, double alpha, std::int64_t pairs,
                                std::uint64_t seed) {
    if (alpha < 0.0) throw std::invalid_argument("flatness_check: alpha >= 0 required");
    const int nz = game.num_outcomes();
    BoundCheckResult res;
    res.bound_value = 0.0;
    res.observed_value = -std::numeric_limits<double>::infinity();
    Rng rng(substream_seed(seed, "flatness_check", 0));
    for (std::int64_t i = 0; i < pairs; ++i) {
        SimplexDist p = random_simplex_point(nz, rng);
        SimplexDist q = random_simplex_point(nz, rng);
        double margin = flatness_margin(game, p, q, alpha);
        if (margin > res.observed_value) {
            res.observed_value = margin;
            if (margin > 1e-9)
                res.witness = "pair #" + std::to_string(i) + " margin " + std::to_string(margin);
        }
    }
    res.holds = res.observed_value <= res.bound_value + 1e-9;
    return res;
}

std::optional<std::pair<SimplexDist, SimplexDist>> find_flatness_witness(const Game& game,
                                                                         double alpha,
                                                                         std::uint64_t seed) {
    const int nz = game.num_outcomes();
    Rng rng(substream_seed(seed, "find_flatness_witness", 0));
    std::vector<SimplexDist> bases{SimplexDist::uniform(nz)};
    for (int i = 0; i < 32; ++i) bases.push_back(random_simplex_point(nz, rng));
    for (const auto& base : bases) {
        for (int i = 0; i < nz; ++i) {
            for (int j = 0; j < nz; ++j) {
                if (i == j) continue;
                for (double delta = 0.25; delta >= 1e-8; delta *= 0.5) {
                    // straddle base along e_i - e_j
                    auto shift = [&](double d) {
                        std::vector<double> w = base.w;
                        double amount = std::min({d, w[static_cast<std::size_t>(j)],
                                                  1.0 - w[static_cast<std::size_t>(i)]});
                        if (amount <= 0.0) return SimplexDist(w);
                        w[static_cast<std::size_t>(i)] += amount;
                        w[static_cast<std::size_t>(j)] -= amount;
                        return SimplexDist(std::move(w));
                    };
                    SimplexDist hi = shift(delta);
                    SimplexDist lo = shift(-0.0);
                    if (flatness_margin(game, lo, hi, alpha) > 1e-9) return std::make_pair(lo, hi);
                    if (flatness_margin(game, hi, lo, alpha) > 1e-9) return std::make_pair(hi, lo);
                }
            }
        }
    }
    return std::nullopt;
}

BoundCheckResult stability_check(const Game& game, std::int64_t pairs, std::uint64_t seed) {
    auto est = estimate_constants(game);
    if (est.strong_convexity_sigma <= 0.0)
        throw not_applicable_error("stability_check: sigma = 0, bound not applicable");
    const double ratio_bound = 2.0 * est.lipschitz_L / est.strong_convexity_sigma;
    const double slack = game.quad_exact ? 0.0 : grid_step(game);
    const int nz = game.num_outcomes();

    auto minimizer_dist = [&](const SimplexDist& p, const SimplexDist& q) {
        if (game.quad_exact) {
            PhiResult a = phi(game, p), b = phi(game, q);
            return std::abs(*a.minimizer_coord - *b.minimizer_coord);
        }
        int fp = phi(game, p).argmin_indices.front();
        int fq = phi(game, q).argmin_indices.front();
        return coord_dist(game, fp, fq);
    };

    BoundCheckResult res;
    res.bound_value = ratio_bound;
    res.observed_value = 0.0;
    res.holds = true;
    Rng rng(substream_seed(seed, "stability_check", 0));
    for (std::int64_t i = 0; i < pairs; ++i) {
        SimplexDist p = random_simplex_point(nz, rng);
        SimplexDist q = random_simplex_point(nz, rng);
        double l1 = l1_dist(p, q);
        if (l1 <= 0.0) continue;
        double d = minimizer_dist(p, q);
        if (d > ratio_bound * l1 + slack + 1e-9) {
            res.holds = false;
            res.witness = "pair #" + std::to_string(i) + " dist " + std::to_string(d) + " vs l1 " +
                          std::to_string(l1);
        }
        if (l1 >= std::max(slack, 1e-12))
            res.observed_value = std::max(res.observed_value, (d - slack) / l1);
    }
    return res;
}

double log_t_bound(double alpha, int T) {
    if (T < 2) throw std::invalid_argument("log_t_bound: T >= 2 required");
    if (alpha < 0.0) throw std::invalid_argument("log_t_bound: alpha >= 0 required");
    return 4.0 * alpha * std::log(static_cast<double>(T));
}

// ---------------------------------------------------------------------------
// Rademacher

namespace {

// exact E_eps sup_f |sum_t eps_t loss(Z_t, f)| over all 2^T sign vectors,
// iterated in Gray-code order so each step flips one round.
double rademacher_exact_sum(const Game& game, const History& sample) {
    const int T = static_cast<int>(sample.size());
    const int nf = game.num_actions();
    std::vector<double> sums(static_cast<std::size_t>(nf), 0.0);
    for (int z : sample)
        for (int f = 0; f < nf; ++f)
            sums[static_cast<std::size_t>(f)] += game.loss[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)];
    std::vector<int> sign(static_cast<std::size_t>(T), 1);
    auto supabs = [&] {
        double m = 0.0;
        for (double s : sums) m = std::max(m, std::abs(s));
        return m;
    };
    double total = supabs();
    const std::uint64_t count = std::uint64_t{1} << T;
    for (std::uint64_t k = 1; k < count; ++k) {
        int t = std::countr_zero(k);
        double factor = -2.0 * sign[static_cast<std::size_t>(t)];
        sign[static_cast<std::size_t>(t)] = -sign[static_cast<std::size_t>(t)];
        const auto& row = game.loss[static_cast<std::size_t>(sample[static_cast<std::size_t>(t)])];
        for (int f = 0; f < nf; ++f) sums[static_cast<std::size_t>(f)] += factor * row[static_cast<std::size_t>(f)];
        total += supabs();
    }
    return total / static_cast<double>(count);
}

}  // namespace

Estimate rademacher_average(const Game& game, const History& sample, std::int64_t eps_draws,
                            std::uint64_t seed) {
    if (sample.empty()) throw std::invalid_argument("rademacher_average: empty sample");
    const int T = static_cast<int>(sample.size());
    for (int z : sample)
        if (z < 0 || z >= game.num_outcomes()) throw std::out_of_range("rademacher_average: outcome index");
    if (T <= 20) {
        double mean = rademacher_exact_sum(game, sample) / std::sqrt(static_cast<double>(T));
        return {mean, 0.0, 0};
    }
    if (eps_draws < 2) throw std::invalid_argument("rademacher_average: eps_draws >= 2 required");
    const int nf = game.num_actions();
    Estimate est = mc_run("rademacher_average", seed, eps_draws, [&](std::int64_t, Rng& rng) {
        std::vector<double> sums(static_cast<std::size_t>(nf), 0.0);
        for (int t = 0; t < T; ++t) {
            double s = (rng.bits() & 1) ? 1.0 : -1.0;
            const auto& row = game.loss[static_cast<std::size_t>(sample[static_cast<std::size_t>(t)])];
            for (int f = 0; f < nf; ++f) sums[static_cast<std::size_t>(f)] += s * row[static_cast<std::size_t>(f)];
        }
        double m = 0.0;
        for (double x : sums) m = std::max(m, std::abs(x));
        return m / std::sqrt(static_cast<double>(T));
    });
    return est;
}

BoundCheckResult rademacher_upper_bound(const Game& game, int T, std::int64_t search_budget,
                                        std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("rademacher_upper_bound: T >= 1 required");
    const int nz = game.num_outcomes();
    double space = std::pow(static_cast<double>(nz), T);

    double best_rad = 0.0;
    double best_stderr = 0.0;
    History best_seq;
    auto consider = [&](const History& h) {
        Estimate e = rademacher_average(game, h, 4096, seed);
        if (e.value > best_rad) {
            best_rad = e.value;
            best_stderr = e.stderr_;
            best_seq = h;
        }
    };

    if (space <= static_cast<double>(std::min<std::int64_t>(search_budget, 200'000))) {
        History h(static_cast<std::size_t>(T), 0);
        std::int64_t total = static_cast<std::int64_t>(space);
        for (std::int64_t k = 0; k < total; ++k) {
            std::int64_t v = k;
            for (int t = 0; t < T; ++t) {
                h[static_cast<std::size_t>(t)] = static_cast<int>(v % nz);
                v /= nz;
            }
            consider(h);
        }
    } else {
        Rng rng(substream_seed(seed, "rademacher_upper_bound", 0));
        int restarts = 8;
        for (int r = 0; r < restarts; ++r) {
            History h(static_cast<std::size_t>(T));
            for (auto& z : h) z = rng.uniform_int(nz);
            consider(h);
            // coordinate-wise greedy replacement
            bool improved = true;
            std::int64_t used = 0;
            while (improved && used < search_budget / restarts) {
                improved = false;
                for (int t = 0; t < T; ++t) {
                    History trial = best_seq.empty() ? h : best_seq;
                    double before = best_rad;
                    for (int z = 0; z < nz; ++z) {
                        trial[static_cast<std::size_t>(t)] = z;
                        consider(trial);
                        ++used;
                    }
                    if (best_rad > before + 1e-12) improved = true;
                }
            }
        }
    }

    double minimax = minimax_value(game, T).value;
    BoundCheckResult res;
    res.observed_value = minimax;
    res.bound_value = 2.0 * std::sqrt(static_cast<double>(T)) * best_rad + 4.0 * best_stderr;
    res.holds = res.observed_value <= res.bound_value + 1e-9;
    if (!res.holds) res.witness = "minimax exceeds Rademacher bound";
    return res;
}

// ---------------------------------------------------------------------------
// Gaussian lower bound

namespace {

// cyclic Jacobi eigendecomposition of a symmetric matrix; returns eigenvalues
// and column eigenvectors.
void jacobi_eigen(std::vector<std::vector<double>> a, std::vector<double>& values,
                  std::vector<std::vector<double>>& vectors) {
    const int n = static_cast<int>(a.size());
    vectors.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) vectors[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (off < 1e-26) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
                if (std::abs(apq) < 1e-300) continue;
                double app = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)];
                double aqq = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
                    double akq = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                    a[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] = c * akp - s * akq;
                    a[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)];
                    double aqk = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)];
                    a[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)] = c * apk - s * aqk;
                    a[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
                    double vkq = vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                    vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] = c * vkp - s * vkq;
                    vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
}

}  // namespace

GaussianLbResult gaussian_lb_estimate(const Game& game, const SimplexDist& p,
                                      const std::vector<int>& Q, int f_star, int T,
                                      std::int64_t samples, std::uint64_t seed,
                                      std::int64_t composition_cap) {
    if (T < 1) throw std::invalid_argument("gaussian_lb_estimate: T >= 1 required");
    PhiResult ph = phi(game, p);
    const auto& fstar_set = ph.argmin_indices;
    if (game.quad_exact || fstar_set.size() < 2)
        throw not_applicable_error("gaussian_lb_estimate: differentiable point (singleton argmin)");
    auto in_fstar = [&](int f) {
        return std::find(fstar_set.begin(), fstar_set.end(), f) != fstar_set.end();
    };
    if (Q.empty()) throw std::invalid_argument("gaussian_lb_estimate: empty Q");
    for (int f : Q)
        if (!in_fstar(f)) throw std::invalid_argument("gaussian_lb_estimate: Q not inside argmin set");
    if (std::find(Q.begin(), Q.end(), f_star) == Q.end())
        throw std::invalid_argument("gaussian_lb_estimate: f_star must belong to Q");

    const int nz = game.num_outcomes();
    const int m = static_cast<int>(Q.size());
    // shifted rows r_i(z) = loss(z, Q_i) - loss(z, f_star)
    std::vector<std::vector<double>> r(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(nz)));
    for (int i = 0; i < m; ++i)
        for (int z = 0; z < nz; ++z)
            r[static_cast<std::size_t>(i)][static_cast<std::size_t>(z)] =
                loss_at(game, z, Q[static_cast<std::size_t>(i)]) - loss_at(game, z, f_star);
    std::vector<double> mean(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i)
        for (int z = 0; z < nz; ++z) mean[static_cast<std::size_t>(i)] += p[z] * r[static_cast<std::size_t>(i)][static_cast<std::size_t>(z)];

    GaussianLbResult res;
    res.covariance.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double e = 0.0;
            for (int z = 0; z < nz; ++z)
                e += p[z] * r[static_cast<std::size_t>(i)][static_cast<std::size_t>(z)] * r[static_cast<std::size_t>(j)][static_cast<std::size_t>(z)];
            double c = e - mean[static_cast<std::size_t>(i)] * mean[static_cast<std::size_t>(j)];
            res.covariance[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c;
            res.covariance[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = c;
        }

    std::vector<double> evals;
    std::vector<std::vector<double>> evecs;
    jacobi_eigen(res.covariance, evals, evecs);
    for (double& v : evals) {
        if (v < 0.0) {
            if (v < -1e-10) res.eig_clipped = true;
            v = 0.0;
        }
    }
    // factor column i scaled by sqrt(lambda_i)
    std::vector<std::vector<double>> fac(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            fac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                evecs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * std::sqrt(evals[static_cast<std::size_t>(j)]);

    if (samples < 2) throw std::invalid_argument("gaussian_lb_estimate: samples >= 2 required");
    Estimate est = mc_run("gaussian_lb_estimate", seed, samples, [&](std::int64_t, Rng& rng) {
        std::vector<double> xi(static_cast<std::size_t>(m));
        for (double& x : xi) x = rng.normal();
        double sup_pos = -std::numeric_limits<double>::infinity();
        double sup_neg = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            double g = 0.0;
            for (int j = 0; j < m; ++j) g += fac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * xi[static_cast<std::size_t>(j)];
            sup_pos = std::max(sup_pos, g);
            sup_neg = std::max(sup_neg, -g);
        }
        return 0.5 * (sup_pos + sup_neg);  // antithetic pair
    });
    res.sup_mean = est.value;
    res.sup_stderr = est.stderr_;
    res.scale = est.value / std::sqrt(static_cast<double>(T));

    // exact fluctuation over the full argmin set by composition enumeration
    double comps = 1.0;
    for (int i = 1; i < nz; ++i) comps *= static_cast<double>(T + i) / i;
    if (comps <= static_cast<double>(composition_cap)) {
        const auto& fs = fstar_set;
        std::vector<double> expected(fs.size());
        for (std::size_t i = 0; i < fs.size(); ++i) {
            expected[i] = 0.0;
            for (int z = 0; z < nz; ++z) expected[i] += p[z] * loss_at(game, z, fs[i]);
        }
        CompensatedSum acc;
        std::vector<int> counts(static_cast<std::size_t>(nz), 0);
        auto rec = [&](auto&& self, int z, int rem, double logprob) -> void {
            if (z == nz - 1) {
                counts[static_cast<std::size_t>(z)] = rem;
                double lp = logprob + (p[z] > 0.0 ? rem * std::log(p[z]) : (rem > 0 ? -1e30 : 0.0));
                // multinomial coefficient via lgamma
                double lc = std::lgamma(T + 1.0);
                for (int zz = 0; zz < nz; ++zz) lc -= std::lgamma(counts[static_cast<std::size_t>(zz)] + 1.0);
                double prob = std::exp(lc + lp);
                if (prob > 0.0) {
                    double sup = -std::numeric_limits<double>::infinity();
                    for (std::size_t i = 0; i < fs.size(); ++i) {
                        double emp = 0.0;
                        for (int zz = 0; zz < nz; ++zz)
                            emp += static_cast<double>(counts[static_cast<std::size_t>(zz)]) / T *
                                   loss_at(game, zz, fs[i]);
                        sup = std::max(sup, expected[i] - emp);
                    }
                    acc.add(prob * sup);
                }
                return;
            }
            for (int c = 0; c <= rem; ++c) {
                counts[static_cast<std::size_t>(z)] = c;
                double lp = logprob;
                if (c > 0) {
                    if (p[z] <= 0.0) continue;
                    lp += c * std::log(p[z]);
                }
                self(self, z + 1, rem - c, lp);
            }
        };
        rec(rec, 0, T, 0.0);
        res.exact_fluctuation = acc.value();
    }
    return res;
}

RecursiveBoundTerms recursive_upper_bound_terms(const Game& game, const JointDistTree& joint,
                                                std::int64_t path_cap) {
    RecursiveBoundTerms out;
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(joint.T));
    const int nz = joint.num_outcomes;
    enumerate_tree(
        joint,
        [&](double prob, const History& h, const SimplexDist& cond) {
            const int t = static_cast<int>(h.size()) + 1;
            // Ubar_t = ((t-1)/t) Unif_{t-1} + (1/t) cond
            std::vector<double> ubar(static_cast<std::size_t>(nz), 0.0);
            for (int z : h) ubar[static_cast<std::size_t>(z)] += 1.0;
            for (int z = 0; z < nz; ++z)
                ubar[static_cast<std::size_t>(z)] = (ubar[static_cast<std::size_t>(z)] + cond[z]) / t;
            SimplexDist ubar_dist(std::move(ubar));
            History hz = h;
            hz.push_back(0);
            for (int z = 0; z < nz; ++z) {
                if (cond[z] <= 0.0) continue;
                hz.back() = z;
                double d = bregman_divergence(game, empirical_distribution(hz, game), ubar_dist).value;
                acc[static_cast<std::size_t>(t - 1)].add(prob * cond[z] * t * d);
            }
        },
        nullptr, path_cap);
    out.terms.resize(static_cast<std::size_t>(joint.T));
    double s = 0.0;
    for (int t = 0; t < joint.T; ++t) {
        out.terms[static_cast<std::size_t>(t)] = acc[static_cast<std::size_t>(t)].value();
        s += out.terms[static_cast<std::size_t>(t)];
    }
    out.sum = s;
    return out;
}

double emax_iid_normals(int n) {
    if (n < 1) throw std::invalid_argument("emax_iid_normals: n >= 1 required");
    if (n == 1) return 0.0;
    // Simpson on [-12, 12]: integrand x n phi(x) Phi(x)^(n-1)
    const int steps = 48000;  // even
    const double a = -12.0, b = 12.0;
    const double h = (b - a) / steps;
    auto integrand = [n](double x) {
        double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
        return x * n * pdf * std::pow(cdf, n - 1);
    };
    double s = integrand(a) + integrand(b);
    for (int i = 1; i < steps; ++i) s += integrand(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

BoundCheckResult slepian_comparison_check(int N, std::int64_t samples, std::uint64_t seed) {
    if (N < 2) throw std::invalid_argument("slepian_comparison_check: N >= 2 required");
    // Y: experts process with Var (N-1)/N^2 and Cov -1/N^2; realized as
    // (W_i - Wbar)/sqrt(N) for W iid standard normal.
    Estimate y = mc_run("slepian_comparison_check", seed, samples, [N](std::int64_t, Rng& rng) {
        double sum = 0.0;
        std::vector<double> w(static_cast<std::size_t>(N));
        for (double& x : w) {
            x = rng.normal();
            sum += x;
        }
        double mx = -std::numeric_limits<double>::infinity();
        for (double x : w) mx = std::max(mx, x);
        return (mx - sum / N) / std::sqrt(static_cast<double>(N));
    });
    // X: independent with 2/N on the diagonal, matching ||Y_i - Y_j||^2 = 2/N.
    double esup_x = std::sqrt(2.0 / N) * emax_iid_normals(N);
    BoundCheckResult res;
    res.bound_value = y.value + 3.0 * y.stderr_;
    res.observed_value = 0.5 * esup_x;
    res.holds = res.observed_value <= res.bound_value;
    if (!res.holds) res.witness = "Slepian comparison failed";
    return res;
}

BallSandwichResult ball_sandwich_check(int d, int T, std::int64_t samples, std::uint64_t seed) {
    if (d < 1 || T < 1) throw std::invalid_argument("ball_sandwich_check: bad arguments");
    // z*_t cycles through an orthonormal basis; coordinate j of sum eps z*
    // is an independent sign walk over the rounds assigned to j.
    std::vector<int> rounds_per(static_cast<std::size_t>(d), 0);
    for (int t = 0; t < T; ++t) rounds_per[static_cast<std::size_t>(t % d)]++;

    BallSandwichResult res;
    res.optimal = std::sqrt(static_cast<double>(T));
    double slack;
    if (T <= 20) {
        // exact over all sign vectors
        CompensatedSum acc;
        const std::uint64_t count = std::uint64_t{1} << T;
        for (std::uint64_t k = 0; k < count; ++k) {
            double s2 = 0.0;
            int t0 = 0;
            for (int j = 0; j < d; ++j) {
                double s = 0.0;
                for (int t = 0; t < rounds_per[static_cast<std::size_t>(j)]; ++t)
                    s += ((k >> (t0 + t)) & 1) ? 1.0 : -1.0;
                t0 += rounds_per[static_cast<std::size_t>(j)];
                s2 += s * s;
            }
            acc.add(std::sqrt(s2));
        }
        res.lower = acc.value() / static_cast<double>(count);
        res.stderr_ = 0.0;
        slack = 1e-9;
    } else {
        Estimate est = mc_run("ball_sandwich_check", seed, samples, [&](std::int64_t, Rng& rng) {
            double s2 = 0.0;
            for (int j = 0; j < d; ++j) {
                double s = 0.0;
                for (int t = 0; t < rounds_per[static_cast<std::size_t>(j)]; ++t)
                    s += (rng.bits() & 1) ? 1.0 : -1.0;
                s2 += s * s;
            }
            return std::sqrt(s2);
        });
        res.lower = est.value;
        res.stderr_ = est.stderr_;
        slack = 4.0 * est.stderr_;
    }
    res.upper = 2.0 * res.lower;
    res.holds = res.lower <= res.optimal + slack && res.optimal <= res.upper + slack;
    return res;
}

}  // namespace regretlab
