#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regretlab/game.hpp"
#include "regretlab/regret.hpp"
#include "regretlab/rng.hpp"

namespace regretlab {

// Lipschitz and strong-convexity constants estimated from the action
// embedding, and the flatness constant alpha = 2 L^2 / sigma they imply.
struct ConstantEstimates {
    double lipschitz_L = 0.0;
    double strong_convexity_sigma = 0.0;
    double alpha = 0.0;
    bool alpha_infinite = false;  // sigma == 0
    NormTag norm_tag = NormTag::euclidean;
};

// L = max over outcomes and distinct action pairs of |loss difference| / dist;
// sigma = 8 * min over midpoint-representable pairs of the midpoint deficit
// divided by dist^2 (0 if any deficit is negative). Requires action coords.
ConstantEstimates estimate_constants(const Game& game);

struct BoundCheckResult {
    double bound_value = 0.0;
    double observed_value = 0.0;
    bool holds = false;
    std::string witness;  // offending input when holds == false
};

// Samples `pairs` random simplex pairs (p, q) and verifies the flatness
// inequality (-Phi)(q) - (-Phi)(p) <= <v_p, q-p> + alpha ||p-q||_1^2 + 1e-9.
// observed_value is the worst margin D(q,p) - alpha ||p-q||_1^2 over the
// sample (bound_value 0).
BoundCheckResult flatness_check(const Game& game, double alpha, std::int64_t pairs,
                                std::uint64_t seed);

// Targeted search for a flatness violation: straddles candidate kinks of Phi
// at shrinking scales. Returns the violating pair if one is found.
std::optional<std::pair<SimplexDist, SimplexDist>> find_flatness_witness(const Game& game,
                                                                         double alpha,
                                                                         std::uint64_t seed);

// Verifies the minimizer-stability bound ||f_p - f_q|| <= (2L/sigma) ||p-q||_1
// on sampled pairs, with an additive slack of one grid step for the jumps a
// finite action grid forces. observed_value is the worst slack-adjusted ratio
// over pairs separated by at least one grid step; bound_value is 2L/sigma.
BoundCheckResult stability_check(const Game& game, std::int64_t pairs, std::uint64_t seed);

// 4 * alpha * log T. Requires T >= 2 and alpha >= 0.
double log_t_bound(double alpha, int T);

// Data-dependent Rademacher average (1/sqrt(T)) E_eps sup_f |sum_t eps_t
// loss(Z_t, f)| for the given sample; exact over all 2^T sign vectors when
// T <= 20, Monte Carlo with eps_draws sign vectors otherwise.
Estimate rademacher_average(const Game& game, const History& sample, std::int64_t eps_draws,
                            std::uint64_t seed);

// Searches outcome sequences for the largest Rademacher average (exhaustive
// when |Z|^T is small, random restarts plus coordinate-wise greedy replacement
// otherwise; the searched value underestimates the sup, which keeps the check
// conservative) and asserts minimax_value <= 2 sqrt(T) Rad + 4 stderr.
BoundCheckResult rademacher_upper_bound(const Game& game, int T, std::int64_t search_budget,
                                        std::uint64_t seed);

struct GaussianLbResult {
    double sup_mean = 0.0;             // E sup_q G_q over the shifted class
    double sup_stderr = 0.0;
    double scale = 0.0;                // sup_mean / sqrt(T), the lower-bound scale
    std::optional<double> exact_fluctuation;  // E sup_{f in F*} [E_p loss - empirical mean]
    std::vector<std::vector<double>> covariance;
    bool eig_clipped = false;          // negative eigenvalues were clipped to 0
};

// Gaussian-process lower-bound estimator at a non-differentiable point: builds
// the centered covariance of the loss class Q shifted by f_star, samples the
// Gaussian vector with antithetic pairs, and (when the composition count
// allows) computes the exact i.i.d. fluctuation by enumeration. Throws
// not_applicable_error at a differentiable point (singleton argmin).
GaussianLbResult gaussian_lb_estimate(const Game& game, const SimplexDist& p,
                                      const std::vector<int>& Q, int f_star, int T,
                                      std::int64_t samples, std::uint64_t seed,
                                      std::int64_t composition_cap = 2'000'000);

struct RecursiveBoundTerms {
    std::vector<double> terms;  // terms[t-1] = t * E D(Unif_t, Ubar_t)
    double sum = 0.0;
};

// Per-round terms of the recursive regret upper bound
// Reg(p) <= E sum_t t D(Unif_t, Ubar_t), Ubar_t = ((t-1)/t) Unif_{t-1} +
// (1/t) p_t(.|Z_1^{t-1}).
RecursiveBoundTerms recursive_upper_bound_terms(const Game& game, const JointDistTree& joint,
                                                std::int64_t path_cap = 10'000'000);

// E max of n i.i.d. standard normals by quadrature (Simpson on [-12, 12]).
double emax_iid_normals(int n);

// Slepian comparison on the simplified-experts Gaussian process: independent
// Gaussians X with 2/N on the diagonal match the pairwise distances of the
// experts process Y, and (1/2) E sup X <= E sup Y must hold. The X side is
// exact by quadrature, the Y side sampled.
BoundCheckResult slepian_comparison_check(int N, std::int64_t samples, std::uint64_t seed);

struct BallSandwichResult {
    double lower = 0.0;    // E || sum_t eps_t z*_t ||, the product-distribution regret
    double upper = 0.0;    // 2 sqrt(T) Rad form = 2 * lower form
    double optimal = 0.0;  // sqrt(T), the dependent-strategy value
    double stderr_ = 0.0;
    bool holds = false;    // lower - slack <= sqrt(T) <= upper + slack
};

// Factor-2 sandwich for the Euclidean primal-dual ball game: the product
// distribution built from the Rademacher maximizer brackets the optimal
// sqrt(T) within a factor of 2. Exact sign enumeration when 2^T <= 2^20.
BallSandwichResult ball_sandwich_check(int d, int T, std::int64_t samples, std::uint64_t seed);

}  // namespace regretlab
