#pragma once

#include <cstdint>
#include <vector>

#include "regretlab/game.hpp"
#include "regretlab/regret.hpp"

namespace regretlab {

// Bregman divergence of the convex functional -Phi with the fixed subgradient
// rule of game.hpp.
struct DivergenceValue {
    double value = 0.0;
    int subgradient_action = -1;  // lowest-index minimizer at p; -1 for a continuum minimizer
};

// D(q, p) = (-Phi(q)) - (-Phi(p)) - <v_p, q - p> with v_p the negated loss
// vector of the tie-break minimizer at p. Nonnegative by convexity.
DivergenceValue bregman_divergence(const Game& game, const SimplexDist& q, const SimplexDist& p,
                                   double tie_tol = 1e-9);

// The i.i.d. regret identity: returns (E D(Unif, p), p_regret_exact(p^T) / T).
// The two sides agree to enumeration accuracy.
std::pair<double, double> iid_regret_as_divergence(const Game& game, const SimplexDist& p, int T,
                                                   std::int64_t path_cap = 10'000'000);

// Per-round marginals p_t^m[z] = sum_h P(h) p_t(z|h).
std::vector<SimplexDist> marginals(const JointDistTree& joint, const Game& game,
                                   std::int64_t path_cap = 10'000'000);

struct DecompositionReport {
    double delta0 = 0.0;  // (1/T) sum_t D(p_t^m, avg marginal)
    double delta1 = 0.0;  // (1/T) sum_t E D(conditional, marginal)
    double delta2 = 0.0;  // E D(Unif, avg marginal)
    double regret_over_T = 0.0;
    double residual = 0.0;  // |regret/T - (-delta0 - delta1 + delta2)|
};

// The three-divergence decomposition of the per-round regret:
// Reg(p)/T = -Delta_0 - Delta_1 + Delta_2. The identity holds for any fixed
// subgradient rule because the linear terms cancel in expectation; residual
// reports the numerical defect.
DecompositionReport decomposition(const Game& game, const JointDistTree& joint,
                                  std::int64_t path_cap = 10'000'000);

}  // namespace regretlab
