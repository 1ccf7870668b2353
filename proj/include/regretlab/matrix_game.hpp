#pragma once

#include <vector>

#include "regretlab/game.hpp"

namespace regretlab {

enum class InnerSolver { lp, exhaustive, mw };

// Solution of the one-shot zero-sum game min_q max_z sum_f q_f payoff[f][z].
struct MatrixGameSolution {
    MixedAction q;                      // row (minimizer) strategy
    double value = 0.0;                 // reported game value
    double gap = 0.0;                   // max_z E_q payoff - value <= gap
    SimplexDist p;                      // column (maximizer) strategy
    std::vector<int> worst_outcomes;    // columns within 1e-9 of max_z E_q payoff
};

// Solves min over mixed q of max over columns z of q^T payoff.
//   lp          exact simplex-method solve, gap <= 1e-8
//   exhaustive  deterministic player: min over pure rows of the row max, gap 0
//   mw          multiplicative-weights self-play; gap reports the residual
//               duality gap of the matrix game
// payoff is rows (actions) x columns (outcomes).
MatrixGameSolution inner_matrix_game_solve(const std::vector<std::vector<double>>& payoff,
                                           InnerSolver method, int mw_iters = 4000);

}  // namespace regretlab
