#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "regretlab/game.hpp"
#include "regretlab/rng.hpp"

namespace regretlab {

enum class StrategyKind { iid, product, dependent };

// Adversary joint distribution given by its per-round conditionals. For
// kind == iid the conditional ignores history and round; for kind == product
// it depends on the round (history length) only.
struct AdversaryStrategy {
    int T = 0;
    int num_outcomes = 0;
    StrategyKind kind = StrategyKind::dependent;
    std::function<SimplexDist(const History&)> conditional;
};

AdversaryStrategy iid_strategy(const SimplexDist& p, int T);
AdversaryStrategy product_strategy(std::vector<SimplexDist> per_round);

// Shrinkage schedule: c_T = 1/T, c_{t-1} = c_t + c_t^2. Satisfies c_t <= 1/t
// and sum_t c_t = log T - log log T + o(1).
struct ShrinkageSchedule {
    int T = 0;
    std::vector<double> c;  // c[t-1] holds c_t
    double sum = 0.0;
};

ShrinkageSchedule c_sequence(int T);

// The dependent two-point adversary for the quadratic game: round-t mass on
// +1 is (1 + c_t * Z_{1:t-1}) / 2 where Z_{1:t-1} is the signed partial sum.
// Outcome index 0 is -1, index 1 is +1.
AdversaryStrategy quadratic_shrinkage_adversary(int T);

// Q_0..Q_T of the backward-induction invariant that makes the shrinkage
// adversary's regret exactly sum_t c_t, each entry computed by exact
// enumeration of {-1,+1}^t. All entries coincide. Requires T <= 20.
std::vector<double> q_invariant_sequence(int T);

// Built-in games -------------------------------------------------------------

// Quadratic game: outcomes {-1,+1}, loss (f-z)^2, actions a uniform grid on
// [-1,1]. With exact_min the minimum over actions is taken over the full
// interval in closed form (grid kept for mixed-action solvers).
Game quadratic_game(int grid_points = 257, bool exact_min = true);

// Simplified experts game: outcomes e_1..e_N, loss(e_i, f) = f_i. Actions are
// the simplex vertices; with include_uniform_action an (1/N,...,1/N) action is
// appended.
Game experts_simple_game(int N, bool include_uniform_action = false);

// General experts game: outcomes are all 2^N binary loss vectors, actions the
// N simplex vertices, loss(z, e_i) = z_i. Requires N <= 6.
Game experts_general_game(int N);

// Absolute-loss game on [0,1]: outcomes and actions are the `grid` cell
// centers (2j+1)/(2 grid), loss |z - f|.
Game disjoint_interval_game(int grid);

// Product strategy whose round-t conditional is uniform over the grid centers
// falling in [(t-1)/T, t/T). Requires grid >= T.
AdversaryStrategy disjoint_interval_strategy(int T, int grid);

// Experts lower-bound estimators ----------------------------------------------

// E max_i [1/N - n_i/T] under T uniform draws, by multinomial enumeration over
// compositions. Throws resource_limit_error when the composition count
// exceeds the cap.
double experts_simple_regret_exact(int N, int T, std::int64_t composition_cap = 2'000'000);

Estimate experts_simple_regret_mc(int N, int T, std::int64_t samples, std::uint64_t seed);

// Monte Carlo estimate of E max_i [1/2 - (1/T) sum_t B_{i,t}] with i.i.d. fair
// bits B; the uniform distribution on 2^N binary vectors factorizes, so
// per-coordinate sampling is exact.
Estimate experts_general_lb(int N, int T, std::int64_t samples, std::uint64_t seed);

// Euclidean-ball strategies ----------------------------------------------------

// One sampled trajectory of the dependent strategy that plays +-u_t with u_t a
// unit vector orthogonal to the running sum (fair sign, so the per-step
// conditional mean is zero). norms[t] = ||S_{t+1}||; the norm recursion gives
// ||S_t||^2 = t exactly.
struct BallTrace {
    std::vector<double> norms;
    std::vector<std::vector<double>> steps;  // the sampled Z_t
};

BallTrace ball_orthogonal_strategy(int d, int T, std::uint64_t seed);

// E|sum_t eps_t| for fair signs; exact binomial evaluation for T <= 30, Monte
// Carlo otherwise. Asymptotically sqrt(2T/pi).
Estimate ball_iid_two_point(int T, std::int64_t samples, std::uint64_t seed);

// E||sum_t Z_t|| for Z_t i.i.d. uniform on the unit sphere in R^d. The
// Khintchine-Kahane bound gives a sqrt(T/2) floor.
Estimate ball_symmetric_iid_check(int d, int T, std::int64_t samples, std::uint64_t seed);

}  // namespace regretlab
