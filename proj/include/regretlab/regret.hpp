#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "regretlab/game.hpp"
#include "regretlab/games.hpp"
#include "regretlab/matrix_game.hpp"

namespace regretlab {

// A joint distribution on outcome sequences of length T, given by the
// conditional at every reachable history of length < T.
struct JointDistTree {
    int T = 0;
    int num_outcomes = 0;
    StrategyKind kind = StrategyKind::dependent;
    std::function<SimplexDist(const History&)> conditional;

    static JointDistTree from_strategy(const AdversaryStrategy& s);
    // levels[t] holds the conditionals of all n^t nodes at depth t in
    // lexicographic history order.
    static JointDistTree dense(int T, int num_outcomes,
                               std::vector<std::vector<SimplexDist>> levels);
};

// Mixture lam * a + (1-lam) * b formed on full path probabilities, with the
// conditionals of the mixture re-derived from prefix masses. Requires dense
// enumeration; node_cap bounds the total tree size.
JointDistTree joint_mixture(const JointDistTree& a, const JointDistTree& b, double lam,
                            std::int64_t node_cap = 1'000'000);

// Walks every positive-probability history. node_fn(prob, history) fires for
// each internal node (|h| < T) before descending, leaf_fn(prob, history) at
// |h| == T. Throws resource_limit_error once visited leaves exceed leaf_cap.
void enumerate_tree(const JointDistTree& joint,
                    const std::function<void(double, const History&, const SimplexDist&)>& node_fn,
                    const std::function<void(double, const History&)>& leaf_fn,
                    std::int64_t leaf_cap);

struct RegretReport {
    enum class Mode { exact, mc };
    double value = 0.0;
    Mode mode = Mode::exact;
    double stderr_ = 0.0;                // 0 for exact
    std::vector<double> per_round_phi;   // per_round_phi[t-1] = E Phi(p_t(.|Z_1^{t-1}))
    double comparator = 0.0;             // T * E Phi(Unif)
    std::string game;
    int T = 0;
    int num_outcomes = 0;
    int num_actions = 0;
    std::uint64_t seed = 0;
    std::int64_t samples = 0;
};

// Exact p-regret by full enumeration of the joint's support.
RegretReport p_regret_exact(const Game& game, const JointDistTree& joint,
                            std::int64_t path_cap = 10'000'000);

// Value-only variant used by the optimizers.
double p_regret_value(const Game& game, const JointDistTree& joint,
                      std::int64_t path_cap = 10'000'000);

// Unbiased Monte Carlo estimate of the p-regret; per-trajectory conditional
// Phi terms are computed exactly from the strategy's conditionals.
RegretReport p_regret_mc(const Game& game, const AdversaryStrategy& strategy,
                         std::int64_t samples, std::uint64_t seed);

struct ValueNode {
    History history;
    double continuation_value = 0.0;
    MixedAction optimal_mixed_action;
    std::vector<int> worst_outcome_set;
    SimplexDist adversary_dist;  // the inner game's maximizing outcome distribution
};

struct MinimaxOptions {
    InnerSolver solver = InnerSolver::lp;
    std::int64_t path_cap = 10'000'000;
    std::int64_t tree_cap = 200'000;  // ValueNodes retained; larger trees keep the value only
    int mw_iters = 4000;
};

struct MinimaxResult {
    double value = 0.0;
    std::vector<ValueNode> tree;
    double max_inner_gap = 0.0;  // worst residual duality gap among inner solves
    std::int64_t nodes = 0;
};

// Exact minimax regret with a randomized player, by backward induction:
// V(z_1^T) = -min_f sum_t loss, V(h) = min_q max_z [E_q loss(z, .) + V(h z)].
MinimaxResult minimax_value(const Game& game, int T, const MinimaxOptions& opt = {});

struct DualSearchOptions {
    enum class Optimizer { grid, coordinate_ascent };
    Optimizer optimizer = Optimizer::coordinate_ascent;
    std::int64_t budget = 60'000;  // regret evaluations
    double tol = 1e-4;
    int restarts = 4;
    std::uint64_t seed = 0;
    std::vector<JointDistTree> warm_starts;
    std::int64_t path_cap = 1'000'000;
    // Also warm-start from the per-node maximizing outcome distributions of
    // the backward induction (minimax duality's constructive direction);
    // ascent then only has to polish. Requires the minimax tree to fit.
    bool minimax_warm_start = true;
};

struct DualSearchResult {
    JointDistTree joint;
    double value = 0.0;
    bool budget_exhausted = false;
    std::int64_t evals = 0;
};

// Maximizes the p-regret over joint distributions. The regret is concave in
// the joint, so projected ascent over the conditional coordinates with step
// halving converges to the global optimum up to tolerance; the result is a
// lower bound on the minimax value (weak duality).
DualSearchResult dual_search(const Game& game, int T, const DualSearchOptions& opt = {});

struct HierarchyOptions {
    std::int64_t budget = 30'000;
    double tol = 1e-4;
    int restarts = 4;
    std::uint64_t seed = 0;
    std::int64_t path_cap = 1'000'000;
};

struct HierarchyResult {
    double reg_iid = 0.0;
    double reg_indep = 0.0;
    double reg_joint = 0.0;
    double reg_minimax = 0.0;
};

// Optimizes the p-regret over i.i.d., product, and arbitrary joints, plus the
// exact minimax value. Later stages warm-start from earlier ones, so the
// reported values respect 0 <= iid <= indep <= joint.
HierarchyResult hierarchy_eval(const Game& game, int T, const HierarchyOptions& opt = {});

}  // namespace regretlab
