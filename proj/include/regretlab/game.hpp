#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace regretlab {

// Outcome history: sequence of outcome indices, oldest first.
using History = std::vector<int>;

// A probability vector over a game's outcomes.
struct SimplexDist {
    std::vector<double> w;

    SimplexDist() = default;
    explicit SimplexDist(std::vector<double> weights) : w(std::move(weights)) {}

    static SimplexDist uniform(int n);
    static SimplexDist point_mass(int n, int i);

    int size() const { return static_cast<int>(w.size()); }
    double operator[](int i) const { return w[static_cast<std::size_t>(i)]; }

    // Throws std::invalid_argument unless all weights are >= -tol and the sum
    // is within tol of 1.
    void validate(double tol = 1e-12) const;
};

// A probability vector over a game's actions (randomized player move).
struct MixedAction {
    std::vector<double> w;

    static MixedAction point_mass(int n, int i);
    int size() const { return static_cast<int>(w.size()); }
    void validate(double tol = 1e-12) const;
};

enum class NormTag { euclidean, sup, abs1d };

// A finite OCO game: outcomes, actions, and a dense loss matrix loss[z][f].
// Coordinate embeddings are optional and only needed by the geometry and
// constant-estimation operations.
struct Game {
    std::string name;
    std::vector<std::string> outcome_labels;
    std::vector<std::string> action_labels;
    std::vector<std::vector<double>> outcome_coords;  // empty or one vector per outcome
    std::vector<std::vector<double>> action_coords;   // empty or one vector per action
    std::vector<std::vector<double>> loss;            // loss[z][f]
    std::optional<NormTag> embedding_norm;

    // Closed-form extension for 1-d quadratic games: when set, the action set
    // is treated as the continuous interval [lo, hi] wherever a minimum over
    // actions is taken (phi, hindsight loss, support function). The finite
    // action grid remains in place for mixed-action solvers and sampling.
    struct QuadExact {
        double lo;
        double hi;
    };
    std::optional<QuadExact> quad_exact;

    int num_outcomes() const { return static_cast<int>(loss.size()); }
    int num_actions() const { return loss.empty() ? 0 : static_cast<int>(loss[0].size()); }

    // Checks the structural invariants: finite losses, nonempty outcome and
    // action sets, consistent embedding dimensions, desk-scale size caps
    // (|outcomes| <= 64, |actions| <= 4096). Throws std::invalid_argument.
    void validate() const;

    // 1-d coordinate of outcome z; requires a 1-d embedding.
    double outcome_coord1(int z) const;
    double action_coord1(int f) const;
};

// Minimum expected loss and the set of minimizers at a distribution.
struct PhiResult {
    double value = 0.0;
    std::vector<int> argmin_indices;  // actions within tie_tol of the minimum
    // Continuum minimizer coordinate for quad_exact games; for those games
    // argmin_indices holds the grid action(s) nearest the continuum minimum.
    std::optional<double> minimizer_coord;
};

// Matrix lookup of the loss. Throws std::out_of_range on bad indices.
double loss_at(const Game& game, int z, int f);

// Empirical distribution of a nonempty history.
SimplexDist empirical_distribution(const History& history, const Game& game);

// Minimum expected loss functional over the action set.
PhiResult phi(const Game& game, const SimplexDist& p, double tie_tol = 1e-9);

// Support function of the negated loss class evaluated at `direction`
// (dimension = |outcomes|). On the simplex this equals -phi(direction).
double support_function(const Game& game, std::span<const double> direction);

// Loss vectors of the expected-loss minimizers at p. Singleton iff the
// minimum-expected-loss functional is differentiable at p (within tie_tol).
std::vector<std::vector<double>> subdifferential(const Game& game, const SimplexDist& p,
                                                 double tie_tol = 1e-9);

// The deterministic subgradient rule used everywhere a single subgradient of
// -phi is needed: the loss vector of the lowest-index minimizer (for
// quad_exact games, of the continuum minimizer). Returns the loss vector
// ell(., f_p); the subgradient of -phi is its negation.
std::vector<double> subgradient_loss_vector(const Game& game, const SimplexDist& p,
                                            double tie_tol = 1e-9);

// min over actions of the total loss of a fixed action over the history
// (the hindsight comparator); closed form for quad_exact games.
double hindsight_loss(const Game& game, const History& history);

}  // namespace regretlab
