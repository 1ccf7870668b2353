#pragma once

#include <vector>

#include "regretlab/game.hpp"
#include "regretlab/games.hpp"
#include "regretlab/regret.hpp"
#include "regretlab/rng.hpp"

namespace regretlab::testing {

// Small random game: 2-3 outcomes, 2-4 actions, losses uniform on [0,1].
// Actions carry 1-d coordinates so geometry operations stay usable.
inline Game random_small_game(Rng& rng, int max_outcomes = 3, int max_actions = 4) {
    Game g;
    g.name = "random";
    int nz = 2 + rng.uniform_int(max_outcomes - 1);
    int nf = 2 + rng.uniform_int(max_actions - 1);
    for (int z = 0; z < nz; ++z) {
        g.outcome_labels.push_back("z" + std::to_string(z));
        g.outcome_coords.push_back({static_cast<double>(z)});
    }
    for (int f = 0; f < nf; ++f) {
        g.action_labels.push_back("f" + std::to_string(f));
        g.action_coords.push_back({static_cast<double>(f)});
    }
    g.embedding_norm = NormTag::abs1d;
    g.loss.assign(static_cast<std::size_t>(nz), std::vector<double>(static_cast<std::size_t>(nf)));
    for (auto& row : g.loss)
        for (double& x : row) x = rng.uniform();
    return g;
}

inline SimplexDist random_dist(int n, Rng& rng) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double s = 0.0;
    for (double& x : w) {
        x = 1e-6 - std::log(rng.uniform() + 1e-300);
        s += x;
    }
    for (double& x : w) x /= s;
    return SimplexDist(std::move(w));
}

// Dense random joint tree with every conditional drawn from the simplex.
inline JointDistTree random_joint(int nz, int T, Rng& rng) {
    std::vector<std::vector<SimplexDist>> levels(static_cast<std::size_t>(T));
    std::size_t nodes = 1;
    for (int t = 0; t < T; ++t) {
        for (std::size_t i = 0; i < nodes; ++i)
            levels[static_cast<std::size_t>(t)].push_back(random_dist(nz, rng));
        nodes *= static_cast<std::size_t>(nz);
    }
    return JointDistTree::dense(T, nz, std::move(levels));
}

}  // namespace regretlab::testing
