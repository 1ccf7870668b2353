#include "regretlab/divergence.hpp"

#include <cmath>
#include <stdexcept>

#include "regretlab/rng.hpp"

namespace regretlab {

DivergenceValue bregman_divergence(const Game& game, const SimplexDist& q, const SimplexDist& p,
                                   double tie_tol) {
    if (q.size() != game.num_outcomes() || p.size() != game.num_outcomes())
        throw std::invalid_argument("bregman_divergence: dimension mismatch");
    PhiResult php = phi(game, p, tie_tol);
    PhiResult phq = phi(game, q, tie_tol);
    std::vector<double> lp = subgradient_loss_vector(game, p, tie_tol);
    // v_p = -loss vector; D = -Phi(q) + Phi(p) - <v_p, q-p> = Phi(p) - Phi(q) + <lp, q-p>
    double lin = 0.0;
    for (int z = 0; z < game.num_outcomes(); ++z) lin += lp[static_cast<std::size_t>(z)] * (q[z] - p[z]);
    DivergenceValue d;
    d.value = php.value - phq.value + lin;
    d.subgradient_action = game.quad_exact ? -1 : php.argmin_indices.front();
    return d;
}

std::pair<double, double> iid_regret_as_divergence(const Game& game, const SimplexDist& p, int T,
                                                   std::int64_t path_cap) {
    if (T < 1) throw std::invalid_argument("iid_regret_as_divergence: T >= 1 required");
    auto joint = JointDistTree::from_strategy(iid_strategy(p, T));
    CompensatedSum ed;
    enumerate_tree(
        joint, nullptr,
        [&](double prob, const History& h) {
            ed.add(prob * bregman_divergence(game, empirical_distribution(h, game), p).value);
        },
        path_cap);
    double reg = p_regret_value(game, joint, path_cap);
    return {ed.value(), reg / T};
}

std::vector<SimplexDist> marginals(const JointDistTree& joint, const Game& game,
                                   std::int64_t path_cap) {
    if (joint.num_outcomes != game.num_outcomes())
        throw std::invalid_argument("marginals: outcome count mismatch");
    std::vector<std::vector<CompensatedSum>> acc(
        static_cast<std::size_t>(joint.T),
        std::vector<CompensatedSum>(static_cast<std::size_t>(joint.num_outcomes)));
    enumerate_tree(
        joint,
        [&](double prob, const History& h, const SimplexDist& cond) {
            auto& row = acc[h.size()];
            for (int z = 0; z < joint.num_outcomes; ++z) row[static_cast<std::size_t>(z)].add(prob * cond[z]);
        },
        nullptr, path_cap);
    std::vector<SimplexDist> out;
    out.reserve(static_cast<std::size_t>(joint.T));
    for (auto& row : acc) {
        std::vector<double> w(row.size());
        for (std::size_t z = 0; z < row.size(); ++z) w[z] = row[z].value();
        SimplexDist m(std::move(w));
        m.validate(1e-9);
        out.push_back(std::move(m));
    }
    return out;
}

DecompositionReport decomposition(const Game& game, const JointDistTree& joint,
                                  std::int64_t path_cap) {
    const int T = joint.T;
    const int nz = joint.num_outcomes;
    auto margs = marginals(joint, game, path_cap);

    std::vector<double> avg(static_cast<std::size_t>(nz), 0.0);
    {
        std::vector<CompensatedSum> acc(static_cast<std::size_t>(nz));
        for (const auto& m : margs)
            for (int z = 0; z < nz; ++z) acc[static_cast<std::size_t>(z)].add(m[z]);
        for (int z = 0; z < nz; ++z) avg[static_cast<std::size_t>(z)] = acc[static_cast<std::size_t>(z)].value() / T;
    }
    SimplexDist avg_marginal(avg);

    DecompositionReport rep;
    CompensatedSum d0;
    for (const auto& m : margs) d0.add(bregman_divergence(game, m, avg_marginal).value);
    rep.delta0 = d0.value() / T;

    CompensatedSum d1, d2;
    enumerate_tree(
        joint,
        [&](double prob, const History& h, const SimplexDist& cond) {
            d1.add(prob * bregman_divergence(game, cond, margs[h.size()]).value);
        },
        [&](double prob, const History& h) {
            d2.add(prob * bregman_divergence(game, empirical_distribution(h, game), avg_marginal).value);
        },
        path_cap);
    rep.delta1 = d1.value() / T;
    rep.delta2 = d2.value();

    rep.regret_over_T = p_regret_value(game, joint, path_cap) / T;
    rep.residual = std::abs(rep.regret_over_T - (-rep.delta0 - rep.delta1 + rep.delta2));
    return rep;
}

}  // namespace regretlab
