#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "regretlab/divergence.hpp"

using namespace regretlab;

TEST_CASE("bregman divergence basics") {
    Game ex2 = experts_simple_game(2);
    CHECK(bregman_divergence(ex2, SimplexDist::uniform(2), SimplexDist::uniform(2)).value ==
          doctest::Approx(0.0));
    // worked example with the lowest-index tie-break at the apex
    auto d = bregman_divergence(ex2, SimplexDist({0.8, 0.2}), SimplexDist({0.5, 0.5}));
    CHECK(d.value == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(d.subgradient_action == 0);

    Rng rng(substream_seed(31, "bregman_nonneg", 0));
    for (int rep = 0; rep < 500; ++rep) {
        Game g = rep % 5 == 0 ? quadratic_game(65) : testing::random_small_game(rng);
        SimplexDist p = testing::random_dist(g.num_outcomes(), rng);
        SimplexDist q = testing::random_dist(g.num_outcomes(), rng);
        CHECK(bregman_divergence(g, q, p).value >= -1e-9);
    }
}

TEST_CASE("divergence is tie-break invariant at differentiable points") {
    Rng rng(substream_seed(32, "tie_invariance", 0));
    for (int rep = 0; rep < 100; ++rep) {
        Game g = testing::random_small_game(rng);
        SimplexDist p = testing::random_dist(g.num_outcomes(), rng);
        SimplexDist q = testing::random_dist(g.num_outcomes(), rng);
        auto sub = subdifferential(g, p);
        if (sub.size() != 1) continue;  // only differentiable points
        double base = bregman_divergence(g, q, p).value;
        // recompute with the explicit (unique) subgradient
        double lin = 0.0;
        for (int z = 0; z < g.num_outcomes(); ++z) lin += sub[0][static_cast<std::size_t>(z)] * (q[z] - p[z]);
        double direct = phi(g, p).value - phi(g, q).value + lin;
        CHECK(base == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("linear term cancels in expectation") {
    Rng rng(substream_seed(33, "linear_cancel", 0));
    for (int rep = 0; rep < 100; ++rep) {
        Game g = testing::random_small_game(rng);
        const int nz = g.num_outcomes();
        // random finitely-supported random distribution q with E q = pbar
        int k = 2 + rng.uniform_int(3);
        std::vector<SimplexDist> qs;
        std::vector<double> wts(static_cast<std::size_t>(k));
        double s = 0.0;
        for (int i = 0; i < k; ++i) {
            qs.push_back(testing::random_dist(nz, rng));
            wts[static_cast<std::size_t>(i)] = -std::log(rng.uniform() + 1e-300);
            s += wts[static_cast<std::size_t>(i)];
        }
        for (double& x : wts) x /= s;
        std::vector<double> mean(static_cast<std::size_t>(nz), 0.0);
        for (int i = 0; i < k; ++i)
            for (int z = 0; z < nz; ++z)
                mean[static_cast<std::size_t>(z)] += wts[static_cast<std::size_t>(i)] * qs[static_cast<std::size_t>(i)][z];
        SimplexDist pbar(mean);
        double lhs = phi(g, pbar).value;
        double rhs = 0.0;
        for (int i = 0; i < k; ++i) rhs += wts[static_cast<std::size_t>(i)] * phi(g, qs[static_cast<std::size_t>(i)]).value;
        double ed = 0.0;
        for (int i = 0; i < k; ++i)
            ed += wts[static_cast<std::size_t>(i)] * bregman_divergence(g, qs[static_cast<std::size_t>(i)], pbar).value;
        CHECK(lhs - rhs == doctest::Approx(ed).epsilon(1e-9));
    }
}

TEST_CASE("iid regret as divergence identity") {
    Game quad = quadratic_game();
    auto [ed, reg] = iid_regret_as_divergence(quad, SimplexDist::uniform(2), 4);
    CHECK(ed == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(reg == doctest::Approx(0.25).epsilon(1e-10));

    Game ex2 = experts_simple_game(2);
    auto [ed2, reg2] = iid_regret_as_divergence(ex2, SimplexDist::uniform(2), 2);
    CHECK(ed2 == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(reg2 == doctest::Approx(0.25).epsilon(1e-10));
    // per-round regret of the uniform i.i.d. joint is the deviation formula
    CHECK(reg2 == doctest::Approx(experts_simple_regret_exact(2, 2)).epsilon(1e-10));

    // point mass: both sides vanish
    auto [edp, regp] = iid_regret_as_divergence(ex2, SimplexDist::point_mass(2, 0), 3);
    CHECK(edp == doctest::Approx(0.0));
    CHECK(regp == doctest::Approx(0.0));

    Rng rng(substream_seed(34, "iid_identity", 0));
    for (int rep = 0; rep < 25; ++rep) {
        Game g = testing::random_small_game(rng);
        SimplexDist p = testing::random_dist(g.num_outcomes(), rng);
        auto [a, b] = iid_regret_as_divergence(g, p, 3);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
}

TEST_CASE("marginals of iid and shrinkage joints") {
    Game quad = quadratic_game();
    auto iid = JointDistTree::from_strategy(iid_strategy(SimplexDist({0.3, 0.7}), 3));
    for (const auto& m : marginals(iid, quad)) {
        CHECK(m[0] == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(m[1] == doctest::Approx(0.7).epsilon(1e-12));
    }
    auto shrink = JointDistTree::from_strategy(quadratic_shrinkage_adversary(3));
    auto ms = marginals(shrink, quad);
    for (const auto& m : ms) {
        CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(m[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("decomposition identity and special cases") {
    Game quad = quadratic_game();

    // iid: both delta0 and delta1 vanish
    auto iid = JointDistTree::from_strategy(iid_strategy(SimplexDist({0.4, 0.6}), 3));
    auto di = decomposition(quad, iid);
    CHECK(di.delta0 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(di.delta1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(di.residual <= 1e-9);

    // product with distinct rounds: delta1 = 0, delta0 >= 0
    auto prod = JointDistTree::from_strategy(
        product_strategy({SimplexDist({0.2, 0.8}), SimplexDist({0.7, 0.3}), SimplexDist({0.5, 0.5})}));
    auto dp = decomposition(quad, prod);
    CHECK(dp.delta1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dp.delta0 >= 0.0);
    CHECK(dp.delta0 > 1e-4);
    CHECK(dp.residual <= 1e-9);

    // shrinkage T=2: reconciles with the exact regret 1.25
    auto shrink = JointDistTree::from_strategy(quadratic_shrinkage_adversary(2));
    auto ds = decomposition(quad, shrink);
    CHECK(ds.residual <= 1e-9);
    CHECK(-ds.delta0 - ds.delta1 + ds.delta2 == doctest::Approx(1.25 / 2.0).epsilon(1e-10));
}

TEST_CASE("decomposition holds for random joints") {
    Rng rng(substream_seed(35, "decomp_random", 0));
    for (int rep = 0; rep < 100; ++rep) {
        Game g = testing::random_small_game(rng);
        int T = 2 + rng.uniform_int(3);
        auto joint = testing::random_joint(g.num_outcomes(), T, rng);
        auto d = decomposition(g, joint);
        CHECK(d.residual <= 1e-9);
        CHECK(d.delta0 >= -1e-12);
        CHECK(d.delta1 >= -1e-12);
        CHECK(d.delta2 >= -1e-12);
    }
}
