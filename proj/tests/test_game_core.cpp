#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "regretlab/game.hpp"
#include "regretlab/games.hpp"
#include "regretlab/rng.hpp"

using namespace regretlab;

TEST_CASE("loss_at basics") {
    Game quad = quadratic_game(257);
    // grid index of f = 1 is the last one
    int f_one = quad.num_actions() - 1;
    CHECK(loss_at(quad, 1, f_one) == doctest::Approx(0.0));

    Game ex = experts_simple_game(3);
    CHECK(loss_at(ex, 0, 0) == 1.0);
    CHECK(loss_at(ex, 0, 1) == 0.0);
    CHECK_THROWS_AS(loss_at(ex, 3, 0), std::out_of_range);
    CHECK_THROWS_AS(loss_at(ex, 0, -1), std::out_of_range);
}

TEST_CASE("empirical distribution counts") {
    Game ex = experts_simple_game(2);
    SimplexDist d = empirical_distribution({0, 0, 1}, ex);
    CHECK(d[0] == doctest::Approx(2.0 / 3));
    CHECK(d[1] == doctest::Approx(1.0 / 3));
    SimplexDist point = empirical_distribution({0}, ex);
    CHECK(point[0] == 1.0);
    SimplexDist half = empirical_distribution({0, 1, 0, 1}, ex);
    CHECK(half[0] == 0.5);
    CHECK_THROWS_AS(empirical_distribution({}, ex), std::invalid_argument);
}

TEST_CASE("phi on experts and quadratic games") {
    Game ex3 = experts_simple_game(3);
    PhiResult r = phi(ex3, SimplexDist({0.2, 0.3, 0.5}));
    CHECK(r.value == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r.argmin_indices == std::vector<int>{0});

    Game quad = quadratic_game(257);
    PhiResult q = phi(quad, SimplexDist::uniform(2));
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*q.minimizer_coord == doctest::Approx(0.0));

    // point mass at an outcome on the action grid fits perfectly
    PhiResult pm = phi(quad, SimplexDist::point_mass(2, 1));
    CHECK(pm.value == doctest::Approx(0.0));
}

TEST_CASE("phi at a point mass equals the row minimum") {
    Rng rng(substream_seed(99, "phi_point_mass", 0));
    for (int rep = 0; rep < 50; ++rep) {
        Game g = testing::random_small_game(rng);
        for (int z = 0; z < g.num_outcomes(); ++z) {
            double expect = 1e300;
            for (int f = 0; f < g.num_actions(); ++f) expect = std::min(expect, loss_at(g, z, f));
            CHECK(phi(g, SimplexDist::point_mass(g.num_outcomes(), z)).value == doctest::Approx(expect));
        }
    }
}

TEST_CASE("phi concavity on random games") {
    Rng rng(substream_seed(7, "phi_concavity", 0));
    for (int rep = 0; rep < 200; ++rep) {
        Game g = testing::random_small_game(rng);
        SimplexDist p = testing::random_dist(g.num_outcomes(), rng);
        SimplexDist q = testing::random_dist(g.num_outcomes(), rng);
        double lam = rng.uniform();
        std::vector<double> mix(p.w.size());
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = lam * p.w[i] + (1 - lam) * q.w[i];
        double lhs = phi(g, SimplexDist(mix)).value;
        double rhs = lam * phi(g, p).value + (1 - lam) * phi(g, q).value;
        CHECK(lhs >= rhs - 1e-9);
    }
}

TEST_CASE("support function matches -phi on the simplex and is homogeneous") {
    Rng rng(substream_seed(8, "support", 0));
    for (int rep = 0; rep < 100; ++rep) {
        Game g = rep % 3 == 0 ? quadratic_game(65) : testing::random_small_game(rng);
        SimplexDist p = testing::random_dist(g.num_outcomes(), rng);
        CHECK(support_function(g, p.w) == doctest::Approx(-phi(g, p).value).epsilon(1e-12));
        std::vector<double> zero(p.w.size(), 0.0);
        CHECK(support_function(g, zero) == doctest::Approx(0.0));
        std::vector<double> twice(p.w.size());
        for (std::size_t i = 0; i < twice.size(); ++i) twice[i] = 2.0 * p.w[i];
        CHECK(support_function(g, twice) == doctest::Approx(2.0 * support_function(g, p.w)).epsilon(1e-12));
    }
    Game g = experts_simple_game(2);
    std::vector<double> bad(3, 0.1);
    CHECK_THROWS_AS(support_function(g, bad), std::invalid_argument);
}

TEST_CASE("support function ordering under action-set inclusion") {
    Rng rng(substream_seed(9, "ordering", 0));
    for (int rep = 0; rep < 50; ++rep) {
        Game g1 = testing::random_small_game(rng);
        Game g2 = g1;
        // extend with extra actions
        int extra = 1 + rng.uniform_int(2);
        for (int e = 0; e < extra; ++e) {
            g2.action_labels.push_back("x" + std::to_string(e));
            g2.action_coords.push_back({10.0 + e});
            for (auto& row : g2.loss) row.push_back(rng.uniform());
        }
        for (int s = 0; s < 10; ++s) {
            std::vector<double> x(static_cast<std::size_t>(g1.num_outcomes()));
            for (double& v : x) v = rng.uniform() * 2.0 - 1.0;
            CHECK(support_function(g1, x) <= support_function(g2, x) + 1e-12);
            SimplexDist p = testing::random_dist(g1.num_outcomes(), rng);
            CHECK(phi(g1, p).value >= phi(g2, p).value - 1e-12);
        }
    }
}

TEST_CASE("linear transformation identity for support functions") {
    Rng rng(substream_seed(10, "linear_transform", 0));
    for (int rep = 0; rep < 50; ++rep) {
        Game g = testing::random_small_game(rng);
        const int n = g.num_outcomes();
        // random invertible-ish A (diagonally dominated)
        std::vector<std::vector<double>> A(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i == j ? 2.0 : 0.0) + rng.uniform() - 0.5;
        // transformed game: loss vectors ell'_f = A ell_f
        Game gt = g;
        for (int f = 0; f < g.num_actions(); ++f) {
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j)
                    s += A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                         g.loss[static_cast<std::size_t>(j)][static_cast<std::size_t>(f)];
                gt.loss[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)] = s;
            }
        }
        for (int s = 0; s < 10; ++s) {
            std::vector<double> y(static_cast<std::size_t>(n));
            for (double& v : y) v = rng.uniform() * 2.0 - 1.0;
            std::vector<double> Aty(static_cast<std::size_t>(n), 0.0);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    Aty[static_cast<std::size_t>(j)] += A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(i)];
            CHECK(support_function(gt, y) == doctest::Approx(support_function(g, Aty)).epsilon(1e-9));
        }
    }
}

TEST_CASE("subdifferential structure") {
    Game ex2 = experts_simple_game(2);
    auto at_apex = subdifferential(ex2, SimplexDist::uniform(2));
    REQUIRE(at_apex.size() == 2);
    CHECK(at_apex[0] == std::vector<double>{1.0, 0.0});
    CHECK(at_apex[1] == std::vector<double>{0.0, 1.0});

    auto off_apex = subdifferential(ex2, SimplexDist({0.3, 0.7}));
    REQUIRE(off_apex.size() == 1);
    CHECK(off_apex[0] == std::vector<double>{1.0, 0.0});

    Rng rng(substream_seed(11, "subdiff_quad", 0));
    Game quad = quadratic_game(257);
    for (int rep = 0; rep < 20; ++rep) {
        SimplexDist p = testing::random_dist(2, rng);
        CHECK(subdifferential(quad, p).size() == 1);
    }
}

TEST_CASE("subgradient inequality for -phi") {
    Rng rng(substream_seed(12, "subgrad_ineq", 0));
    for (int rep = 0; rep < 100; ++rep) {
        Game g = rep % 4 == 0 ? quadratic_game(65) : testing::random_small_game(rng);
        SimplexDist p = testing::random_dist(g.num_outcomes(), rng);
        SimplexDist q = testing::random_dist(g.num_outcomes(), rng);
        auto lp = subgradient_loss_vector(g, p);
        // -Phi(q) >= -Phi(p) + <-lp, q - p> - tol
        double lin = 0.0;
        for (int z = 0; z < g.num_outcomes(); ++z) lin += -lp[static_cast<std::size_t>(z)] * (q[z] - p[z]);
        CHECK(-phi(g, q).value >= -phi(g, p).value + lin - 1e-9);
    }
}

TEST_CASE("simplex and game validation") {
    CHECK_THROWS_AS(SimplexDist({0.5, 0.6}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(SimplexDist({-0.1, 1.1}).validate(), std::invalid_argument);
    SimplexDist::uniform(3).validate();

    Game g;
    g.loss = {};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g.loss = {{0.0, 1.0}, {1.0}};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
