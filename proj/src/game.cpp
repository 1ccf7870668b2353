#include "regretlab/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace regretlab {

SimplexDist SimplexDist::uniform(int n) {
    if (n <= 0) throw std::invalid_argument("uniform: need n >= 1");
    return SimplexDist(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

SimplexDist SimplexDist::point_mass(int n, int i) {
    if (n <= 0 || i < 0 || i >= n) throw std::invalid_argument("point_mass: bad index");
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    w[static_cast<std::size_t>(i)] = 1.0;
    return SimplexDist(std::move(w));
}

namespace {

void validate_weights(const std::vector<double>& w, double tol, const char* what) {
    if (w.empty()) throw std::invalid_argument(std::string(what) + ": empty weight vector");
    double sum = 0.0;
    for (double x : w) {
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite weight");
        if (x < -tol) throw std::invalid_argument(std::string(what) + ": negative weight");
        sum += x;
    }
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument(std::string(what) + ": weights sum to " + std::to_string(sum));
}

}  // namespace

void SimplexDist::validate(double tol) const { validate_weights(w, tol, "SimplexDist"); }

MixedAction MixedAction::point_mass(int n, int i) {
    if (n <= 0 || i < 0 || i >= n) throw std::invalid_argument("point_mass: bad index");
    MixedAction q;
    q.w.assign(static_cast<std::size_t>(n), 0.0);
    q.w[static_cast<std::size_t>(i)] = 1.0;
    return q;
}

void MixedAction::validate(double tol) const { validate_weights(w, tol, "MixedAction"); }

void Game::validate() const {
    if (loss.empty() || loss[0].empty())
        throw std::invalid_argument("Game: need at least one outcome and one action");
    const std::size_t nz = loss.size();
    const std::size_t nf = loss[0].size();
    if (nz > 64) throw std::invalid_argument("Game: more than 64 outcomes");
    if (nf > 4096) throw std::invalid_argument("Game: more than 4096 actions");
    for (const auto& row : loss) {
        if (row.size() != nf) throw std::invalid_argument("Game: ragged loss matrix");
        for (double x : row)
            if (!std::isfinite(x)) throw std::invalid_argument("Game: non-finite loss entry");
    }
    if (!outcome_labels.empty() && outcome_labels.size() != nz)
        throw std::invalid_argument("Game: outcome label count mismatch");
    if (!action_labels.empty() && action_labels.size() != nf)
        throw std::invalid_argument("Game: action label count mismatch");
    auto check_coords = [](const std::vector<std::vector<double>>& cs, std::size_t n, const char* what) {
        if (cs.empty()) return;
        if (cs.size() != n) throw std::invalid_argument(std::string("Game: ") + what + " coord count mismatch");
        std::size_t d = cs[0].size();
        for (const auto& c : cs)
            if (c.size() != d) throw std::invalid_argument(std::string("Game: ") + what + " coord dim mismatch");
    };
    check_coords(outcome_coords, nz, "outcome");
    check_coords(action_coords, nf, "action");
    if (quad_exact) {
        if (outcome_coords.empty() || outcome_coords[0].size() != 1)
            throw std::invalid_argument("Game: quad_exact requires 1-d outcome coords");
        if (quad_exact->lo >= quad_exact->hi)
            throw std::invalid_argument("Game: quad_exact interval empty");
    }
}

double Game::outcome_coord1(int z) const {
    if (outcome_coords.empty() || outcome_coords[0].size() != 1)
        throw std::invalid_argument("Game: no 1-d outcome embedding");
    return outcome_coords[static_cast<std::size_t>(z)][0];
}

double Game::action_coord1(int f) const {
    if (action_coords.empty() || action_coords[0].size() != 1)
        throw std::invalid_argument("Game: no 1-d action embedding");
    return action_coords[static_cast<std::size_t>(f)][0];
}

double loss_at(const Game& game, int z, int f) {
    if (z < 0 || z >= game.num_outcomes()) throw std::out_of_range("loss_at: outcome index");
    if (f < 0 || f >= game.num_actions()) throw std::out_of_range("loss_at: action index");
    return game.loss[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)];
}

SimplexDist empirical_distribution(const History& history, const Game& game) {
    if (history.empty()) throw std::invalid_argument("empirical_distribution: empty history");
    std::vector<double> w(static_cast<std::size_t>(game.num_outcomes()), 0.0);
    for (int z : history) {
        if (z < 0 || z >= game.num_outcomes())
            throw std::out_of_range("empirical_distribution: outcome index");
        w[static_cast<std::size_t>(z)] += 1.0;
    }
    for (double& x : w) x /= static_cast<double>(history.size());
    return SimplexDist(std::move(w));
}

namespace {

// First and second moments of the outcome coordinate under (possibly
// unnormalized) weights; used by the quad_exact closed forms.
struct QuadMoments {
    double mass, m1, m2;
};

QuadMoments quad_moments(const Game& game, std::span<const double> w) {
    QuadMoments r{0.0, 0.0, 0.0};
    for (int z = 0; z < game.num_outcomes(); ++z) {
        double zz = game.outcome_coord1(z);
        double wz = w[static_cast<std::size_t>(z)];
        r.mass += wz;
        r.m1 += wz * zz;
        r.m2 += wz * zz * zz;
    }
    return r;
}

double clamp(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

}  // namespace

PhiResult phi(const Game& game, const SimplexDist& p, double tie_tol) {
    if (p.size() != game.num_outcomes()) throw std::invalid_argument("phi: dimension mismatch");
    PhiResult r;
    if (game.quad_exact) {
        auto [mass, m1, m2] = quad_moments(game, p.w);
        (void)mass;
        double fstar = clamp(m1, game.quad_exact->lo, game.quad_exact->hi);
        r.value = m2 - 2.0 * fstar * m1 + fstar * fstar;
        r.minimizer_coord = fstar;
        // nearest grid action(s), for reporting and mixed-action solvers
        int best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (int f = 0; f < game.num_actions(); ++f) {
            double d = std::abs(game.action_coord1(f) - fstar);
            if (d < bd) {
                bd = d;
                best = f;
            }
        }
        r.argmin_indices = {best};
        return r;
    }
    const int nf = game.num_actions();
    std::vector<double> ev(static_cast<std::size_t>(nf), 0.0);
    for (int z = 0; z < game.num_outcomes(); ++z) {
        double pz = p[z];
        if (pz == 0.0) continue;
        const auto& row = game.loss[static_cast<std::size_t>(z)];
        for (int f = 0; f < nf; ++f) ev[static_cast<std::size_t>(f)] += pz * row[static_cast<std::size_t>(f)];
    }
    double best = *std::min_element(ev.begin(), ev.end());
    r.value = best;
    for (int f = 0; f < nf; ++f)
        if (ev[static_cast<std::size_t>(f)] <= best + tie_tol) r.argmin_indices.push_back(f);
    return r;
}

double support_function(const Game& game, std::span<const double> direction) {
    if (static_cast<int>(direction.size()) != game.num_outcomes())
        throw std::invalid_argument("support_function: dimension mismatch");
    if (game.quad_exact) {
        // sup over f in [lo,hi] of <-(f-z)^2, x> = -(a f^2 - 2 b f + c)
        auto [a, b, c] = quad_moments(game, direction);
        double lo = game.quad_exact->lo, hi = game.quad_exact->hi;
        auto val = [&](double f) { return -(a * f * f - 2.0 * b * f + c); };
        double best = std::max(val(lo), val(hi));
        if (a > 0.0) {
            double v = b / a;
            if (v > lo && v < hi) best = std::max(best, val(v));
        }
        return best;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (int f = 0; f < game.num_actions(); ++f) {
        double s = 0.0;
        for (int z = 0; z < game.num_outcomes(); ++z)
            s -= game.loss[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)] * direction[static_cast<std::size_t>(z)];
        best = std::max(best, s);
    }
    return best;
}

namespace {

std::vector<double> quad_loss_vector(const Game& game, double f) {
    std::vector<double> v(static_cast<std::size_t>(game.num_outcomes()));
    for (int z = 0; z < game.num_outcomes(); ++z) {
        double d = f - game.outcome_coord1(z);
        v[static_cast<std::size_t>(z)] = d * d;
    }
    return v;
}

}  // namespace

std::vector<std::vector<double>> subdifferential(const Game& game, const SimplexDist& p,
                                                 double tie_tol) {
    if (game.quad_exact) {
        PhiResult r = phi(game, p, tie_tol);
        return {quad_loss_vector(game, *r.minimizer_coord)};
    }
    PhiResult r = phi(game, p, tie_tol);
    std::vector<std::vector<double>> out;
    out.reserve(r.argmin_indices.size());
    for (int f : r.argmin_indices) {
        std::vector<double> col(static_cast<std::size_t>(game.num_outcomes()));
        for (int z = 0; z < game.num_outcomes(); ++z)
            col[static_cast<std::size_t>(z)] = game.loss[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)];
        out.push_back(std::move(col));
    }
    return out;
}

std::vector<double> subgradient_loss_vector(const Game& game, const SimplexDist& p, double tie_tol) {
    if (game.quad_exact) {
        PhiResult r = phi(game, p, tie_tol);
        return quad_loss_vector(game, *r.minimizer_coord);
    }
    PhiResult r = phi(game, p, tie_tol);
    int f = r.argmin_indices.front();  // lowest index among minimizers
    std::vector<double> col(static_cast<std::size_t>(game.num_outcomes()));
    for (int z = 0; z < game.num_outcomes(); ++z)
        col[static_cast<std::size_t>(z)] = game.loss[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)];
    return col;
}

double hindsight_loss(const Game& game, const History& history) {
    if (history.empty()) return 0.0;
    if (game.quad_exact) {
        double s1 = 0.0, s2 = 0.0;
        for (int z : history) {
            double zz = game.outcome_coord1(z);
            s1 += zz;
            s2 += zz * zz;
        }
        double n = static_cast<double>(history.size());
        double fstar = clamp(s1 / n, game.quad_exact->lo, game.quad_exact->hi);
        return s2 - 2.0 * fstar * s1 + n * fstar * fstar;
    }
    const int nf = game.num_actions();
    std::vector<double> tot(static_cast<std::size_t>(nf), 0.0);
    for (int z : history) {
        const auto& row = game.loss[static_cast<std::size_t>(z)];
        for (int f = 0; f < nf; ++f) tot[static_cast<std::size_t>(f)] += row[static_cast<std::size_t>(f)];
    }
    return *std::min_element(tot.begin(), tot.end());
}

}  // namespace regretlab
