#include "regretlab/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "regretlab/errors.hpp"

namespace regretlab {

namespace {

// Primal simplex for the classic game LP. For the row minimizer of a positive
// payoff matrix P[f][z] (value v = min_q max_z q^T P), substitute x = q / v:
//   max sum_f x_f   s.t.  sum_f P[f][z] x_f <= 1 for every column z,  x >= 0,
// so v = 1 / sum(x) and q = v * x. The column player's optimal p falls out of
// the reduced costs on the slack columns.
struct GameLp {
    double value = 0.0;
    std::vector<double> p;  // over columns of the original payoff (outcomes)
    std::vector<double> q;  // over rows (actions)
};

GameLp solve_game_lp(const std::vector<std::vector<double>>& payoff) {
    const int m = static_cast<int>(payoff.size());        // actions (variables)
    const int n = static_cast<int>(payoff[0].size());     // outcomes (constraints)
    if (static_cast<std::int64_t>(n + 1) * (m + n + 1) > 40'000'000)
        throw resource_limit_error("inner_matrix_game_solve: LP tableau too large", 40'000'000);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& row : payoff)
        for (double x : row) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    const double shift = 1.0 - lo;          // entries become >= 1
    const double scale = hi - lo + 1.0;     // keep the tableau well-conditioned

    // Tableau: rows 0..n-1 constraints, row n objective. Columns 0..m-1 the
    // action variables, m..m+n-1 slacks, last column RHS.
    const int cols = m + n + 1;
    std::vector<std::vector<double>> t(static_cast<std::size_t>(n + 1),
                                       std::vector<double>(static_cast<std::size_t>(cols), 0.0));
    for (int z = 0; z < n; ++z) {
        for (int f = 0; f < m; ++f)
            t[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)] =
                (payoff[static_cast<std::size_t>(f)][static_cast<std::size_t>(z)] + shift) / scale;
        t[static_cast<std::size_t>(z)][static_cast<std::size_t>(m + z)] = 1.0;
        t[static_cast<std::size_t>(z)][static_cast<std::size_t>(cols - 1)] = 1.0;
    }
    for (int f = 0; f < m; ++f) t[static_cast<std::size_t>(n)][static_cast<std::size_t>(f)] = -1.0;

    std::vector<int> basis(static_cast<std::size_t>(n));
    for (int z = 0; z < n; ++z) basis[static_cast<std::size_t>(z)] = m + z;

    const double eps = 1e-12;
    const int max_iters = 50 * (m + n) + 200;
    for (int iter = 0;; ++iter) {
        if (iter >= max_iters)
            throw std::runtime_error("inner_matrix_game_solve: simplex iteration cap hit");
        // entering column: Bland's rule on the objective row
        int enter = -1;
        for (int j = 0; j < cols - 1; ++j)
            if (t[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] < -eps) {
                enter = j;
                break;
            }
        if (enter < 0) break;
        // leaving row: minimum ratio, ties by smallest basis index (Bland)
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double a = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
            if (a > eps) {
                double ratio = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols - 1)] / a;
                if (ratio < best - eps ||
                    (ratio < best + eps && (leave < 0 || basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]))) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) throw std::runtime_error("inner_matrix_game_solve: LP unbounded");
        // pivot
        double piv = t[static_cast<std::size_t>(leave)][static_cast<std::size_t>(enter)];
        auto& lr = t[static_cast<std::size_t>(leave)];
        for (double& x : lr) x /= piv;
        for (int i = 0; i <= n; ++i) {
            if (i == leave) continue;
            double factor = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
            if (factor == 0.0) continue;
            auto& ri = t[static_cast<std::size_t>(i)];
            for (int j = 0; j < cols; ++j) ri[static_cast<std::size_t>(j)] -= factor * lr[static_cast<std::size_t>(j)];
        }
        basis[static_cast<std::size_t>(leave)] = enter;
    }

    std::vector<double> x(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < n; ++i)
        if (basis[static_cast<std::size_t>(i)] < m)
            x[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] =
                t[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols - 1)];
    double xsum = 0.0;
    for (double v : x) xsum += v;
    // dual variables = reduced costs on the slack columns
    std::vector<double> u(static_cast<std::size_t>(n), 0.0);
    double usum = 0.0;
    for (int z = 0; z < n; ++z) {
        double v = t[static_cast<std::size_t>(n)][static_cast<std::size_t>(m + z)];
        u[static_cast<std::size_t>(z)] = std::max(0.0, v);
        usum += u[static_cast<std::size_t>(z)];
    }

    GameLp out;
    double v_scaled = 1.0 / xsum;  // value of the shifted/scaled game
    out.value = v_scaled * scale - shift;
    out.q.resize(static_cast<std::size_t>(m));
    for (int f = 0; f < m; ++f) out.q[static_cast<std::size_t>(f)] = x[static_cast<std::size_t>(f)] / xsum;
    out.p.resize(static_cast<std::size_t>(n));
    for (int z = 0; z < n; ++z) out.p[static_cast<std::size_t>(z)] = u[static_cast<std::size_t>(z)] / usum;
    return out;
}

std::vector<double> column_payoffs(const std::vector<std::vector<double>>& payoff,
                                   const std::vector<double>& q) {
    const int m = static_cast<int>(payoff.size());
    const int n = static_cast<int>(payoff[0].size());
    std::vector<double> col(static_cast<std::size_t>(n), 0.0);
    for (int f = 0; f < m; ++f) {
        double qf = q[static_cast<std::size_t>(f)];
        if (qf == 0.0) continue;
        for (int z = 0; z < n; ++z)
            col[static_cast<std::size_t>(z)] += qf * payoff[static_cast<std::size_t>(f)][static_cast<std::size_t>(z)];
    }
    return col;
}

}  // namespace

MatrixGameSolution inner_matrix_game_solve(const std::vector<std::vector<double>>& payoff,
                                           InnerSolver method, int mw_iters) {
    if (payoff.empty() || payoff[0].empty())
        throw std::invalid_argument("inner_matrix_game_solve: empty payoff");
    const int m = static_cast<int>(payoff.size());
    const int n = static_cast<int>(payoff[0].size());
    for (const auto& row : payoff)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("inner_matrix_game_solve: ragged payoff");

    MatrixGameSolution sol;
    if (n == 1) {
        // no adversary choice: pure argmin row
        int best = 0;
        for (int f = 1; f < m; ++f)
            if (payoff[static_cast<std::size_t>(f)][0] < payoff[static_cast<std::size_t>(best)][0]) best = f;
        sol.q = MixedAction::point_mass(m, best);
        sol.value = payoff[static_cast<std::size_t>(best)][0];
        sol.p = SimplexDist::point_mass(1, 0);
        sol.worst_outcomes = {0};
        return sol;
    }
    if (m == 1) {
        sol.q = MixedAction::point_mass(1, 0);
        int worst = 0;
        for (int z = 1; z < n; ++z)
            if (payoff[0][static_cast<std::size_t>(z)] > payoff[0][static_cast<std::size_t>(worst)]) worst = z;
        sol.value = payoff[0][static_cast<std::size_t>(worst)];
        sol.p = SimplexDist::point_mass(n, worst);
    } else if (method == InnerSolver::exhaustive) {
        // deterministic player: min over pure rows of the row maximum
        int best = -1;
        double bestval = std::numeric_limits<double>::infinity();
        for (int f = 0; f < m; ++f) {
            double rowmax = *std::max_element(payoff[static_cast<std::size_t>(f)].begin(),
                                              payoff[static_cast<std::size_t>(f)].end());
            if (rowmax < bestval) {
                bestval = rowmax;
                best = f;
            }
        }
        sol.q = MixedAction::point_mass(m, best);
        sol.value = bestval;
        int worst = static_cast<int>(std::max_element(payoff[static_cast<std::size_t>(best)].begin(),
                                                      payoff[static_cast<std::size_t>(best)].end()) -
                                     payoff[static_cast<std::size_t>(best)].begin());
        sol.p = SimplexDist::point_mass(n, worst);
    } else if (method == InnerSolver::mw) {
        // Hedge over rows against best-responding columns; averaged strategies
        std::vector<double> logw(static_cast<std::size_t>(m), 0.0);
        std::vector<double> qavg(static_cast<std::size_t>(m), 0.0);
        std::vector<double> pavg(static_cast<std::size_t>(n), 0.0);
        double lo = payoff[0][0], hi = payoff[0][0];
        for (const auto& row : payoff)
            for (double x : row) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        double range = std::max(hi - lo, 1e-300);
        double eta = std::sqrt(8.0 * std::log(std::max(2, m)) / mw_iters) / range;
        std::vector<double> q(static_cast<std::size_t>(m));
        for (int it = 0; it < mw_iters; ++it) {
            double mx = *std::max_element(logw.begin(), logw.end());
            double sum = 0.0;
            for (int f = 0; f < m; ++f) {
                q[static_cast<std::size_t>(f)] = std::exp(logw[static_cast<std::size_t>(f)] - mx);
                sum += q[static_cast<std::size_t>(f)];
            }
            for (double& x : q) x /= sum;
            auto col = column_payoffs(payoff, q);
            int br = static_cast<int>(std::max_element(col.begin(), col.end()) - col.begin());
            pavg[static_cast<std::size_t>(br)] += 1.0;
            for (int f = 0; f < m; ++f) {
                qavg[static_cast<std::size_t>(f)] += q[static_cast<std::size_t>(f)];
                logw[static_cast<std::size_t>(f)] -= eta * payoff[static_cast<std::size_t>(f)][static_cast<std::size_t>(br)];
            }
        }
        for (double& x : qavg) x /= mw_iters;
        for (double& x : pavg) x /= mw_iters;
        auto col = column_payoffs(payoff, qavg);
        double upper = *std::max_element(col.begin(), col.end());
        // lower value of the averaged column strategy: min over rows of E_p payoff
        double lower = std::numeric_limits<double>::infinity();
        for (int f = 0; f < m; ++f) {
            double s = 0.0;
            for (int z = 0; z < n; ++z)
                s += payoff[static_cast<std::size_t>(f)][static_cast<std::size_t>(z)] * pavg[static_cast<std::size_t>(z)];
            lower = std::min(lower, s);
        }
        sol.q.w = qavg;
        sol.value = upper;
        sol.gap = upper - lower;
        sol.p = SimplexDist(pavg);
    } else {
        GameLp lp = solve_game_lp(payoff);
        sol.q.w = lp.q;
        sol.p = SimplexDist(lp.p);
        auto col = column_payoffs(payoff, lp.q);
        double upper = *std::max_element(col.begin(), col.end());
        sol.value = lp.value;
        sol.gap = std::max(0.0, upper - lp.value);
        if (sol.gap > 1e-8) {
            // report the certified value rather than the LP estimate
            sol.value = upper;
            sol.gap = 0.0;
        }
    }
    auto col = column_payoffs(payoff, sol.q.w);
    double mx = *std::max_element(col.begin(), col.end());
    for (int z = 0; z < n; ++z)
        if (col[static_cast<std::size_t>(z)] >= mx - 1e-9) sol.worst_outcomes.push_back(z);
    return sol;
}

}  // namespace regretlab
