#include "regretlab/regret.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "regretlab/errors.hpp"
#include "regretlab/rng.hpp"

namespace regretlab {

JointDistTree JointDistTree::from_strategy(const AdversaryStrategy& s) {
    JointDistTree j;
    j.T = s.T;
    j.num_outcomes = s.num_outcomes;
    j.kind = s.kind;
    j.conditional = s.conditional;
    return j;
}

JointDistTree JointDistTree::dense(int T, int num_outcomes,
                                   std::vector<std::vector<SimplexDist>> levels) {
    if (static_cast<int>(levels.size()) != T)
        throw std::invalid_argument("JointDistTree::dense: need T levels");
    JointDistTree j;
    j.T = T;
    j.num_outcomes = num_outcomes;
    j.conditional = [levels = std::move(levels), num_outcomes](const History& h) {
        std::size_t idx = 0;
        for (int z : h) idx = idx * static_cast<std::size_t>(num_outcomes) + static_cast<std::size_t>(z);
        return levels.at(h.size()).at(idx);
    };
    return j;
}

namespace {

// Path probabilities of all n^T leaves in lexicographic order.
std::vector<double> path_probs(const JointDistTree& j, std::int64_t node_cap) {
    std::int64_t leaves = 1;
    for (int t = 0; t < j.T; ++t) {
        leaves *= j.num_outcomes;
        if (leaves > node_cap) throw resource_limit_error("joint_mixture: tree too large", node_cap);
    }
    std::vector<double> probs(static_cast<std::size_t>(leaves), 0.0);
    History h;
    auto rec = [&](auto&& self, double prob, std::int64_t base) -> void {
        if (static_cast<int>(h.size()) == j.T) {
            probs[static_cast<std::size_t>(base)] = prob;
            return;
        }
        SimplexDist cond = j.conditional(h);
        for (int z = 0; z < j.num_outcomes; ++z) {
            h.push_back(z);
            self(self, prob * cond[z], base * j.num_outcomes + z);
            h.pop_back();
        }
    };
    rec(rec, 1.0, 0);
    return probs;
}

}  // namespace

JointDistTree joint_mixture(const JointDistTree& a, const JointDistTree& b, double lam,
                            std::int64_t node_cap) {
    if (a.T != b.T || a.num_outcomes != b.num_outcomes)
        throw std::invalid_argument("joint_mixture: shape mismatch");
    if (lam < 0.0 || lam > 1.0) throw std::invalid_argument("joint_mixture: lambda outside [0,1]");
    auto pa = path_probs(a, node_cap);
    auto pb = path_probs(b, node_cap);
    std::vector<double> mix(pa.size());
    for (std::size_t i = 0; i < pa.size(); ++i) mix[i] = lam * pa[i] + (1.0 - lam) * pb[i];

    const int n = a.num_outcomes;
    std::vector<std::vector<SimplexDist>> levels(static_cast<std::size_t>(a.T));
    // prefix masses, level by level from the leaves
    std::vector<double> mass = mix;  // masses at depth T
    for (int t = a.T - 1; t >= 0; --t) {
        std::size_t nodes = mass.size() / static_cast<std::size_t>(n);
        std::vector<double> up(nodes, 0.0);
        levels[static_cast<std::size_t>(t)].resize(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            double m = 0.0;
            for (int z = 0; z < n; ++z) m += mass[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(z)];
            up[i] = m;
            std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
            if (m > 0.0)
                for (int z = 0; z < n; ++z)
                    w[static_cast<std::size_t>(z)] = mass[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(z)] / m;
            levels[static_cast<std::size_t>(t)][i] = SimplexDist(std::move(w));
        }
        mass = std::move(up);
    }
    return JointDistTree::dense(a.T, n, std::move(levels));
}

void enumerate_tree(const JointDistTree& joint,
                    const std::function<void(double, const History&, const SimplexDist&)>& node_fn,
                    const std::function<void(double, const History&)>& leaf_fn,
                    std::int64_t leaf_cap) {
    std::int64_t visited = 0;
    History h;
    h.reserve(static_cast<std::size_t>(joint.T));
    auto rec = [&](auto&& self, double prob) -> void {
        if (static_cast<int>(h.size()) == joint.T) {
            if (++visited > leaf_cap)
                throw resource_limit_error("enumerate_tree: leaf budget exceeded", leaf_cap);
            if (leaf_fn) leaf_fn(prob, h);
            return;
        }
        SimplexDist cond = joint.conditional(h);
        if (node_fn) node_fn(prob, h, cond);
        for (int z = 0; z < joint.num_outcomes; ++z) {
            if (cond[z] <= 0.0) continue;
            h.push_back(z);
            self(self, prob * cond[z]);
            h.pop_back();
        }
    };
    rec(rec, 1.0);
}

RegretReport p_regret_exact(const Game& game, const JointDistTree& joint, std::int64_t path_cap) {
    if (joint.num_outcomes != game.num_outcomes())
        throw std::invalid_argument("p_regret_exact: outcome count mismatch");
    RegretReport rep;
    rep.mode = RegretReport::Mode::exact;
    rep.game = game.name;
    rep.T = joint.T;
    rep.num_outcomes = game.num_outcomes();
    rep.num_actions = game.num_actions();
    std::vector<CompensatedSum> round_phi(static_cast<std::size_t>(joint.T));
    CompensatedSum comparator;
    enumerate_tree(
        joint,
        [&](double prob, const History& h, const SimplexDist& cond) {
            round_phi[h.size()].add(prob * phi(game, cond).value);
        },
        [&](double prob, const History& h) { comparator.add(prob * hindsight_loss(game, h)); },
        path_cap);
    rep.per_round_phi.resize(static_cast<std::size_t>(joint.T));
    CompensatedSum total;
    for (int t = 0; t < joint.T; ++t) {
        rep.per_round_phi[static_cast<std::size_t>(t)] = round_phi[static_cast<std::size_t>(t)].value();
        total.add(rep.per_round_phi[static_cast<std::size_t>(t)]);
    }
    rep.comparator = comparator.value();
    rep.value = total.value() - rep.comparator;
    return rep;
}

double p_regret_value(const Game& game, const JointDistTree& joint, std::int64_t path_cap) {
    CompensatedSum acc;
    enumerate_tree(
        joint,
        [&](double prob, const History&, const SimplexDist& cond) {
            acc.add(prob * phi(game, cond).value);
        },
        [&](double prob, const History& h) { acc.add(-prob * hindsight_loss(game, h)); },
        path_cap);
    return acc.value();
}

RegretReport p_regret_mc(const Game& game, const AdversaryStrategy& strategy,
                         std::int64_t samples, std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("p_regret_mc: samples >= 2 required");
    if (strategy.num_outcomes != game.num_outcomes())
        throw std::invalid_argument("p_regret_mc: outcome count mismatch");
    const int T = strategy.T;
    const int nz = strategy.num_outcomes;

    // For history-independent strategies the per-round Phi terms are fixed;
    // precompute them once.
    std::vector<double> fixed_phi;
    std::vector<SimplexDist> fixed_cond;
    if (strategy.kind != StrategyKind::dependent) {
        History h;
        for (int t = 0; t < T; ++t) {
            SimplexDist cond = strategy.conditional(h);
            fixed_cond.push_back(cond);
            fixed_phi.push_back(phi(game, cond).value);
            h.push_back(0);
        }
    }

    Estimate est = mc_run("p_regret_mc", seed, samples, [&](std::int64_t, Rng& rng) {
        History h;
        h.reserve(static_cast<std::size_t>(T));
        double phisum = 0.0;
        for (int t = 0; t < T; ++t) {
            SimplexDist cond =
                strategy.kind == StrategyKind::dependent ? strategy.conditional(h) : fixed_cond[static_cast<std::size_t>(t)];
            phisum += strategy.kind == StrategyKind::dependent ? phi(game, cond).value
                                                               : fixed_phi[static_cast<std::size_t>(t)];
            double u = rng.uniform();
            int z = 0;
            double acc = 0.0;
            for (; z < nz - 1; ++z) {
                acc += cond[z];
                if (u < acc) break;
            }
            h.push_back(z);
        }
        return phisum - hindsight_loss(game, h);
    });

    RegretReport rep;
    rep.mode = RegretReport::Mode::mc;
    rep.value = est.value;
    rep.stderr_ = est.stderr_;
    rep.samples = est.samples;
    rep.seed = seed;
    rep.game = game.name;
    rep.T = T;
    rep.num_outcomes = game.num_outcomes();
    rep.num_actions = game.num_actions();
    return rep;
}

namespace {

struct MinimaxCtx {
    const Game& game;
    const MinimaxOptions& opt;
    MinimaxResult& result;
    bool keep_tree;
};

double minimax_rec(MinimaxCtx& ctx, History& h, int T) {
    if (static_cast<int>(h.size()) == T) return -hindsight_loss(ctx.game, h);
    const int nz = ctx.game.num_outcomes();
    const int nf = ctx.game.num_actions();
    std::vector<double> cont(static_cast<std::size_t>(nz));
    for (int z = 0; z < nz; ++z) {
        h.push_back(z);
        cont[static_cast<std::size_t>(z)] = minimax_rec(ctx, h, T);
        h.pop_back();
    }
    std::vector<std::vector<double>> payoff(static_cast<std::size_t>(nf),
                                            std::vector<double>(static_cast<std::size_t>(nz)));
    for (int f = 0; f < nf; ++f)
        for (int z = 0; z < nz; ++z)
            payoff[static_cast<std::size_t>(f)][static_cast<std::size_t>(z)] =
                ctx.game.loss[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)] + cont[static_cast<std::size_t>(z)];
    auto sol = inner_matrix_game_solve(payoff, ctx.opt.solver, ctx.opt.mw_iters);
    ctx.result.max_inner_gap = std::max(ctx.result.max_inner_gap, sol.gap);
    ++ctx.result.nodes;
    if (ctx.keep_tree) {
        ValueNode node;
        node.history = h;
        node.continuation_value = sol.value;
        node.optimal_mixed_action = sol.q;
        node.worst_outcome_set = sol.worst_outcomes;
        node.adversary_dist = sol.p;
        ctx.result.tree.push_back(std::move(node));
    }
    return sol.value;
}

}  // namespace

MinimaxResult minimax_value(const Game& game, int T, const MinimaxOptions& opt) {
    if (T < 1) throw std::invalid_argument("minimax_value: T >= 1 required");
    double paths = std::pow(static_cast<double>(game.num_outcomes()), T);
    if (paths > static_cast<double>(opt.path_cap))
        throw resource_limit_error("minimax_value: outcome tree over path cap", opt.path_cap);
    std::int64_t nodes = 0, level = 1;
    for (int t = 0; t < T; ++t) {
        nodes += level;
        level *= game.num_outcomes();
    }
    const bool keep_tree = nodes <= opt.tree_cap;
    const int nz = game.num_outcomes();

    // sibling subtrees under the root are independent; large trees solve them
    // in parallel and merge the per-child results in child order
    if (T >= 2 && paths >= 16384.0 && worker_count() > 1) {
        std::vector<MinimaxResult> parts(static_cast<std::size_t>(nz));
        std::vector<double> child_values(static_cast<std::size_t>(nz));
        parallel_for(
            nz,
            [&](std::int64_t z) {
                MinimaxCtx ctx{game, opt, parts[static_cast<std::size_t>(z)], keep_tree};
                History h{static_cast<int>(z)};
                child_values[static_cast<std::size_t>(z)] = minimax_rec(ctx, h, T);
            },
            /*grain=*/2);
        MinimaxResult result;
        const int nf = game.num_actions();
        std::vector<std::vector<double>> payoff(static_cast<std::size_t>(nf),
                                                std::vector<double>(static_cast<std::size_t>(nz)));
        for (int f = 0; f < nf; ++f)
            for (int z = 0; z < nz; ++z)
                payoff[static_cast<std::size_t>(f)][static_cast<std::size_t>(z)] =
                    game.loss[static_cast<std::size_t>(z)][static_cast<std::size_t>(f)] +
                    child_values[static_cast<std::size_t>(z)];
        auto sol = inner_matrix_game_solve(payoff, opt.solver, opt.mw_iters);
        for (auto& part : parts) {
            result.max_inner_gap = std::max(result.max_inner_gap, part.max_inner_gap);
            result.nodes += part.nodes;
            if (keep_tree)
                result.tree.insert(result.tree.end(), std::make_move_iterator(part.tree.begin()),
                                   std::make_move_iterator(part.tree.end()));
        }
        result.max_inner_gap = std::max(result.max_inner_gap, sol.gap);
        ++result.nodes;
        if (keep_tree) {
            ValueNode root;
            root.continuation_value = sol.value;
            root.optimal_mixed_action = sol.q;
            root.worst_outcome_set = sol.worst_outcomes;
            root.adversary_dist = sol.p;
            result.tree.push_back(std::move(root));
        }
        result.value = sol.value;
        return result;
    }

    MinimaxResult result;
    MinimaxCtx ctx{game, opt, result, keep_tree};
    History h;
    result.value = minimax_rec(ctx, h, T);
    return result;
}

// ---------------------------------------------------------------------------
// dual search

namespace {

struct TreeParams {
    int T = 0;
    int nz = 0;
    // levels[t][node * nz + z]
    std::vector<std::vector<double>> levels;

    static TreeParams shape(int T, int nz) {
        TreeParams p;
        p.T = T;
        p.nz = nz;
        std::size_t nodes = 1;
        p.levels.resize(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t) {
            p.levels[static_cast<std::size_t>(t)].assign(nodes * static_cast<std::size_t>(nz), 1.0 / nz);
            nodes *= static_cast<std::size_t>(nz);
        }
        return p;
    }

    JointDistTree tree() const {
        std::vector<std::vector<SimplexDist>> lv(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t) {
            std::size_t nodes = levels[static_cast<std::size_t>(t)].size() / static_cast<std::size_t>(nz);
            lv[static_cast<std::size_t>(t)].reserve(nodes);
            for (std::size_t i = 0; i < nodes; ++i) {
                std::vector<double> w(levels[static_cast<std::size_t>(t)].begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(nz)),
                                      levels[static_cast<std::size_t>(t)].begin() + static_cast<std::ptrdiff_t>((i + 1) * static_cast<std::size_t>(nz)));
                lv[static_cast<std::size_t>(t)].emplace_back(std::move(w));
            }
        }
        return JointDistTree::dense(T, nz, std::move(lv));
    }

    static TreeParams from_tree(const JointDistTree& j) {
        TreeParams p = shape(j.T, j.num_outcomes);
        History h;
        auto rec = [&](auto&& self, std::size_t node) -> void {
            int t = static_cast<int>(h.size());
            if (t == j.T) return;
            SimplexDist cond = j.conditional(h);
            for (int z = 0; z < j.num_outcomes; ++z)
                p.levels[static_cast<std::size_t>(t)][node * static_cast<std::size_t>(j.num_outcomes) + static_cast<std::size_t>(z)] = cond[z];
            for (int z = 0; z < j.num_outcomes; ++z) {
                h.push_back(z);
                self(self, node * static_cast<std::size_t>(j.num_outcomes) + static_cast<std::size_t>(z));
                h.pop_back();
            }
        };
        rec(rec, 0);
        return p;
    }

    std::size_t dim() const {
        std::size_t d = 0;
        for (const auto& l : levels) d += l.size();
        return d;
    }

    double& at(std::size_t flat) {
        for (auto& l : levels) {
            if (flat < l.size()) return l[flat];
            flat -= l.size();
        }
        throw std::out_of_range("TreeParams::at");
    }
};

// Euclidean projection onto the probability simplex.
void project_simplex(std::span<double> w) {
    std::vector<double> u(w.begin(), w.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    for (double& x : w) x = std::max(0.0, x - theta);
    double s = 0.0;
    for (double x : w) s += x;
    for (double& x : w) x /= s;
}

void project_all(TreeParams& p) {
    for (auto& level : p.levels) {
        std::size_t nodes = level.size() / static_cast<std::size_t>(p.nz);
        for (std::size_t i = 0; i < nodes; ++i)
            project_simplex(std::span<double>(level).subspan(i * static_cast<std::size_t>(p.nz),
                                                             static_cast<std::size_t>(p.nz)));
    }
}

struct AscentBudget {
    std::int64_t remaining;
    bool exhausted = false;
    bool spend() {
        if (remaining <= 0) {
            exhausted = true;
            return false;
        }
        --remaining;
        return true;
    }
};

double eval_params(const Game& game, const TreeParams& p, std::int64_t path_cap, AscentBudget& budget) {
    if (!budget.spend()) return -std::numeric_limits<double>::infinity();
    return p_regret_value(game, p.tree(), path_cap);
}

// Projected gradient ascent with numeric forward differences plus exact 1-d
// line searches along per-node coordinate swaps; the regret is concave in the
// joint path probabilities, and affine in each node's conditional when the
// others are held fixed, so both phases only ever improve.
double ascend(const Game& game, TreeParams& p, double& fval, const DualSearchOptions& opt,
              AscentBudget& budget, std::int64_t path_cap) {
    const std::size_t dim = p.dim();
    double step = 0.25;
    const double h = 1e-7;
    int stall = 0;
    while (!budget.exhausted && stall < 2) {
        bool improved = false;
        // numeric gradient
        std::vector<double> grad(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            TreeParams q = p;
            q.at(i) += h;
            double f2 = eval_params(game, q, path_cap, budget);
            if (budget.exhausted) break;
            grad[i] = (f2 - fval) / h;
        }
        if (budget.exhausted) break;
        double gn = 0.0;
        for (double g : grad) gn += g * g;
        gn = std::sqrt(gn);
        if (gn > 0.0) {
            while (step > 1e-10 && !budget.exhausted) {
                TreeParams q = p;
                for (std::size_t i = 0; i < dim; ++i) q.at(i) += step / gn * grad[i];
                project_all(q);
                double f2 = eval_params(game, q, path_cap, budget);
                if (f2 > fval + 1e-15) {
                    p = std::move(q);
                    fval = f2;
                    step *= 1.5;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
        }
        // exact concave line search per node along (e_i - e_j) directions
        double before = fval;
        for (auto& level : p.levels) {
            std::size_t nodes = level.size() / static_cast<std::size_t>(p.nz);
            for (std::size_t node = 0; node < nodes && !budget.exhausted; ++node) {
                for (int i = 0; i < p.nz; ++i) {
                    int j = (i + 1) % p.nz;
                    std::size_t bi = node * static_cast<std::size_t>(p.nz);
                    double wi = level[bi + static_cast<std::size_t>(i)];
                    double wj = level[bi + static_cast<std::size_t>(j)];
                    double lo = -wi, hi = wj;  // move mass d from j to i
                    if (hi - lo < 1e-12) continue;
                    auto f_of = [&](double d) {
                        TreeParams q = p;
                        q.levels[static_cast<std::size_t>(&level - p.levels.data())][bi + static_cast<std::size_t>(i)] = wi + d;
                        q.levels[static_cast<std::size_t>(&level - p.levels.data())][bi + static_cast<std::size_t>(j)] = wj - d;
                        return eval_params(game, q, path_cap, budget);
                    };
                    // golden-section on a concave 1-d slice
                    const double gr = 0.6180339887498949;
                    double a = lo, b = hi;
                    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
                    double f1 = f_of(x1), f2 = f_of(x2);
                    for (int it = 0; it < 40 && b - a > 1e-12 && !budget.exhausted; ++it) {
                        if (f1 < f2) {
                            a = x1;
                            x1 = x2;
                            f1 = f2;
                            x2 = a + gr * (b - a);
                            f2 = f_of(x2);
                        } else {
                            b = x2;
                            x2 = x1;
                            f2 = f1;
                            x1 = b - gr * (b - a);
                            f1 = f_of(x1);
                        }
                    }
                    double best_d = f1 > f2 ? x1 : x2;
                    double best_f = std::max(f1, f2);
                    if (best_f > fval + 1e-15) {
                        level[bi + static_cast<std::size_t>(i)] = wi + best_d;
                        level[bi + static_cast<std::size_t>(j)] = wj - best_d;
                        fval = best_f;
                        improved = true;
                    }
                }
            }
        }
        if (fval - before < opt.tol * 1e-3 && !improved) break;
        stall = improved ? 0 : stall + 1;
    }
    return fval;
}

}  // namespace

DualSearchResult dual_search(const Game& game, int T, const DualSearchOptions& opt) {
    if (T < 1) throw std::invalid_argument("dual_search: T >= 1 required");
    const int nz = game.num_outcomes();
    AscentBudget budget{opt.budget};

    std::vector<TreeParams> starts;
    if (opt.minimax_warm_start) {
        // minimax duality's constructive direction: each conditional is the
        // maximizing outcome distribution of the inner game at that history
        MinimaxOptions mopt;
        mopt.path_cap = opt.path_cap;
        double paths = std::pow(static_cast<double>(nz), T);
        if (paths <= static_cast<double>(opt.path_cap)) {
            auto mm = minimax_value(game, T, mopt);
            if (!mm.tree.empty()) {
                TreeParams p = TreeParams::shape(T, nz);
                for (const auto& node : mm.tree) {
                    std::size_t idx = 0;
                    for (int z : node.history) idx = idx * static_cast<std::size_t>(nz) + static_cast<std::size_t>(z);
                    for (int z = 0; z < nz; ++z)
                        p.levels[node.history.size()][idx * static_cast<std::size_t>(nz) + static_cast<std::size_t>(z)] =
                            node.adversary_dist[z];
                }
                starts.push_back(std::move(p));
            }
        }
    }
    for (const auto& w : opt.warm_starts) starts.push_back(TreeParams::from_tree(w));
    starts.push_back(TreeParams::shape(T, nz));  // uniform i.i.d.
    Rng rng(substream_seed(opt.seed, "dual_search", 0));
    for (int r = 0; r < opt.restarts; ++r) {
        TreeParams p = TreeParams::shape(T, nz);
        // exponential draws normalized per node = uniform on the simplex
        for (auto& level : p.levels) {
            for (double& x : level) x = -std::log(std::max(rng.uniform(), 1e-12));
            std::size_t nodes = level.size() / static_cast<std::size_t>(nz);
            for (std::size_t i = 0; i < nodes; ++i) {
                double s = 0.0;
                for (int z = 0; z < nz; ++z) s += level[i * static_cast<std::size_t>(nz) + static_cast<std::size_t>(z)];
                for (int z = 0; z < nz; ++z) level[i * static_cast<std::size_t>(nz) + static_cast<std::size_t>(z)] /= s;
            }
        }
        starts.push_back(std::move(p));
    }
    if (opt.budget < static_cast<std::int64_t>(starts.size()))
        throw std::invalid_argument("dual_search: budget too small for the start set");

    if (opt.optimizer == DualSearchOptions::Optimizer::grid) {
        // coarse i.i.d. grid over the simplex as additional starts
        int res = 12;
        std::vector<double> w(static_cast<std::size_t>(nz), 0.0);
        auto rec = [&](auto&& self, int idx, int rem) -> void {
            if (idx == nz - 1) {
                w[static_cast<std::size_t>(idx)] = static_cast<double>(rem) / res;
                TreeParams p = TreeParams::shape(T, nz);
                for (auto& level : p.levels) {
                    std::size_t nodes = level.size() / static_cast<std::size_t>(nz);
                    for (std::size_t i = 0; i < nodes; ++i)
                        for (int z = 0; z < nz; ++z)
                            level[i * static_cast<std::size_t>(nz) + static_cast<std::size_t>(z)] = w[static_cast<std::size_t>(z)];
                }
                starts.push_back(std::move(p));
                return;
            }
            for (int k = 0; k <= rem; ++k) {
                w[static_cast<std::size_t>(idx)] = static_cast<double>(k) / res;
                self(self, idx + 1, rem - k);
            }
        };
        if (std::pow(res + 1.0, nz - 1) < 2000) rec(rec, 0, res);
    }

    TreeParams best;
    double best_val = -std::numeric_limits<double>::infinity();
    for (auto& start : starts) {
        if (budget.exhausted) break;
        double fval = eval_params(game, start, opt.path_cap, budget);
        ascend(game, start, fval, opt, budget, opt.path_cap);
        if (fval > best_val) {
            best_val = fval;
            best = std::move(start);
        }
    }

    DualSearchResult res;
    res.joint = best.tree();
    res.value = best_val;
    res.budget_exhausted = budget.exhausted;
    res.evals = opt.budget - budget.remaining;
    return res;
}

// ---------------------------------------------------------------------------
// hierarchy

namespace {

// unvalidated builders: the ascent probes slightly off-simplex points
JointDistTree iid_tree(const SimplexDist& p, int T) {
    JointDistTree j;
    j.T = T;
    j.num_outcomes = p.size();
    j.kind = StrategyKind::iid;
    j.conditional = [p](const History&) { return p; };
    return j;
}

JointDistTree product_tree(const std::vector<SimplexDist>& ps) {
    JointDistTree j;
    j.T = static_cast<int>(ps.size());
    j.num_outcomes = ps[0].size();
    j.kind = StrategyKind::product;
    j.conditional = [ps](const History& h) { return ps.at(h.size()); };
    return j;
}

// Multistart projected ascent of g over a product of simplices, with the same
// gradient + golden-section machinery reused coordinate-block-wise.
std::vector<SimplexDist> maximize_over_blocks(
    const std::function<double(const std::vector<SimplexDist>&)>& g, int blocks, int nz,
    std::vector<std::vector<SimplexDist>> starts, std::int64_t budget, double tol) {
    std::int64_t used = 0;
    auto eval = [&](const std::vector<SimplexDist>& x) {
        ++used;
        return g(x);
    };
    std::vector<SimplexDist> best;
    double best_val = -std::numeric_limits<double>::infinity();
    for (auto& x : starts) {
        double fval = eval(x);
        double step = 0.25;
        const double h = 1e-7;
        int stall = 0;
        while (used < budget && stall < 2) {
            bool improved = false;
            std::vector<std::vector<double>> grad(static_cast<std::size_t>(blocks),
                                                  std::vector<double>(static_cast<std::size_t>(nz), 0.0));
            double gn = 0.0;
            for (int b = 0; b < blocks; ++b)
                for (int z = 0; z < nz; ++z) {
                    auto y = x;
                    y[static_cast<std::size_t>(b)].w[static_cast<std::size_t>(z)] += h;
                    double f2 = eval(y);
                    double gcomp = (f2 - fval) / h;
                    grad[static_cast<std::size_t>(b)][static_cast<std::size_t>(z)] = gcomp;
                    gn += gcomp * gcomp;
                }
            gn = std::sqrt(gn);
            if (gn > 0.0) {
                while (step > 1e-10 && used < budget) {
                    auto y = x;
                    for (int b = 0; b < blocks; ++b) {
                        for (int z = 0; z < nz; ++z)
                            y[static_cast<std::size_t>(b)].w[static_cast<std::size_t>(z)] +=
                                step / gn * grad[static_cast<std::size_t>(b)][static_cast<std::size_t>(z)];
                        project_simplex(y[static_cast<std::size_t>(b)].w);
                    }
                    double f2 = eval(y);
                    if (f2 > fval + 1e-15) {
                        x = std::move(y);
                        fval = f2;
                        step *= 1.5;
                        improved = true;
                        break;
                    }
                    step *= 0.5;
                }
            }
            // pairwise golden-section polish per block
            double before = fval;
            for (int b = 0; b < blocks && used < budget; ++b) {
                for (int i = 0; i < nz; ++i) {
                    int j = (i + 1) % nz;
                    double wi = x[static_cast<std::size_t>(b)].w[static_cast<std::size_t>(i)];
                    double wj = x[static_cast<std::size_t>(b)].w[static_cast<std::size_t>(j)];
                    double a = -wi, bb = wj;
                    if (bb - a < 1e-12) continue;
                    auto f_of = [&](double d) {
                        auto y = x;
                        y[static_cast<std::size_t>(b)].w[static_cast<std::size_t>(i)] = wi + d;
                        y[static_cast<std::size_t>(b)].w[static_cast<std::size_t>(j)] = wj - d;
                        return eval(y);
                    };
                    const double gr = 0.6180339887498949;
                    double x1 = bb - gr * (bb - a), x2 = a + gr * (bb - a);
                    double f1 = f_of(x1), f2 = f_of(x2);
                    for (int it = 0; it < 40 && bb - a > 1e-12 && used < budget; ++it) {
                        if (f1 < f2) {
                            a = x1; x1 = x2; f1 = f2; x2 = a + gr * (bb - a); f2 = f_of(x2);
                        } else {
                            bb = x2; x2 = x1; f2 = f1; x1 = bb - gr * (bb - a); f1 = f_of(x1);
                        }
                    }
                    double bd = f1 > f2 ? x1 : x2;
                    double bf = std::max(f1, f2);
                    if (bf > fval + 1e-15) {
                        auto& blk = x[static_cast<std::size_t>(b)].w;
                        blk[static_cast<std::size_t>(i)] = wi + bd;
                        blk[static_cast<std::size_t>(j)] = wj - bd;
                        double s = 0.0;
                        for (double v : blk) s += v;
                        for (double& v : blk) v /= s;
                        fval = bf;
                        improved = true;
                    }
                }
            }
            if (fval - before < tol * 1e-3 && !improved) break;
            stall = improved ? 0 : stall + 1;
        }
        if (fval > best_val) {
            best_val = fval;
            best = std::move(x);
        }
        if (used >= budget) break;
    }
    return best;
}

}  // namespace

HierarchyResult hierarchy_eval(const Game& game, int T, const HierarchyOptions& opt) {
    const int nz = game.num_outcomes();
    HierarchyResult res;

    // i.i.d. stage: maximize Reg(p^T) over a single simplex point
    Rng rng(substream_seed(opt.seed, "hierarchy_eval", 0));
    std::vector<std::vector<SimplexDist>> iid_starts{{SimplexDist::uniform(nz)}};
    for (int r = 0; r < opt.restarts; ++r) {
        std::vector<double> w(static_cast<std::size_t>(nz));
        double s = 0.0;
        for (double& x : w) {
            x = -std::log(std::max(rng.uniform(), 1e-12));
            s += x;
        }
        for (double& x : w) x /= s;
        iid_starts.push_back({SimplexDist(std::move(w))});
    }
    auto g_iid = [&](const std::vector<SimplexDist>& x) {
        return p_regret_value(game, iid_tree(x[0], T), opt.path_cap);
    };
    auto best_iid = maximize_over_blocks(g_iid, 1, nz, std::move(iid_starts), opt.budget / 3, opt.tol);
    res.reg_iid = g_iid(best_iid);

    // product stage, warm-started from the best i.i.d. point
    std::vector<SimplexDist> prod_start(static_cast<std::size_t>(T), best_iid[0]);
    auto g_prod = [&](const std::vector<SimplexDist>& x) {
        return p_regret_value(game, product_tree(x), opt.path_cap);
    };
    auto best_prod =
        maximize_over_blocks(g_prod, T, nz, {prod_start}, opt.budget / 3, opt.tol);
    res.reg_indep = g_prod(best_prod);

    // joint stage, warm-started from the best product
    DualSearchOptions dopt;
    dopt.budget = opt.budget / 3;
    dopt.tol = opt.tol;
    dopt.restarts = opt.restarts;
    dopt.seed = opt.seed;
    dopt.path_cap = opt.path_cap;
    dopt.warm_starts = {product_tree(best_prod)};
    auto dual = dual_search(game, T, dopt);
    res.reg_joint = std::max(dual.value, res.reg_indep);

    res.reg_minimax = minimax_value(game, T).value;
    return res;
}

}  // namespace regretlab
