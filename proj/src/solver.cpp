#include "obs/solver.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "obs/error.hpp"

namespace obs {

LPSolution solve_exact(const DualProgram& program, const lp::SimplexOptions& opts) {
    lp::SimplexResult r = lp::solve(program.program, opts);
    LPSolution sol;
    sol.status = r.status;
    sol.pivots = r.pivots;
    if (r.status != lp::Status::Optimal) return sol;
    sol.u = r.primal[0];
    sol.x.assign(r.primal.begin() + 1, r.primal.end());
    sol.y.resize(program.num_y);
    Rational total(0);
    for (std::size_t j = 0; j < program.num_y; ++j) {
        sol.y[j] = -r.duals[j];
        total += sol.y[j];
    }
    if (total.is_zero()) throw std::logic_error("adversary mixture has zero mass");
    if (total != Rational(1))
        for (auto& v : sol.y) v /= total;
    return sol;
}

BehavioralStrategy extract_behavioral(const std::vector<Rational>& x, const SequenceFormLP& lp) {
    if (x.size() != lp.num_x) throw InputError("realization plan has the wrong length");
    BehavioralStrategy s;
    s.m = lp.m;
    s.g = lp.g;
    s.keying = lp.merged ? StrategyKeying::Canonical : StrategyKeying::History;
    for (const auto& set : lp.info_sets) {
        int width = 0;
        for (std::size_t a : set.actions) width = std::max(width, lp.vars[a].bin);
        width = std::max(width, lp.m);
        std::vector<Rational> dist(static_cast<std::size_t>(width), Rational(0));
        Rational weight(0);
        for (std::size_t a : set.actions) weight += x[a];
        for (std::size_t a : set.actions) {
            Rational p = weight.is_zero() ? Rational(1, static_cast<long>(set.actions.size())) : x[a] / weight;
            dist[static_cast<std::size_t>(lp.vars[a].bin - 1)] = p;
        }
        std::string key = s.keying == StrategyKeying::Canonical ? canonical_key(set.history, set.loads)
                                                                : history_key(set.history, set.decisions);
        s.table.emplace(std::move(key), std::move(dist));
    }
    return s;
}

AdversaryMix mix_from_solution(const LPSolution& sol, const SequenceFormLP& lp) {
    AdversaryMix mix;
    mix.m = lp.m;
    mix.g = lp.g;
    for (std::size_t j = 0; j < sol.y.size(); ++j)
        if (!sol.y[j].is_zero()) mix.support.emplace_back(lp.instances[j], sol.y[j]);
    return mix;
}

LbRandResult lb_rand(int m, int g, const LbRandOptions& opts) {
    GameTree tree = build_tree(m, g, opts.merge, opts.node_budget);
    SequenceFormLP lp = build_lp(tree, BuildOptions{opts.all_instances});
    DualProgram program = to_dual(lp);
    LPSolution sol = solve_exact(program, opts.simplex);
    if (sol.status == lp::Status::BudgetExceeded) throw BudgetExceeded("simplex pivot budget", sol.pivots);
    if (sol.status != lp::Status::Optimal)
        throw std::logic_error("sequence-form program is " + lp::to_string(sol.status));
    LbRandResult r;
    r.value = sol.u;
    r.algorithm = extract_behavioral(sol.x, lp);
    r.adversary = mix_from_solution(sol, lp);
    r.variables = lp.num_x;
    r.rows = lp.num_rows();
    r.columns = lp.num_y();
    r.pivots = sol.pivots;
    return r;
}

DotAnnotations strategy_annotations(const GameTree& tree, const BehavioralStrategy& strategy) {
    DotAnnotations out;
    std::set<std::size_t> done;
    std::vector<ItemSize> items;
    std::vector<int> decisions;
    std::function<void(std::size_t)> walk = [&](std::size_t id) {
        const TreeNode& n = tree.node(id);
        if (n.kind == NodeKind::Leaf) return;
        if (n.kind == NodeKind::Adversary) {
            for (const auto& e : n.children) {
                items.push_back(e.label);
                walk(e.child);
                items.pop_back();
            }
            return;
        }
        if (!done.insert(id).second) return;
        const bool canon = strategy.keying == StrategyKeying::Canonical;
        std::string key = canon ? canonical_key(items, n.loads) : history_key(items, decisions);
        auto it = strategy.table.find(key);
        // rank of each bin in the canonical (decreasing load) order
        std::vector<std::size_t> rank(n.loads.size());
        std::vector<std::size_t> order(n.loads.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return n.loads[a] > n.loads[b]; });
        for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
        for (std::size_t k = 0; k < n.children.size(); ++k) {
            const Edge& e = n.children[k];
            std::size_t slot = static_cast<std::size_t>(e.label - 1);
            if (canon && tree.bin_stretching && slot < rank.size()) slot = rank[slot];
            if (it != strategy.table.end() && slot < it->second.size())
                out.edge_labels[{id, k}] = it->second[slot].to_string();
            else
                out.edge_labels[{id, k}] = "uniform";
            decisions.push_back(e.label);
            walk(e.child);
            decisions.pop_back();
        }
    };
    walk(tree.root);
    return out;
}

}  // namespace obs
