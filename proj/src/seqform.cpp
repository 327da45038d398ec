#include "obs/seqform.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include <json.hpp>

#include "obs/error.hpp"

namespace obs {

namespace {

class Compiler {
public:
    Compiler(const GameTree& tree, const BuildOptions& opts) : tree_(tree), opts_(opts) {
        lp_.m = tree.m;
        lp_.g = tree.g;
        lp_.merged = tree.merged;
        lp_.bin_stretching = tree.bin_stretching;
    }

    SequenceFormLP run() {
        std::vector<ItemSize> history;
        visit(tree_.root, history, std::nullopt);
        std::vector<char> seen(tree_.size(), 0);
        for (const auto& s : lp_.info_sets) seen[s.node] = 1;
        for (std::size_t i = 0; i < tree_.size(); ++i)
            if (tree_.node(i).kind == NodeKind::Algorithm && !seen[i])
                throw InputError("algorithm node " + std::to_string(i) + " is unreachable");

        lp_.num_x = lp_.vars.size();
        lp_.e.assign(lp_.info_sets.size(), Rational(0));
        for (std::size_t r = 0; r < lp_.info_sets.size(); ++r) {
            const InfoSet& s = lp_.info_sets[r];
            for (std::size_t p : s.parents) lp_.E.push_back(Triplet{r, p, Rational(-1)});
            for (std::size_t a : s.actions) lp_.E.push_back(Triplet{r, a, Rational(1)});
            if (s.parents.empty()) lp_.e[r] = Rational(1);
        }
        return std::move(lp_);
    }

private:
    std::size_t instance(const std::vector<ItemSize>& history) {
        auto [it, inserted] = y_index_.emplace(history, lp_.instances.size());
        if (inserted) lp_.instances.push_back(history);
        return it->second;
    }

    void visit(std::size_t id, std::vector<ItemSize>& history, std::optional<std::size_t> parent) {
        const TreeNode& n = tree_.node(id);
        switch (n.kind) {
            case NodeKind::Leaf:
                if (!parent) throw InputError("leaf reached without an algorithm move");
                lp_.C.push_back(Triplet{*parent, instance(history), n.payoff});
                return;
            case NodeKind::Adversary:
                if (opts_.all_instances && parent && tree_.bin_stretching)
                    lp_.C.push_back(Triplet{*parent, instance(history), payoff(n.loads, tree_.g)});
                for (const auto& e : n.children) {
                    history.push_back(e.label);
                    visit(e.child, history, parent);
                    history.pop_back();
                }
                return;
            case NodeKind::Algorithm:
                break;
        }
        auto key = std::make_pair(history, id);
        if (auto it = sets_.find(key); it != sets_.end()) {
            if (parent) lp_.info_sets[it->second].parents.push_back(*parent);
            return;
        }
        std::size_t set = lp_.info_sets.size();
        sets_.emplace(key, set);
        InfoSet info{history, id, {}, {}, n.loads, {}};
        if (parent) {
            info.parents.push_back(*parent);
            if (!tree_.merged) {
                const SeqVar& pv = lp_.vars[*parent];
                info.decisions = lp_.info_sets[pv.info_set].decisions;
                info.decisions.push_back(pv.bin);
            }
        }
        lp_.info_sets.push_back(std::move(info));
        std::vector<std::size_t> used_children;
        for (const auto& e : n.children) {
            if (tree_.merged) {
                bool dup = false;
                for (std::size_t c : used_children) dup = dup || c == e.child;
                if (dup) continue;
                used_children.push_back(e.child);
            }
            std::size_t var = lp_.vars.size();
            lp_.vars.push_back(SeqVar{set, e.label, e.child});
            lp_.info_sets[set].actions.push_back(var);
            visit(e.child, history, var);
        }
    }

    const GameTree& tree_;
    BuildOptions opts_;
    SequenceFormLP lp_;
    std::map<std::vector<ItemSize>, std::size_t> y_index_;
    std::map<std::pair<std::vector<ItemSize>, std::size_t>, std::size_t> sets_;
};

}  // namespace

SequenceFormLP build_lp(const GameTree& tree, const BuildOptions& opts) {
    return Compiler(tree, opts).run();
}

DualProgram to_dual(const SequenceFormLP& lp) {
    DualProgram d;
    d.num_x = lp.num_x;
    d.num_y = lp.num_y();
    auto& p = d.program;
    p.num_vars = 1 + lp.num_x;
    p.objective.assign(p.num_vars, Rational(0));
    p.objective[0] = Rational(1);
    p.free.assign(p.num_vars, false);
    p.free[0] = true;
    p.rows.resize(lp.num_y() + lp.num_rows());
    for (std::size_t j = 0; j < lp.num_y(); ++j) {
        p.rows[j].sense = lp::Sense::LessEqual;
        p.rows[j].coeffs.emplace_back(0, Rational(-1));
    }
    for (const auto& t : lp.C) p.rows[t.col].coeffs.emplace_back(1 + t.row, t.value);
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
        p.rows[lp.num_y() + r].sense = lp::Sense::Equal;
        p.rows[lp.num_y() + r].rhs = lp.e[r];
    }
    for (const auto& t : lp.E) p.rows[lp.num_y() + t.row].coeffs.emplace_back(1 + t.col, t.value);
    return d;
}

std::vector<std::string> audit_lp(const SequenceFormLP& lp) {
    std::vector<std::string> problems;
    std::vector<int> plus(lp.num_x, 0);
    for (const auto& t : lp.E) {
        const std::string where = "E[" + std::to_string(t.row) + "][" + std::to_string(t.col) + "]: ";
        if (t.value == Rational(1)) {
            ++plus[t.col];
            if (lp.vars[t.col].info_set != t.row) problems.push_back(where + "+1 outside the owning set");
        } else if (t.value == Rational(-1)) {
            const InfoSet& s = lp.info_sets[t.row];
            const InfoSet& owner = lp.info_sets[lp.vars[t.col].info_set];
            bool extends = s.history.size() == owner.history.size() + 1 &&
                           std::equal(owner.history.begin(), owner.history.end(), s.history.begin());
            if (!extends) problems.push_back(where + "-1 in a set that does not follow the move");
        } else {
            problems.push_back(where + "entry is not +1 or -1");
        }
    }
    for (std::size_t j = 0; j < lp.num_x; ++j)
        if (plus[j] != 1) problems.push_back("column " + std::to_string(j) + " has " + std::to_string(plus[j]) + " +1 entries");
    std::size_t roots = 0;
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
        bool root = lp.info_sets[r].parents.empty();
        roots += root ? 1 : 0;
        if (lp.e[r] != Rational(root ? 1 : 0)) problems.push_back("e[" + std::to_string(r) + "] mismatch");
    }
    Rational sum(0);
    for (const auto& v : lp.e) sum += v;
    if (sum != Rational(static_cast<long>(roots))) problems.push_back("sum of e differs from the root set count");
    std::map<std::pair<std::size_t, std::size_t>, int> seen;
    for (const auto& t : lp.C)
        if (++seen[{t.row, t.col}] > 1)
            problems.push_back("C[" + std::to_string(t.row) + "][" + std::to_string(t.col) + "] set twice");
    return problems;
}

std::vector<std::vector<Rational>> dense(const std::vector<Triplet>& t, std::size_t rows, std::size_t cols) {
    std::vector<std::vector<Rational>> d(rows, std::vector<Rational>(cols, Rational(0)));
    for (const auto& x : t) d.at(x.row).at(x.col) += x.value;
    return d;
}

std::string dump_lp_json(const SequenceFormLP& lp) {
    using nlohmann::json;
    auto triplets = [](const std::vector<Triplet>& ts) {
        json a = json::array();
        for (const auto& t : ts) a.push_back(json::array({t.row, t.col, t.value.to_fraction()}));
        return a;
    };
    json j;
    j["m"] = lp.m;
    j["g"] = lp.g;
    j["merged"] = lp.merged;
    json vars = json::array();
    for (const auto& v : lp.vars) vars.push_back({{"info_set", v.info_set}, {"bin", v.bin}});
    j["variables"] = vars;
    json sets = json::array();
    for (const auto& s : lp.info_sets) sets.push_back({{"history", s.history}, {"parents", s.parents}, {"actions", s.actions}});
    j["info_sets"] = sets;
    j["E"] = triplets(lp.E);
    json e = json::array();
    for (const auto& v : lp.e) e.push_back(v.to_fraction());
    j["e"] = e;
    j["C"] = triplets(lp.C);
    j["instances"] = lp.instances;
    return j.dump(1) + "\n";
}

}  // namespace obs
