#include "obs/game_tree.hpp"

#include <functional>
#include <optional>
#include <sstream>

#include "obs/error.hpp"

namespace obs {

namespace {

std::string merge_key(NodeKind kind, const LoadVector& loads, const ItemMultiset& sent) {
    return std::to_string(static_cast<int>(kind)) + "|" + to_string(loads) + "|" + sent.key();
}

class TreeBuilder {
public:
    TreeBuilder(int m, int g, bool merge, std::uint64_t budget)
        : oracle_(m, g), merge_(merge), budget_(budget) {
        tree_.m = m;
        tree_.g = g;
        tree_.merged = merge;
    }

    GameTree build() {
        tree_.root = adversary(LoadVector(static_cast<std::size_t>(tree_.m), 0), ItemMultiset(tree_.g));
        return std::move(tree_);
    }

private:
    std::optional<std::size_t> lookup(const std::string& key) const {
        if (!merge_) return std::nullopt;
        auto it = shared_.find(key);
        if (it == shared_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t add(TreeNode node, const std::string& key) {
        if (tree_.nodes.size() >= budget_) throw BudgetExceeded("game tree node budget", tree_.nodes.size());
        tree_.nodes.push_back(std::move(node));
        std::size_t id = tree_.nodes.size() - 1;
        if (merge_) shared_.emplace(key, id);
        return id;
    }

    std::size_t adversary(LoadVector loads, ItemMultiset sent) {
        if (merge_) loads = canonical(std::move(loads));
        std::string key = merge_key(NodeKind::Adversary, loads, sent);
        if (auto hit = lookup(key)) return *hit;
        auto items = oracle_.feasible_items(sent);
        if (items.empty()) {
            Rational v = payoff(loads, tree_.g);
            return add(TreeNode{NodeKind::Leaf, std::move(loads), std::move(sent), v, {}}, key);
        }
        std::size_t id = add(TreeNode{NodeKind::Adversary, loads, sent, Rational(0), {}}, key);
        for (ItemSize s : items) {
            ItemMultiset next = sent;
            next.add(s);
            std::size_t child = algorithm(loads, std::move(next), s);
            tree_.nodes[id].children.push_back(Edge{s, child, {}});
        }
        return id;
    }

    std::size_t algorithm(LoadVector loads, ItemMultiset sent, ItemSize item) {
        std::string key = merge_key(NodeKind::Algorithm, loads, sent);
        if (auto hit = lookup(key)) return *hit;
        std::size_t id = add(TreeNode{NodeKind::Algorithm, loads, sent, Rational(0), {}}, key);
        for (int b = 0; b < tree_.m; ++b) {
            LoadVector next = loads;
            next[static_cast<std::size_t>(b)] += item;
            std::size_t child = adversary(std::move(next), sent);
            tree_.nodes[id].children.push_back(Edge{b + 1, child, {}});
        }
        return id;
    }

    PackingOracle oracle_;
    bool merge_;
    std::uint64_t budget_;
    GameTree tree_;
    std::unordered_map<std::string, std::size_t> shared_;
};

}  // namespace

GameTree build_tree(int m, int g, bool merge, std::uint64_t node_budget) {
    check_dimensions(m, g);
    return TreeBuilder(m, g, merge, node_budget).build();
}

Rational minmax_det(const GameTree& tree) {
    std::vector<std::optional<Rational>> memo(tree.size());
    std::function<Rational(std::size_t)> value = [&](std::size_t i) -> Rational {
        if (memo[i]) return *memo[i];
        const TreeNode& n = tree.node(i);
        Rational v;
        if (n.kind == NodeKind::Leaf) {
            v = n.payoff;
        } else {
            bool first = true;
            for (const auto& e : n.children) {
                Rational c = value(e.child);
                if (first || (n.kind == NodeKind::Adversary ? c > v : c < v)) v = c;
                first = false;
            }
        }
        memo[i] = v;
        return v;
    };
    return value(tree.root);
}

namespace {

struct FixtureBuilder {
    GameTree tree;
    std::size_t add(NodeKind k, Rational payoff = Rational(0)) {
        tree.nodes.push_back(TreeNode{k, {}, {}, std::move(payoff), {}});
        return tree.nodes.size() - 1;
    }
    void link(std::size_t parent, int label, std::string name, std::size_t child) {
        tree.nodes[parent].children.push_back(Edge{label, child, std::move(name)});
    }
};

}  // namespace

GameTree ski_fixture() {
    // payoff[first day][weather day 1][second day][weather day 2], 0 = S, 1 = C
    const int payoff[2][2][2][2] = {
        {{{2, -2}, {0, 2}}, {{-1, -4}, {-3, -1}}},
        {{{0, -4}, {-2, 0}}, {{2, -1}, {0, 2}}},
    };
    const char* names[2] = {"S", "C"};
    FixtureBuilder b;
    b.tree.m = 2;
    b.tree.g = 1;
    b.tree.bin_stretching = false;
    std::size_t root = b.add(NodeKind::Algorithm);
    for (int d1 = 0; d1 < 2; ++d1) {
        std::size_t w1 = b.add(NodeKind::Adversary);
        b.link(root, d1 + 1, names[d1], w1);
        for (int s1 = 0; s1 < 2; ++s1) {
            std::size_t a2 = b.add(NodeKind::Algorithm);
            b.link(w1, s1 + 1, names[s1], a2);
            for (int d2 = 0; d2 < 2; ++d2) {
                std::size_t w2 = b.add(NodeKind::Adversary);
                b.link(a2, d2 + 1, names[d2], w2);
                for (int s2 = 0; s2 < 2; ++s2) {
                    std::size_t leaf = b.add(NodeKind::Leaf, Rational(payoff[d1][s1][d2][s2]));
                    b.link(w2, s2 + 1, names[s2], leaf);
                }
            }
        }
    }
    b.tree.root = root;
    return std::move(b.tree);
}

GameTree matching_pennies_fixture() {
    const char* names[2] = {"H", "T"};
    FixtureBuilder b;
    b.tree.m = 2;
    b.tree.g = 1;
    b.tree.bin_stretching = false;
    std::size_t root = b.add(NodeKind::Algorithm);
    for (int a = 0; a < 2; ++a) {
        std::size_t adv = b.add(NodeKind::Adversary);
        b.link(root, a + 1, names[a], adv);
        for (int s = 0; s < 2; ++s) b.link(adv, s + 1, names[s], b.add(NodeKind::Leaf, Rational(a == s ? 1 : 0)));
    }
    b.tree.root = root;
    return std::move(b.tree);
}

std::vector<std::string> audit_tree(const GameTree& tree) {
    std::vector<std::string> problems;
    std::optional<PackingOracle> oracle;
    if (tree.bin_stretching) oracle.emplace(tree.m, tree.g);
    if (tree.bin_stretching && tree.node(tree.root).kind != NodeKind::Adversary)
        problems.push_back("root is not an adversary node");
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const TreeNode& n = tree.node(i);
        const std::string where = "node " + std::to_string(i) + ": ";
        if (n.kind == NodeKind::Leaf) {
            if (!n.children.empty()) problems.push_back(where + "leaf with children");
            if (oracle && !oracle->feasible_items(n.sent).empty()) problems.push_back(where + "leaf at non-maximal multiset");
            continue;
        }
        if (n.children.empty()) problems.push_back(where + "inner node without children");
        for (const auto& e : n.children) {
            const TreeNode& c = tree.node(e.child);
            if (c.kind == n.kind) problems.push_back(where + "players do not alternate");
            if (tree.bin_stretching && n.kind == NodeKind::Algorithm && c.kind == NodeKind::Algorithm)
                problems.push_back(where + "algorithm child of algorithm node");
        }
        if (!oracle) continue;
        if (n.kind == NodeKind::Adversary) {
            auto items = oracle->feasible_items(n.sent);
            std::vector<ItemSize> labels;
            for (const auto& e : n.children) labels.push_back(e.label);
            if (labels != items) problems.push_back(where + "adversary children differ from feasible items");
        } else {
            if (static_cast<int>(n.children.size()) != tree.m) problems.push_back(where + "algorithm node without m bins");
            if (!oracle->packs(n.sent)) problems.push_back(where + "unpackable multiset");
        }
    }
    return problems;
}

namespace {

std::string loads_label(const LoadVector& loads, int g) {
    std::string s = "(";
    for (std::size_t i = 0; i < loads.size(); ++i) {
        if (i) s += ", ";
        s += Rational(loads[i], g).to_string();
    }
    return s + ")";
}

}  // namespace

std::string export_dot(const GameTree& tree, const DotAnnotations& annotations) {
    std::ostringstream out;
    out << "digraph game {\n  node [fontname=\"Helvetica\"];\n";
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const TreeNode& n = tree.node(i);
        out << "  n" << i << " [";
        switch (n.kind) {
            case NodeKind::Adversary:
                out << "shape=circle, label=\"" << (tree.bin_stretching ? loads_label(n.loads, tree.g) : "") << "\"";
                break;
            case NodeKind::Algorithm:
                out << "shape=diamond, label=\"" << (tree.bin_stretching ? loads_label(n.loads, tree.g) : "") << "\"";
                break;
            case NodeKind::Leaf:
                out << "shape=box, label=\"" << n.payoff.to_string() << "\"";
                break;
        }
        out << "];\n";
    }
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const TreeNode& n = tree.node(i);
        for (std::size_t k = 0; k < n.children.size(); ++k) {
            const Edge& e = n.children[k];
            std::string label;
            if (!e.name.empty())
                label = e.name;
            else if (n.kind == NodeKind::Adversary)
                label = "item " + Rational(e.label, tree.g).to_string();
            else
                label = "bin " + std::to_string(e.label);
            if (auto it = annotations.edge_labels.find({i, k}); it != annotations.edge_labels.end())
                label += " [" + it->second + "]";
            out << "  n" << i << " -> n" << e.child << " [label=\"" << label << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace obs
