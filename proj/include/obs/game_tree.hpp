#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "obs/model.hpp"
#include "obs/rational.hpp"

namespace obs {

enum class NodeKind { Adversary, Algorithm, Leaf };

struct Edge {
    int label = 0;  // item size below adversary nodes, bin (1..m) below algorithm nodes
    std::size_t child = 0;
    std::string name;  // optional display name (fixtures)
};

struct TreeNode {
    NodeKind kind = NodeKind::Leaf;
    LoadVector loads;   // loads before the pending placement at algorithm nodes
    ItemMultiset sent;  // includes the pending item at algorithm nodes
    Rational payoff;    // leaves only
    std::vector<Edge> children;
};

// Finite two-player game tree. With `merged` set, nodes with equal
// (kind, canonical loads, items sent) are shared and the structure is a
// rooted DAG.
struct GameTree {
    int m = 0;
    int g = 0;
    bool merged = false;
    bool bin_stretching = true;  // false for the bundled fixture games
    std::vector<TreeNode> nodes;
    std::size_t root = 0;

    const TreeNode& node(std::size_t i) const { return nodes[i]; }
    std::size_t size() const { return nodes.size(); }
};

GameTree build_tree(int m, int g, bool merge, std::uint64_t node_budget = 50'000'000);

// Adversary maximizes, algorithm minimizes, leaves score their payoff.
Rational minmax_det(const GameTree& tree);

// Ski weekend example: the algorithm moves first each day, weather follows.
GameTree ski_fixture();
// Matching pennies: algorithm picks a side, adversary picks a side, payoff 1 on a match.
GameTree matching_pennies_fixture();

// Structural audit: alternation, adversary children equal to the feasible
// items, leaves exactly at maximal multisets. Returns the problems found.
std::vector<std::string> audit_tree(const GameTree& tree);

struct DotAnnotations {
    // Extra text on algorithm edges, keyed by (node index, child position).
    std::map<std::pair<std::size_t, std::size_t>, std::string> edge_labels;
};

std::string export_dot(const GameTree& tree, const DotAnnotations& annotations = {});

}  // namespace obs
