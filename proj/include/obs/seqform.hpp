#pragma once

#include <string>
#include <vector>

#include "obs/game_tree.hpp"
#include "obs/lp.hpp"
#include "obs/rational.hpp"

namespace obs {

struct Triplet {
    std::size_t row;
    std::size_t col;
    Rational value;
};

// Algorithm information set: the observed history when the algorithm is
// about to place `history.back()`. In a merged tree histories that reach the
// same node with equal item sequences share one set.
struct InfoSet {
    std::vector<ItemSize> history;  // adversary labels received so far
    std::size_t node = 0;           // algorithm node of the tree
    std::vector<std::size_t> parents;  // x variables leading here (empty for root sets)
    std::vector<std::size_t> actions;  // x variables of this set
    LoadVector loads;                  // loads at the node
    std::vector<int> decisions;        // own earlier moves; unmerged trees only
};

struct SeqVar {
    std::size_t info_set = 0;
    int bin = 0;  // edge label (1..m)
    std::size_t child = 0;
};

struct SequenceFormLP {
    std::size_t num_x = 0;
    std::vector<Triplet> E;  // rows = info sets, cols = x
    std::vector<Rational> e;
    std::vector<Triplet> C;  // rows = x, cols = y
    std::vector<InfoSet> info_sets;
    std::vector<SeqVar> vars;
    std::vector<std::vector<ItemSize>> instances;  // y columns
    int m = 0;
    int g = 0;
    bool merged = false;
    bool bin_stretching = true;

    std::size_t num_rows() const { return info_sets.size(); }
    std::size_t num_y() const { return instances.size(); }
};

struct BuildOptions {
    bool all_instances = false;  // also add non-maximal instances as columns
};

SequenceFormLP build_lp(const GameTree& tree, const BuildOptions& opts = {});

// min u  s.t.  C^T x - u <= 0 (one row per y),  E x = e,  x >= 0,  u free.
// Variable 0 is u, variable 1 + j is x_j. Inequality rows come first.
struct DualProgram {
    lp::LinearProgram program;
    std::size_t num_x = 0;
    std::size_t num_y = 0;
};

DualProgram to_dual(const SequenceFormLP& lp);

// Structural checks on E, e and C. Returns the problems found.
std::vector<std::string> audit_lp(const SequenceFormLP& lp);

std::vector<std::vector<Rational>> dense(const std::vector<Triplet>& t, std::size_t rows, std::size_t cols);

// JSON dump: {"variables", "E", "e", "C", "instances", "info_sets"}.
std::string dump_lp_json(const SequenceFormLP& lp);

}  // namespace obs
