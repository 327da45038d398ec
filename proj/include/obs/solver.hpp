#pragma once

#include <cstdint>

#include "obs/game_tree.hpp"
#include "obs/lp.hpp"
#include "obs/seqform.hpp"
#include "obs/strategy.hpp"

namespace obs {

struct LPSolution {
    lp::Status status = lp::Status::Infeasible;
    Rational u;
    std::vector<Rational> x;  // realization plan
    std::vector<Rational> y;  // adversary mixture over the y columns
    std::uint64_t pivots = 0;
};

LPSolution solve_exact(const DualProgram& program, const lp::SimplexOptions& opts = {});

// Child/parent realization ratios per information set; sets with zero
// realization weight get the uniform distribution over their moves.
BehavioralStrategy extract_behavioral(const std::vector<Rational>& x, const SequenceFormLP& lp);

struct LbRandOptions {
    bool merge = true;
    bool all_instances = false;
    std::uint64_t node_budget = 50'000'000;
    lp::SimplexOptions simplex;
};

struct LbRandResult {
    Rational value;
    BehavioralStrategy algorithm;
    AdversaryMix adversary;
    std::size_t variables = 0;
    std::size_t rows = 0;
    std::size_t columns = 0;
    std::uint64_t pivots = 0;
};

// Optimal randomized worst case of the discretized game. Throws
// BudgetExceeded on node or pivot budget overrun.
LbRandResult lb_rand(int m, int g, const LbRandOptions& opts = {});

AdversaryMix mix_from_solution(const LPSolution& sol, const SequenceFormLP& lp);

// Probabilities of the strategy on the tree's algorithm edges, for DOT
// export. Shared nodes of a merged tree show the first history reaching them.
DotAnnotations strategy_annotations(const GameTree& tree, const BehavioralStrategy& strategy);

}  // namespace obs
