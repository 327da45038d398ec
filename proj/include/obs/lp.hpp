#pragma once

// Exact rational simplex.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "obs/rational.hpp"

namespace obs::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Row {
    std::vector<std::pair<std::size_t, Rational>> coeffs;
    Sense sense = Sense::Equal;
    Rational rhs;
};

// minimize objective . z subject to rows; z_j >= 0 unless free[j].
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<Rational> objective;
    std::vector<bool> free;
    std::vector<Row> rows;
};

enum class Status { Optimal, Infeasible, Unbounded, BudgetExceeded };

std::string to_string(Status s);

struct SimplexOptions {
    std::uint64_t pivot_budget = 10'000'000;
    // Consecutive degenerate pivots tolerated under the steepest-coefficient
    // rule before switching to Bland's rule.
    int degenerate_streak = 50;
    // Return the lexicographically largest optimal point over the non-free
    // variables (in variable order) instead of whichever optimal vertex the
    // pivoting happens to reach. Requires the optimal face to be bounded in
    // those variables.
    bool lexicographic = true;
};

struct SimplexResult {
    Status status = Status::Infeasible;
    Rational value;
    std::vector<Rational> primal;
    // One multiplier per row, sign convention: objective = sum duals * rhs,
    // <= rows have duals <= 0, >= rows have duals >= 0.
    std::vector<Rational> duals;
    std::uint64_t pivots = 0;
};

SimplexResult solve(const LinearProgram& program, const SimplexOptions& opts = {});

}  // namespace obs::lp
