#pragma once

// Exact evaluation of strategies and lower-bound certificates. Nothing here
// touches the LP code; evaluation works from the game rules directly.

#include <string>
#include <vector>

#include "obs/game_tree.hpp"
#include "obs/report.hpp"
#include "obs/strategy.hpp"

namespace obs {

// Expected payoff of the best deterministic algorithm against the mixture.
// Throws InputError on an empty or malformed mixture.
Rational best_response_value(const AdversaryMix& mix, int m, int g);

struct WorstCaseReport {
    std::size_t evaluated_instances = 0;
    std::vector<std::string> missing_sets;  // keys filled with the uniform distribution
};

// Largest expected payoff over instances (the adversary commits to the whole
// sequence in advance). Throws InputError on malformed distributions.
Rational worst_case_value(const BehavioralStrategy& strategy, int m, int g, WorstCaseReport* report = nullptr);

// The same two evaluations on an explicit tree, for games that are not bin
// stretching (the bundled fixtures). Instances are sequences of adversary
// edge labels; history-keyed strategies use algorithm edge labels as moves.
Rational best_response_on_tree(const GameTree& tree, const AdversaryMix& mix);
Rational worst_case_on_tree(const GameTree& tree, const BehavioralStrategy& strategy,
                            WorstCaseReport* report = nullptr);

struct LowerBoundCertificate {
    int m = 0;
    int g = 0;
    Rational value;
    AdversaryMix adversary;
};

VerifyReport verify_lower_cert(const LowerBoundCertificate& cert);

}  // namespace obs
