#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "obs/model.hpp"
#include "obs/rational.hpp"

namespace obs {

// Distribution of the oblivious adversary over item sequences.
struct AdversaryMix {
    int m = 0;
    int g = 0;
    std::vector<std::pair<std::vector<ItemSize>, Rational>> support;
};

// How information sets are named in a behavioral strategy.
//  Canonical: items received (pending one included) and canonical loads;
//             bins index the loads sorted in decreasing order.
//  History:   items received and the algorithm's own earlier bins.
enum class StrategyKeying { Canonical, History };

std::string to_string(StrategyKeying k);

std::string canonical_key(const std::vector<ItemSize>& items, const LoadVector& loads);
std::string history_key(const std::vector<ItemSize>& items, const std::vector<int>& decisions);

struct BehavioralStrategy {
    int m = 0;
    int g = 0;
    StrategyKeying keying = StrategyKeying::Canonical;
    // info set key -> probability of each bin 1..m (index 0 is bin 1)
    std::map<std::string, std::vector<Rational>> table;
};

}  // namespace obs
