#include "obs/strategy.hpp"

namespace obs {

namespace {

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

}  // namespace

std::string to_string(StrategyKeying k) { return k == StrategyKeying::Canonical ? "canonical" : "history"; }

std::string canonical_key(const std::vector<ItemSize>& items, const LoadVector& loads) {
    return "i:" + join(items) + "|l:" + join(canonical(loads));
}

std::string history_key(const std::vector<ItemSize>& items, const std::vector<int>& decisions) {
    return "i:" + join(items) + "|d:" + join(decisions);
}

}  // namespace obs
