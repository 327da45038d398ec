#include "obs/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

#include "obs/error.hpp"

namespace obs {

ItemMultiset ItemMultiset::from_items(int g, std::span<const ItemSize> items) {
    ItemMultiset ms(g);
    for (ItemSize s : items) ms.add(s);
    return ms;
}

void ItemMultiset::add(ItemSize s, int n) {
    if (s < 1 || s > g()) throw InputError("item size " + std::to_string(s) + " outside 1.." + std::to_string(g()));
    counts_[static_cast<std::size_t>(s)] += n;
}

void ItemMultiset::remove(ItemSize s, int n) {
    auto& c = counts_.at(static_cast<std::size_t>(s));
    if (c < n) throw InputError("removing absent item " + std::to_string(s));
    c -= n;
}

long ItemMultiset::weight() const {
    long w = 0;
    for (std::size_t s = 1; s < counts_.size(); ++s) w += static_cast<long>(s) * counts_[s];
    return w;
}

int ItemMultiset::size() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }

bool ItemMultiset::contains(const ItemMultiset& other) const {
    if (other.g() != g()) return false;
    for (std::size_t s = 1; s < counts_.size(); ++s)
        if (other.counts_[s] > counts_[s]) return false;
    return true;
}

std::vector<ItemSize> ItemMultiset::items_descending() const {
    std::vector<ItemSize> out;
    for (int s = g(); s >= 1; --s)
        for (int k = 0; k < counts_[static_cast<std::size_t>(s)]; ++k) out.push_back(s);
    return out;
}

std::string ItemMultiset::key() const {
    std::string k;
    k.reserve(counts_.size() * 2);
    for (std::size_t s = 1; s < counts_.size(); ++s) {
        k += std::to_string(counts_[s]);
        k += ',';
    }
    return k;
}

std::string to_string(const LoadVector& loads) {
    std::string s = "(";
    for (std::size_t i = 0; i < loads.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(loads[i]);
    }
    return s + ")";
}

Rational payoff(const LoadVector& loads, int g) {
    if (g < 1) throw InputError("granularity must be >= 1");
    int mx = loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end());
    return Rational(mx, g);
}

LoadVector canonical(LoadVector loads) {
    std::sort(loads.begin(), loads.end(), std::greater<>());
    return loads;
}

void check_dimensions(int m, int g) {
    if (m < 1) throw InputError("bin count m must be >= 1");
    if (g < 1) throw InputError("granularity g must be >= 1");
}

bool packs(const ItemMultiset& items, int m, int g) {
    check_dimensions(m, g);
    if (items.g() > g) {
        for (int s = g + 1; s <= items.g(); ++s)
            if (items.count(s) > 0) return false;
    }
    if (items.weight() > static_cast<long>(m) * g) return false;
    std::vector<ItemSize> order = items.items_descending();
    if (order.empty()) return true;
    if (order.front() > g) return false;

    // Residual capacities, kept sorted descending; memo on (caps, next index).
    std::unordered_map<std::string, bool> memo;
    std::vector<int> caps(static_cast<std::size_t>(m), g);
    std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
        if (i == order.size()) return true;
        std::string key(reinterpret_cast<const char*>(caps.data()), caps.size() * sizeof(int));
        key.append(reinterpret_cast<const char*>(&i), sizeof(i));
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        bool ok = false;
        int last = -1;
        for (std::size_t b = 0; b < caps.size() && !ok; ++b) {
            if (caps[b] < order[i] || caps[b] == last) continue;
            last = caps[b];
            std::vector<int> saved = caps;
            caps[b] -= order[i];
            std::sort(caps.begin(), caps.end(), std::greater<>());
            ok = place(i + 1);
            caps = std::move(saved);
        }
        memo.emplace(std::move(key), ok);
        return ok;
    };
    return place(0);
}

std::vector<ItemSize> feasible_items(const ItemMultiset& sent, int m, int g) {
    if (!packs(sent, m, g)) throw InputError("sent multiset does not pack into m bins");
    std::vector<ItemSize> out;
    ItemMultiset next = sent.g() == g ? sent : ItemMultiset(g);
    if (sent.g() != g)
        for (int s = 1; s <= std::min(g, sent.g()); ++s) next.add(s, sent.count(s));
    for (ItemSize s = 1; s <= g; ++s) {
        next.add(s);
        if (packs(next, m, g)) out.push_back(s);
        next.remove(s);
    }
    return out;
}

std::vector<Instance> enumerate_instances(int m, int g, bool maximal_only) {
    check_dimensions(m, g);
    PackingOracle oracle(m, g);
    std::vector<Instance> out;
    std::vector<ItemSize> seq;
    ItemMultiset sent(g);
    std::function<void()> walk = [&] {
        auto next = oracle.feasible_items(sent);
        if (!seq.empty() && (!maximal_only || next.empty())) out.push_back(Instance{seq, m, g});
        for (ItemSize s : next) {
            seq.push_back(s);
            sent.add(s);
            walk();
            sent.remove(s);
            seq.pop_back();
        }
    };
    walk();
    return out;
}

PackingOracle::PackingOracle(int m, int g) : m_(m), g_(g) { check_dimensions(m, g); }

bool PackingOracle::packs(const ItemMultiset& items) const {
    std::string key = items.key();
    {
        std::lock_guard lock(mu_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    bool v = obs::packs(items, m_, g_);
    std::lock_guard lock(mu_);
    cache_.emplace(std::move(key), v);
    return v;
}

std::vector<ItemSize> PackingOracle::feasible_items(const ItemMultiset& sent) const {
    if (!packs(sent)) throw InputError("sent multiset does not pack into m bins");
    std::vector<ItemSize> out;
    ItemMultiset next = sent;
    for (ItemSize s = 1; s <= g_; ++s) {
        next.add(s);
        if (packs(next)) out.push_back(s);
        next.remove(s);
    }
    return out;
}

MultisetGraph::MultisetGraph(int m, int g, std::uint64_t budget) : m_(m), g_(g) {
    check_dimensions(m, g);
    nodes_.push_back(Node{ItemMultiset(g), 0, {}, {}});
    index_.emplace(nodes_[0].items.key(), 0);
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        nodes_[id].next.assign(static_cast<std::size_t>(g) + 1, kNone);
        for (ItemSize s = 1; s <= g; ++s) {
            ItemMultiset child = nodes_[id].items;
            child.add(s);
            std::string key = child.key();
            std::int32_t cid = kNone;
            if (auto it = index_.find(key); it != index_.end()) {
                cid = it->second;
            } else if (obs::packs(child, m, g)) {
                if (nodes_.size() >= budget) throw BudgetExceeded("multiset graph", nodes_.size());
                cid = static_cast<std::int32_t>(nodes_.size());
                long w = nodes_[id].weight + s;
                nodes_.push_back(Node{std::move(child), w, {}, {}});
                index_.emplace(std::move(key), cid);
            }
            nodes_[id].next[static_cast<std::size_t>(s)] = cid;
            if (cid != kNone) nodes_[id].feasible.push_back(s);
        }
    }
}

std::int32_t MultisetGraph::find(const ItemMultiset& items) const {
    auto it = index_.find(items.key());
    return it == index_.end() ? kNone : it->second;
}

}  // namespace obs
