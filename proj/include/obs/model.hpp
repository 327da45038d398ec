#pragma once

// Discretized online bin stretching model: items are integers 1..g standing
// for sizes s/g, bins have capacity g, and an instance is any item sequence
// whose multiset packs into m bins.

#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "obs/rational.hpp"

namespace obs {

using ItemSize = int;
using LoadVector = std::vector<int>;

// Multiset of item sizes in 1..g, stored as counts indexed by size.
class ItemMultiset {
public:
    ItemMultiset() = default;
    explicit ItemMultiset(int g) : counts_(static_cast<std::size_t>(g) + 1, 0) {}
    static ItemMultiset from_items(int g, std::span<const ItemSize> items);

    int g() const { return static_cast<int>(counts_.size()) - 1; }
    int count(ItemSize s) const { return counts_.at(static_cast<std::size_t>(s)); }
    void add(ItemSize s, int n = 1);
    void remove(ItemSize s, int n = 1);
    long weight() const;
    int size() const;
    bool empty() const { return size() == 0; }
    bool contains(const ItemMultiset& other) const;

    // Items sorted by decreasing size.
    std::vector<ItemSize> items_descending() const;
    // Counts for sizes 1..g.
    std::vector<int> counts() const { return {counts_.begin() + 1, counts_.end()}; }
    std::string key() const;

    friend bool operator==(const ItemMultiset&, const ItemMultiset&) = default;

private:
    std::vector<int> counts_;
};

struct Instance {
    std::vector<ItemSize> items;
    int m = 0;
    int g = 0;

    friend bool operator==(const Instance&, const Instance&) = default;
};

std::string to_string(const LoadVector& loads);

// max(loads)/g.
Rational payoff(const LoadVector& loads, int g);

LoadVector canonical(LoadVector loads);

// True iff the multiset splits into at most m groups of weight <= g.
bool packs(const ItemMultiset& items, int m, int g);

// {s : packs(sent + {s})}. Throws InputError if sent itself does not pack.
std::vector<ItemSize> feasible_items(const ItemMultiset& sent, int m, int g);

// All packable non-empty sequences in lexicographic order; with maximal_only
// only those no further item can extend.
std::vector<Instance> enumerate_instances(int m, int g, bool maximal_only);

void check_dimensions(int m, int g);

// Thread-safe cache in front of packs() for one (m, g). Insertion is
// set-once and idempotent, so concurrent callers observe identical answers.
class PackingOracle {
public:
    PackingOracle(int m, int g);

    int m() const { return m_; }
    int g() const { return g_; }
    bool packs(const ItemMultiset& items) const;
    std::vector<ItemSize> feasible_items(const ItemMultiset& sent) const;

private:
    int m_, g_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, bool> cache_;
};

// Every packable multiset for (m, g), interned and linked by "add one item".
// Built eagerly in breadth-first order so ids are deterministic.
class MultisetGraph {
public:
    static constexpr std::int32_t kNone = -1;

    MultisetGraph(int m, int g, std::uint64_t budget = 50'000'000);

    int m() const { return m_; }
    int g() const { return g_; }
    std::size_t size() const { return nodes_.size(); }
    std::int32_t root() const { return 0; }

    const ItemMultiset& multiset(std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)].items; }
    long weight(std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)].weight; }
    // Child id after adding item s, or kNone when the result does not pack.
    std::int32_t next(std::int32_t id, ItemSize s) const {
        return nodes_[static_cast<std::size_t>(id)].next[static_cast<std::size_t>(s)];
    }
    const std::vector<ItemSize>& feasible(std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)].feasible; }
    std::int32_t find(const ItemMultiset& items) const;

private:
    struct Node {
        ItemMultiset items;
        long weight = 0;
        std::vector<std::int32_t> next;
        std::vector<ItemSize> feasible;
    };

    int m_, g_;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, std::int32_t> index_;
};

}  // namespace obs
