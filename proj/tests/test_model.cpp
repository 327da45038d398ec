#include <doctest.h>

#include <random>

#include "obs/error.hpp"
#include "obs/model.hpp"
#include "oracle.hpp"

using namespace obs;

namespace {

ItemMultiset ms(int g, std::vector<int> items) { return ItemMultiset::from_items(g, items); }

}  // namespace

TEST_CASE("rational basics") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6).to_fraction() == "-1/2");
    CHECK(Rational(7, 6).to_fraction() == "7/6");
    CHECK(Rational(2).to_fraction() == "2/1");
    CHECK(Rational(2).to_string() == "2");
    CHECK(Rational::parse("14/12") == Rational(7, 6));
    CHECK(Rational::parse("-3") == Rational(-3));
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/2x"), std::invalid_argument);
    CHECK(Rational(-12, 25).to_decimal(2) == "-0.48");
    CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("payoff") {
    CHECK(payoff({4, 1}, 3) == Rational(4, 3));
    CHECK(payoff({0, 0}, 3) == Rational(0));
    CHECK(payoff({2, 2, 3}, 4) == Rational(3, 4));
}

TEST_CASE("packs examples") {
    CHECK(packs(ms(3, {1, 1, 3}), 2, 3));
    CHECK(packs(ms(3, {1, 1, 2, 2}), 2, 3));
    CHECK_FALSE(packs(ms(3, {2, 2, 2}), 2, 3));
    CHECK_FALSE(oracle::naive_packs({2, 2, 2}, 2, 3));
}

TEST_CASE("feasible_items examples") {
    CHECK(feasible_items(ItemMultiset(3), 2, 3) == std::vector<int>{1, 2, 3});
    // 1+1+3 leaves room 1 in total, so only a size-1 item still fits
    CHECK(feasible_items(ms(3, {1, 1, 3}), 2, 3) == std::vector<int>{1});
    CHECK(oracle::naive_feasible({1, 1, 3}, 2, 3) == std::vector<int>{1});
    CHECK(feasible_items(ms(3, {1, 1, 2}), 2, 3) == std::vector<int>{1, 2});
    CHECK(feasible_items(ms(2, {1, 1, 1, 1}), 2, 2).empty());
    CHECK_THROWS_AS(feasible_items(ms(3, {2, 2, 2}), 2, 3), InputError);
}

TEST_CASE("enumerate_instances examples") {
    auto seqs = [](const std::vector<Instance>& v) {
        std::vector<std::vector<int>> out;
        for (const auto& i : v) out.push_back(i.items);
        return out;
    };
    CHECK(seqs(enumerate_instances(2, 1, true)) == std::vector<std::vector<int>>{{1, 1}});
    auto two = seqs(enumerate_instances(2, 2, true));
    CHECK(two.size() == 5);
    CHECK(std::count(two.begin(), two.end(), std::vector<int>{2, 2}) == 1);
    CHECK(std::count(two.begin(), two.end(), std::vector<int>{1, 1, 1, 1}) == 1);
    CHECK(std::count(two.begin(), two.end(), std::vector<int>{1, 2, 1}) == 1);
    CHECK(seqs(enumerate_instances(1, 2, true)) == std::vector<std::vector<int>>{{1, 1}, {2}});
}

TEST_CASE("canonical") {
    CHECK(canonical({1, 4}) == LoadVector{4, 1});
    CHECK(canonical({0, 0}) == LoadVector{0, 0});
    CHECK(canonical({2, 3, 2}) == LoadVector{3, 2, 2});
}

TEST_CASE("dimensions are validated") {
    CHECK_THROWS_AS(check_dimensions(0, 3), InputError);
    CHECK_THROWS_AS(check_dimensions(2, 0), InputError);
    CHECK_NOTHROW(check_dimensions(1, 1));
}

TEST_CASE("packs agrees with exhaustive assignment") {
    for (int m = 1; m <= 3; ++m)
        for (int g = 1; g <= 4; ++g) {
            PackingOracle cached(m, g);
            // every multiset of total weight <= 12
            std::vector<int> cur;
            std::function<void(int, int)> rec = [&](int min_size, int weight) {
                bool want = oracle::naive_packs(cur, m, g);
                auto set = ms(g, cur);
                CHECK_MESSAGE(packs(set, m, g) == want, "m=" << m << " g=" << g << " weight=" << weight);
                CHECK(cached.packs(set) == want);
                for (int s = min_size; s <= g && weight + s <= 12; ++s) {
                    cur.push_back(s);
                    rec(s, weight + s);
                    cur.pop_back();
                }
            };
            rec(1, 0);
        }
}

TEST_CASE("packing is monotone under sub-multisets") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        int m = 1 + static_cast<int>(rng() % 3), g = 1 + static_cast<int>(rng() % 5);
        std::vector<int> items;
        int n = static_cast<int>(rng() % 9);
        for (int k = 0; k < n; ++k) items.push_back(1 + static_cast<int>(rng() % static_cast<unsigned>(g)));
        if (!packs(ms(g, items), m, g)) continue;
        std::vector<int> sub;
        for (int s : items)
            if (rng() % 2) sub.push_back(s);
        CHECK(packs(ms(g, sub), m, g));
    }
}

TEST_CASE("instances match the naive enumeration and are prefix closed") {
    for (auto [m, g] : {std::pair{1, 3}, {2, 2}, {2, 3}, {3, 2}}) {
        for (bool maximal : {true, false}) {
            std::vector<std::vector<int>> got;
            for (const auto& i : enumerate_instances(m, g, maximal)) got.push_back(i.items);
            CHECK(got == oracle::naive_instances(m, g, maximal));
        }
        auto all = enumerate_instances(m, g, false);
        std::set<std::vector<int>> listed;
        for (const auto& i : all) listed.insert(i.items);
        for (const auto& i : all)
            for (std::size_t k = 1; k < i.items.size(); ++k)
                CHECK(listed.count(std::vector<int>(i.items.begin(), i.items.begin() + static_cast<long>(k))));
    }
}

TEST_CASE("payoff bounds on reachable loads") {
    for (const auto& inst : enumerate_instances(2, 3, true)) {
        LoadVector loads{0, 0};
        int total = 0;
        for (std::size_t k = 0; k < inst.items.size(); ++k) {
            loads[k % 2] += inst.items[k];
            total += inst.items[k];
        }
        CHECK(Rational(total, 2 * 3) <= payoff(loads, 3));
        CHECK(payoff(loads, 3) <= Rational(2));
    }
}

TEST_CASE("multiset graph mirrors feasible_items") {
    MultisetGraph graph(2, 3);
    for (std::size_t id = 0; id < graph.size(); ++id) {
        auto i = static_cast<std::int32_t>(id);
        CHECK(graph.feasible(i) == feasible_items(graph.multiset(i), 2, 3));
        for (int s : graph.feasible(i)) {
            auto next = graph.multiset(i);
            next.add(s);
            CHECK(graph.next(i, s) == graph.find(next));
        }
    }
}
