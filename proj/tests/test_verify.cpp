#include <doctest.h>

#include <random>

#include "obs/certificate.hpp"
#include "obs/error.hpp"
#include "obs/solver.hpp"
#include "obs/verify.hpp"
#include "oracle.hpp"

using namespace obs;

namespace {

AdversaryMix point(int m, int g, std::vector<int> seq) {
    return AdversaryMix{m, g, {{std::move(seq), Rational(1)}}};
}

BehavioralStrategy fixed_bin(int m, int g, int bin) {
    // every reachable canonical set puts the item on `bin`
    BehavioralStrategy s{m, g, StrategyKeying::History, {}};
    for (const auto& inst : enumerate_instances(m, g, false)) {
        std::vector<int> items = inst.items;
        std::vector<int> decisions(items.size() - 1, bin);
        std::vector<Rational> d(static_cast<std::size_t>(m), Rational(0));
        d[static_cast<std::size_t>(bin - 1)] = Rational(1);
        s.table[history_key(items, decisions)] = d;
    }
    return s;
}

// Random strategy over canonical keys of every reachable set.
BehavioralStrategy random_strategy(int m, int g, std::mt19937& rng) {
    BehavioralStrategy s{m, g, StrategyKeying::Canonical, {}};
    std::function<void(std::vector<int>&, LoadVector)> rec = [&](std::vector<int>& items, LoadVector loads) {
        for (int item : feasible_items(ItemMultiset::from_items(g, items), m, g)) {
            items.push_back(item);
            auto key = canonical_key(items, loads);
            if (!s.table.count(key)) {
                std::vector<long> w;
                long total = 0;
                for (int b = 0; b < m; ++b) {
                    w.push_back(static_cast<long>(rng() % 3));
                    total += w.back();
                }
                if (total == 0) w[0] = total = 1;
                std::vector<Rational> d;
                for (long x : w) d.emplace_back(x, total);
                s.table[key] = d;
            }
            for (int b = 0; b < m; ++b) {
                LoadVector next = loads;
                next[static_cast<std::size_t>(b)] += item;
                rec(items, canonical(next));
            }
            items.pop_back();
        }
    };
    std::vector<int> items;
    rec(items, LoadVector(static_cast<std::size_t>(m), 0));
    return s;
}

}  // namespace

TEST_CASE("best response examples") {
    CHECK(best_response_value(point(2, 1, {1, 1}), 2, 1) == Rational(1));
    CHECK(best_response_value(point(1, 2, {1, 1}), 1, 2) == Rational(1));
    AdversaryMix orders{2, 2, {{{1, 1, 2}, Rational(1, 3)}, {{1, 2, 1}, Rational(1, 3)}, {{2, 1, 1}, Rational(1, 3)}}};
    Rational v = best_response_value(orders, 2, 2);
    CHECK(v == oracle::enumerate_best_response(orders.support, 2, 2));
    CHECK_THROWS_AS(best_response_value(AdversaryMix{2, 2, {}}, 2, 2), InputError);
}

TEST_CASE("best response matches placement enumeration on random mixtures") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        int m = 1 + static_cast<int>(rng() % 2), g = 1 + static_cast<int>(rng() % 3);
        auto all = enumerate_instances(m, g, false);
        std::vector<std::pair<std::vector<int>, long>> picked;
        long total = 0;
        for (const auto& i : all)
            if (rng() % 3 == 0 && picked.size() < 4) {
                picked.emplace_back(i.items, 1 + static_cast<long>(rng() % 4));
                total += picked.back().second;
            }
        if (picked.empty()) continue;
        AdversaryMix mix{m, g, {}};
        for (auto& [seq, w] : picked) mix.support.emplace_back(seq, Rational(w, total));
        CHECK(best_response_value(mix, m, g) == oracle::enumerate_best_response(mix.support, m, g));
    }
}

TEST_CASE("worst case examples") {
    CHECK(worst_case_value(fixed_bin(2, 1, 1), 2, 1) == Rational(2));
    BehavioralStrategy uniform{2, 1, StrategyKeying::Canonical, {}};
    WorstCaseReport rep;
    CHECK(worst_case_value(uniform, 2, 1, &rep) == Rational(3, 2));
    CHECK(rep.missing_sets.size() == 2);
    BehavioralStrategy bad{2, 1, StrategyKeying::Canonical, {{"i:1|l:0,0", {Rational(1, 2), Rational(1, 3)}}}};
    CHECK_THROWS_AS(worst_case_value(bad, 2, 1), InputError);
    BehavioralStrategy neg{2, 1, StrategyKeying::Canonical, {{"i:1|l:0,0", {Rational(3, 2), Rational(-1, 2)}}}};
    CHECK_THROWS_AS(worst_case_value(neg, 2, 1), InputError);
}

TEST_CASE("duality triangle on small games") {
    for (int g = 1; g <= 3; ++g)
        for (bool merge : {true, false}) {
            LbRandOptions o;
            o.merge = merge;
            auto r = lb_rand(2, g, o);
            CHECK(worst_case_value(r.algorithm, 2, g) == r.value);
            CHECK(best_response_value(r.adversary, 2, g) == r.value);
        }
    auto tree = matching_pennies_fixture();
    auto lp = build_lp(tree);
    auto sol = solve_exact(to_dual(lp));
    CHECK(worst_case_on_tree(tree, extract_behavioral(sol.x, lp)) == sol.u);
    CHECK(best_response_on_tree(tree, mix_from_solution(sol, lp)) == sol.u);
}

TEST_CASE("no strategy beats the game value") {
    std::mt19937 rng(13);
    for (auto [m, g] : {std::pair{2, 2}, {2, 3}}) {
        Rational v = lb_rand(m, g).value;
        for (int k = 0; k < 20; ++k) CHECK(worst_case_value(random_strategy(m, g, rng), m, g) >= v);
    }
}

TEST_CASE("lower bound certificates") {
    auto r = lb_rand(2, 3);
    REQUIRE(r.value == Rational(7, 6));
    LowerBoundCertificate cert{2, 3, r.value, r.adversary};
    CHECK(verify_lower_cert(cert).ok);

    auto perturbed = cert;
    perturbed.adversary.support[0].second += Rational(1, 1000);
    auto rp = verify_lower_cert(perturbed);
    CHECK_FALSE(rp.ok);
    CHECK(rp.reason.find("sum") != std::string::npos);

    auto greedy = cert;
    greedy.value = Rational(6, 5);
    auto rg = verify_lower_cert(greedy);
    CHECK_FALSE(rg.ok);
    CHECK(rg.reason.find("shortfall") != std::string::npos);

    auto unpackable = cert;
    unpackable.adversary.support[0].first = {3, 3, 3};
    CHECK(verify_lower_cert(unpackable).reason.find("does not pack") != std::string::npos);

    auto outside = cert;
    outside.adversary.support[0].first = {4};
    CHECK_FALSE(verify_lower_cert(outside).ok);

    auto zero = cert;
    zero.adversary.support.emplace_back(std::vector<int>{3, 3}, Rational(0));
    CHECK(verify_lower_cert(zero).reason.find("not positive") != std::string::npos);
}

TEST_CASE("verifier is total on fuzzed certificates") {
    auto r = lb_rand(2, 2);
    std::string text = emit_certificate(LowerBoundCertificate{2, 2, r.value, r.adversary});
    std::mt19937 rng(17);
    const std::string alphabet = "{}[]\",:0123456789/-abcz ";
    for (int trial = 0; trial < 500; ++trial) {
        std::string t = text;
        int edits = 1 + static_cast<int>(rng() % 4);
        for (int k = 0; k < edits; ++k) {
            std::size_t pos = rng() % t.size();
            switch (rng() % 3) {
                case 0: t[pos] = alphabet[rng() % alphabet.size()]; break;
                case 1: t.erase(pos, 1); break;
                default: t.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
            }
        }
        VerifyReport rep;
        CHECK_NOTHROW(rep = verify_certificate_text(t));
        if (!rep.ok) CHECK_FALSE(rep.reason.empty());
    }
}
