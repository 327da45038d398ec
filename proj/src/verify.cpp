#include "obs/verify.hpp"

#include <functional>
#include <map>
#include <set>

#include "obs/error.hpp"

namespace obs {

namespace {

struct Trie {
    struct Node {
        std::map<int, std::size_t> next;
        Rational end_mass;
    };
    std::vector<Node> nodes{Node{}};

    void insert(const std::vector<int>& seq, const Rational& p) {
        std::size_t cur = 0;
        for (int s : seq) {
            auto it = nodes[cur].next.find(s);
            if (it == nodes[cur].next.end()) {
                nodes.push_back(Node{});
                it = nodes[cur].next.emplace(s, nodes.size() - 1).first;
            }
            cur = it->second;
        }
        nodes[cur].end_mass += p;
    }
};

// Structural checks shared by the evaluators and the certificate verifier.
// Returns an empty string when the mixture is well formed.
std::string mix_problem(const AdversaryMix& mix, const PackingOracle* oracle) {
    if (mix.support.empty()) return "empty support";
    Rational total(0);
    std::set<std::vector<ItemSize>> seen;
    for (std::size_t k = 0; k < mix.support.size(); ++k) {
        const auto& [seq, p] = mix.support[k];
        const std::string where = "adversary[" + std::to_string(k) + "]";
        if (p.sign() <= 0) return where + ": probability " + p.to_fraction() + " is not positive";
        if (seq.empty()) return where + ": empty instance";
        if (!seen.insert(seq).second) return where + ": duplicate instance";
        if (oracle) {
            for (ItemSize s : seq)
                if (s < 1 || s > oracle->g()) return where + ": item " + std::to_string(s) + " outside 1.." + std::to_string(oracle->g());
            if (!oracle->packs(ItemMultiset::from_items(oracle->g(), seq))) return where + ": instance does not pack";
        }
        total += p;
    }
    if (total != Rational(1)) return "probabilities sum to " + total.to_fraction() + ", not 1";
    return {};
}

void check_distribution(const std::string& key, const std::vector<Rational>& dist, std::size_t width) {
    if (dist.size() != width) throw InputError("strategy set " + key + ": expected " + std::to_string(width) + " entries");
    Rational total(0);
    for (const auto& p : dist) {
        if (p.sign() < 0) throw InputError("strategy set " + key + ": negative probability");
        total += p;
    }
    if (total != Rational(1)) throw InputError("strategy set " + key + ": probabilities sum to " + total.to_fraction());
}

const std::vector<Rational>& lookup(const BehavioralStrategy& strategy, const std::string& key, std::size_t width,
                                    std::vector<Rational>& uniform, WorstCaseReport* report) {
    auto it = strategy.table.find(key);
    if (it != strategy.table.end()) return it->second;
    if (report) report->missing_sets.push_back(key);
    uniform.assign(width, Rational(1, static_cast<long>(width)));
    return uniform;
}

}  // namespace

Rational best_response_value(const AdversaryMix& mix, int m, int g) {
    check_dimensions(m, g);
    PackingOracle oracle(m, g);
    if (auto problem = mix_problem(mix, &oracle); !problem.empty()) throw InputError(problem);
    Trie trie;
    for (const auto& [seq, p] : mix.support) trie.insert(seq, p);

    std::map<std::pair<std::size_t, LoadVector>, Rational> memo;
    std::function<Rational(std::size_t, const LoadVector&)> value = [&](std::size_t id, const LoadVector& loads) {
        auto key = std::make_pair(id, loads);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const Trie::Node& n = trie.nodes[id];
        Rational v = n.end_mass.is_zero() ? Rational(0) : n.end_mass * payoff(loads, g);
        for (const auto& [s, child] : n.next) {
            Rational best;
            bool first = true;
            for (std::size_t b = 0; b < loads.size(); ++b) {
                if (b > 0 && loads[b] == loads[b - 1]) continue;
                LoadVector next = loads;
                next[b] += s;
                Rational c = value(child, canonical(std::move(next)));
                if (first || c < best) best = c;
                first = false;
            }
            v += best;
        }
        memo.emplace(std::move(key), v);
        return v;
    };
    return value(0, LoadVector(static_cast<std::size_t>(m), 0));
}

Rational worst_case_value(const BehavioralStrategy& strategy, int m, int g, WorstCaseReport* report) {
    check_dimensions(m, g);
    for (const auto& [key, dist] : strategy.table) check_distribution(key, dist, static_cast<std::size_t>(m));
    const bool canonical_keys = strategy.keying == StrategyKeying::Canonical;
    PackingOracle oracle(m, g);

    // Distribution over what the algorithm has seen and done so far.
    struct State {
        LoadVector loads;
        std::vector<int> decisions;
        auto operator<=>(const State&) const = default;
    };
    using Dist = std::map<State, Rational>;
    std::vector<ItemSize> items;
    ItemMultiset sent(g);
    std::vector<Rational> uniform;

    std::function<Rational(const Dist&)> descend = [&](const Dist& dist) -> Rational {
        auto feasible = oracle.feasible_items(sent);
        if (feasible.empty()) {
            if (report) ++report->evaluated_instances;
            Rational v(0);
            for (const auto& [st, p] : dist) v += p * payoff(st.loads, g);
            return v;
        }
        Rational best;
        bool first = true;
        for (ItemSize s : feasible) {
            items.push_back(s);
            sent.add(s);
            Dist next;
            for (const auto& [st, p] : dist) {
                std::string key = canonical_keys ? canonical_key(items, st.loads) : history_key(items, st.decisions);
                const auto& probs = lookup(strategy, key, static_cast<std::size_t>(m), uniform, report);
                for (int b = 0; b < m; ++b) {
                    const Rational& q = probs[static_cast<std::size_t>(b)];
                    if (q.is_zero()) continue;
                    State ns = st;
                    ns.loads[static_cast<std::size_t>(b)] += s;
                    if (canonical_keys)
                        ns.loads = canonical(std::move(ns.loads));
                    else
                        ns.decisions.push_back(b + 1);
                    next[std::move(ns)] += p * q;
                }
            }
            Rational v = descend(next);
            if (first || v > best) best = v;
            first = false;
            sent.remove(s);
            items.pop_back();
        }
        return best;
    };
    Dist start;
    start[State{LoadVector(static_cast<std::size_t>(m), 0), {}}] = Rational(1);
    return descend(start);
}

Rational best_response_on_tree(const GameTree& tree, const AdversaryMix& mix) {
    if (auto problem = mix_problem(mix, nullptr); !problem.empty()) throw InputError(problem);
    Trie trie;
    for (const auto& [seq, p] : mix.support) trie.insert(seq, p);
    std::map<std::pair<std::size_t, std::size_t>, Rational> memo;
    std::function<Rational(std::size_t, std::size_t)> value = [&](std::size_t node, std::size_t t) -> Rational {
        auto key = std::make_pair(node, t);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const TreeNode& n = tree.node(node);
        const Trie::Node& tn = trie.nodes[t];
        Rational v(0);
        switch (n.kind) {
            case NodeKind::Leaf:
                if (!tn.next.empty()) throw InputError("instance continues past a leaf");
                v = tn.end_mass * n.payoff;
                break;
            case NodeKind::Algorithm: {
                bool first = true;
                for (const auto& e : n.children) {
                    Rational c = value(e.child, t);
                    if (first || c < v) v = c;
                    first = false;
                }
                break;
            }
            case NodeKind::Adversary:
                if (!tn.end_mass.is_zero()) {
                    if (!tree.bin_stretching) throw InputError("instance stops at an inner node");
                    v += tn.end_mass * payoff(n.loads, tree.g);
                }
                for (const auto& [label, child] : tn.next) {
                    const Edge* edge = nullptr;
                    for (const auto& e : n.children)
                        if (e.label == label) edge = &e;
                    if (!edge) throw InputError("instance uses unavailable move " + std::to_string(label));
                    v += value(edge->child, child);
                }
                break;
        }
        memo.emplace(key, v);
        return v;
    };
    return value(tree.root, 0);
}

Rational worst_case_on_tree(const GameTree& tree, const BehavioralStrategy& strategy, WorstCaseReport* report) {
    const bool canonical_keys = strategy.keying == StrategyKeying::Canonical;
    struct State {
        std::size_t node;
        std::vector<int> decisions;
        auto operator<=>(const State&) const = default;
    };
    using Dist = std::map<State, Rational>;
    std::vector<int> items;
    std::vector<Rational> uniform;

    // Resolve algorithm moves until every state waits on the adversary or is a leaf.
    auto settle = [&](Dist dist) {
        Dist out;
        while (!dist.empty()) {
            Dist pending;
            for (auto& [st, p] : dist) {
                const TreeNode& n = tree.node(st.node);
                if (n.kind != NodeKind::Algorithm) {
                    out[st] += p;
                    continue;
                }
                std::string key = canonical_keys ? canonical_key(items, n.loads) : history_key(items, st.decisions);
                std::size_t width = 0;
                for (const auto& e : n.children) width = std::max(width, static_cast<std::size_t>(e.label));
                const auto& probs = lookup(strategy, key, width, uniform, report);
                check_distribution(key, probs, width);
                for (const auto& e : n.children) {
                    const Rational& q = probs[static_cast<std::size_t>(e.label - 1)];
                    if (q.is_zero()) continue;
                    State ns{e.child, st.decisions};
                    ns.decisions.push_back(e.label);
                    pending[std::move(ns)] += p * q;
                }
            }
            dist = std::move(pending);
        }
        return out;
    };

    std::function<Rational(const Dist&)> descend = [&](const Dist& dist) -> Rational {
        Rational done(0);
        Dist live;
        std::set<int> labels;
        for (const auto& [st, p] : dist) {
            const TreeNode& n = tree.node(st.node);
            if (n.kind == NodeKind::Leaf) {
                done += p * n.payoff;
            } else {
                live.emplace(st, p);
                for (const auto& e : n.children) labels.insert(e.label);
            }
        }
        if (live.empty()) {
            if (report) ++report->evaluated_instances;
            return done;
        }
        Rational best;
        bool first = true;
        for (int label : labels) {
            Dist next;
            for (const auto& [st, p] : live) {
                const TreeNode& n = tree.node(st.node);
                const Edge* edge = nullptr;
                for (const auto& e : n.children)
                    if (e.label == label) edge = &e;
                if (!edge) throw InputError("adversary move " + std::to_string(label) + " not available in every state");
                next[State{edge->child, st.decisions}] += p;
            }
            items.push_back(label);
            Rational v = descend(settle(std::move(next)));
            items.pop_back();
            if (first || v > best) best = v;
            first = false;
        }
        return done + best;
    };

    Dist start;
    start[State{tree.root, {}}] = Rational(1);
    return descend(settle(std::move(start)));
}

VerifyReport verify_lower_cert(const LowerBoundCertificate& cert) {
    VerifyReport r;
    auto fail = [&r](std::string why) {
        r.ok = false;
        r.reason = std::move(why);
        return r;
    };
    try {
        check_dimensions(cert.m, cert.g);
    } catch (const std::exception& e) {
        return fail(std::string("dimensions: ") + e.what());
    }
    if (cert.adversary.m != cert.m || cert.adversary.g != cert.g) return fail("adversary mixture is for a different (m, g)");
    r.checks.push_back("dimensions m=" + std::to_string(cert.m) + " g=" + std::to_string(cert.g));
    PackingOracle oracle(cert.m, cert.g);
    if (auto problem = mix_problem(cert.adversary, &oracle); !problem.empty()) return fail(problem);
    r.checks.push_back("mixture over " + std::to_string(cert.adversary.support.size()) +
                       " packable instances, probabilities positive and summing to 1");
    Rational v = best_response_value(cert.adversary, cert.m, cert.g);
    r.checks.push_back("best response value " + v.to_fraction());
    if (v < cert.value) return fail("value shortfall: best response " + v.to_fraction() + " < claimed " + cert.value.to_fraction());
    r.checks.push_back("claimed value " + cert.value.to_fraction() + " <= best response value");
    return r;
}

}  // namespace obs
