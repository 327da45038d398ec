#include "obs/m2_search.hpp"

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "obs/error.hpp"
#include "obs/parallel.hpp"

namespace obs::m2 {

namespace {

constexpr int kMaxBins = 4;
constexpr int kMaxLoad = 255;

using Wide = __int128;

// Loads of both algorithms packed one byte per bin: A in bytes [0, m), B in
// bytes [m, 2m), each sorted descending.
using Packed = std::uint64_t;

inline int load_at(Packed p, int i) { return static_cast<int>((p >> (8 * i)) & 0xffu); }
inline Packed with_load(Packed p, int i, int v) {
    return (p & ~(Packed{0xff} << (8 * i))) | (static_cast<Packed>(v) << (8 * i));
}

struct Key {
    std::int32_t ms;
    Packed loads;
    friend bool operator==(const Key&, const Key&) = default;
    template <typename H>
    friend H AbslHashValue(H h, const Key& k) {
        return H::combine(std::move(h), k.ms, k.loads);
    }
};

class ShardedTable {
public:
    explicit ShardedTable(bool locking) : locking_(locking) {}

    std::optional<bool> find(const Key& k) {
        Shard& s = shard(k);
        auto lock = guard(s);
        auto it = s.map.find(k);
        if (it == s.map.end()) return std::nullopt;
        return it->second;
    }
    void insert(const Key& k, bool v) {
        Shard& s = shard(k);
        auto lock = guard(s);
        s.map.emplace(k, v);
    }
    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& s : shards_) n += s.map.size();
        return n;
    }

private:
    static constexpr std::size_t kShards = 64;
    struct Shard {
        std::mutex mu;
        absl::flat_hash_map<Key, bool> map;
    };
    Shard& shard(const Key& k) { return shards_[absl::Hash<Key>{}(k) % kShards]; }
    std::unique_lock<std::mutex> guard(Shard& s) {
        return locking_ ? std::unique_lock(s.mu) : std::unique_lock<std::mutex>();
    }

    bool locking_;
    std::array<Shard, kShards> shards_;
};

struct Child {
    Packed loads;
    int bin_a;
    int bin_b;
};

void sort_desc(int* v, int n) { std::sort(v, v + n, std::greater<>()); }

void validate(int m, int g, const Rational& p) {
    check_dimensions(m, g);
    if (m > kMaxBins) throw InputError("pair search supports at most " + std::to_string(kMaxBins) + " bins");
    if (static_cast<long>(m) * g > kMaxLoad) throw InputError("m * g must not exceed 255 for pair search");
    if (p.sign() <= 0 || p >= Rational(1)) throw InputError("mixing weight p must lie strictly between 0 and 1");
}

Wide to_wide(const mpz_class& z) {
    if (!z.fits_slong_p()) throw InputError("rational too large for pair search arithmetic");
    return static_cast<Wide>(z.get_si());
}

// The two-algorithm game for one (p, bound). The adversary wins a state when
// the weighted payoff reaches the bound (>= in lower-bound mode, > in
// upper-bound mode) on some line of play.
class PairGame {
public:
    PairGame(const MultisetGraph& graph, const Rational& p, const Rational& bound, bool strict,
             const SearchOptions& opts)
        : graph_(graph), m_(graph.m()), g_(graph.g()), opts_(opts), tt_(opts.threads > 1) {
        sym_ = opts.symmetry && symmetric_weight(p) && !opts.identical_pair;
        Wide pn = to_wide(p.num()), pd = to_wide(p.den());
        Wide bn = to_wide(bound.num()), bd = to_wide(bound.den());
        ca_ = pn * bd;
        cb_ = (pd - pn) * bd;
        rhs_ = bn * g_ * pd;
        if (strict) rhs_ += 1;  // all quantities are integers, so "> x" is ">= x + 1"
    }

    int m() const { return m_; }

    bool violated(Packed loads) const {
        return ca_ * load_at(loads, 0) + cb_ * load_at(loads, m_) >= rhs_;
    }

    Packed pack(const LoadVector& a, const LoadVector& b) const {
        std::array<int, 2 * kMaxBins> v{};
        for (int i = 0; i < m_; ++i) {
            v[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
            v[static_cast<std::size_t>(m_ + i)] = b[static_cast<std::size_t>(i)];
        }
        return pack_raw(v.data());
    }

    // v holds 2m loads in any order within each half.
    Packed pack_raw(int* v) const {
        sort_desc(v, m_);
        sort_desc(v + m_, m_);
        if (sym_ && std::lexicographical_compare(v, v + m_, v + m_, v + 2 * m_)) std::swap_ranges(v, v + m_, v + m_);
        Packed p = 0;
        for (int i = 0; i < 2 * m_; ++i) p = with_load(p, i, v[i]);
        return p;
    }

    void unpack(Packed p, LoadVector& a, LoadVector& b) const {
        a.resize(static_cast<std::size_t>(m_));
        b.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            a[static_cast<std::size_t>(i)] = load_at(p, i);
            b[static_cast<std::size_t>(i)] = load_at(p, m_ + i);
        }
    }

    // Distinct successor states for item s, best-looking first.
    int children(Packed loads, ItemSize s, Child* out) const {
        int n = 0;
        for (int i = 0; i < m_; ++i) {
            if (i > 0 && load_at(loads, i) == load_at(loads, i - 1)) continue;
            for (int j = 0; j < m_; ++j) {
                if (opts_.identical_pair && j != i) continue;
                if (j > 0 && load_at(loads, m_ + j) == load_at(loads, m_ + j - 1)) continue;
                std::array<int, 2 * kMaxBins> v{};
                for (int k = 0; k < 2 * m_; ++k) v[static_cast<std::size_t>(k)] = load_at(loads, k);
                v[static_cast<std::size_t>(i)] += s;
                v[static_cast<std::size_t>(m_ + j)] += s;
                Packed c = pack_raw(v.data());
                bool dup = false;
                for (int k = 0; k < n; ++k) dup = dup || out[k].loads == c;
                if (!dup) out[n++] = Child{c, i, j};
            }
        }
        std::stable_sort(out, out + n, [this](const Child& x, const Child& y) {
            return score(x.loads) < score(y.loads);
        });
        return n;
    }

    bool adversary_wins(std::int32_t ms, Packed loads) {
        if (violated(loads)) return true;
        const auto& items = graph_.feasible(ms);
        if (items.empty()) return false;
        if (opts_.partial_info && relaxed_alg_wins(loads)) return false;
        Key key{ms, loads};
        if (opts_.transposition)
            if (auto hit = tt_.find(key)) return *hit;
        if (++nodes_ > opts_.node_budget) throw BudgetExceeded("pair search node budget", nodes_.load());

        bool result = false;
        std::array<Child, kMaxBins * kMaxBins> buf;
        for (auto it = items.rbegin(); it != items.rend() && !result; ++it) {
            std::int32_t next = graph_.next(ms, *it);
            int n = children(loads, *it, buf.data());
            bool all = true;
            for (int k = 0; k < n && all; ++k) all = adversary_wins(next, buf[static_cast<std::size_t>(k)].loads);
            result = all;
        }
        if (opts_.transposition) tt_.insert(key, result);
        return result;
    }

    // Root evaluation; with several threads the root items are split across
    // workers sharing the transposition table.
    bool solve_root() {
        const std::int32_t root = graph_.root();
        if (violated(0)) return true;
        const auto& items = graph_.feasible(root);
        if (opts_.threads <= 1 || items.size() < 2) return adversary_wins(root, 0);
        std::vector<char> wins(items.size(), 0);
        parallel_for(items.size(), opts_.threads, [&](std::size_t idx) {
            ItemSize s = items[items.size() - 1 - idx];
            std::array<Child, kMaxBins * kMaxBins> buf;
            int n = children(0, s, buf.data());
            bool all = true;
            for (int k = 0; k < n && all; ++k)
                all = adversary_wins(graph_.next(root, s), buf[static_cast<std::size_t>(k)].loads);
            wins[idx] = all;
        });
        return std::any_of(wins.begin(), wins.end(), [](char c) { return c != 0; });
    }

    SearchStats stats() const { return {nodes_.load(), tt_.size()}; }

private:
    // Relaxed game on loads alone: the adversary may send any item of size
    // <= g fitting the remaining total volume, and may stop anywhere. It is
    // at least as strong as the real adversary, so an algorithm win here is
    // a win in every real state with these loads.
    bool relaxed_alg_wins(Packed loads) {
        if (violated(loads)) return false;
        {
            std::lock_guard lock(relaxed_mu_);
            if (auto it = relaxed_.find(loads); it != relaxed_.end()) return it->second;
        }
        int total = 0;
        for (int i = 0; i < m_; ++i) total += load_at(loads, i);
        int room = std::min(g_, m_ * g_ - total);
        bool win = true;
        std::array<Child, kMaxBins * kMaxBins> buf;
        for (int s = 1; s <= room && win; ++s) {
            int n = children(loads, s, buf.data());
            bool any = false;
            for (int k = 0; k < n && !any; ++k) any = relaxed_alg_wins(buf[static_cast<std::size_t>(k)].loads);
            win = any;
        }
        std::lock_guard lock(relaxed_mu_);
        relaxed_.emplace(loads, win);
        return win;
    }

    Wide score(Packed loads) const { return ca_ * load_at(loads, 0) + cb_ * load_at(loads, m_); }

    const MultisetGraph& graph_;
    int m_, g_;
    SearchOptions opts_;
    bool sym_ = false;
    Wide ca_ = 0, cb_ = 0, rhs_ = 0;
    ShardedTable tt_;
    std::mutex relaxed_mu_;
    absl::flat_hash_map<Packed, bool> relaxed_;
    std::atomic<std::uint64_t> nodes_{0};
};

PairState make_state(const MultisetGraph& graph, std::int32_t ms, const PairGame& game, Packed loads) {
    PairState s{graph.multiset(ms), {}, {}};
    game.unpack(loads, s.a, s.b);
    return s;
}

std::string state_key(const PairState& s) {
    return s.sent.key() + "|" + to_string(s.a) + "|" + to_string(s.b);
}

// Walks the states reachable under the algorithm pair's choices. A decision
// is first recorded as the default for its (loads, item); a state whose
// default placement would lose gets an exception entry carrying the full
// state. States use the certificate canonical form.
std::vector<PairDecision> extract_pair_table(const MultisetGraph& graph, PairGame& game, const Rational& p) {
    const bool sym = symmetric_weight(p);
    const int m = graph.m();
    const Wide wa = to_wide(p.num()), wb = to_wide(p.den() - p.num());
    auto canon = [m, sym](int* v) {
        sort_desc(v, m);
        sort_desc(v + m, m);
        if (sym && std::lexicographical_compare(v, v + m, v + m, v + 2 * m)) std::swap_ranges(v, v + m, v + m);
        Packed k = 0;
        for (int i = 0; i < 2 * m; ++i) k = with_load(k, i, v[i]);
        return k;
    };
    struct Placement {
        int i, j;
        Packed child;
        Wide score;
    };
    absl::flat_hash_map<std::pair<Packed, int>, std::pair<int, int>> defaults;
    std::vector<std::pair<std::pair<Packed, int>, std::pair<int, int>>> default_order;
    std::vector<PairDecision> exceptions;
    absl::flat_hash_set<Key> seen;
    std::vector<std::pair<std::int32_t, Packed>> stack{{graph.root(), 0}};
    seen.insert(Key{graph.root(), 0});

    auto place = [&](Packed loads, ItemSize s, int i, int j) {
        std::array<int, 2 * kMaxBins> v{};
        for (int k = 0; k < 2 * m; ++k) v[static_cast<std::size_t>(k)] = load_at(loads, k);
        v[static_cast<std::size_t>(i)] += s;
        v[static_cast<std::size_t>(m + j)] += s;
        std::array<int, 2 * kMaxBins> w = v;
        Packed child = canon(v.data());
        Packed engine = game.pack_raw(w.data());
        return std::make_pair(child, engine);
    };

    while (!stack.empty()) {
        auto [ms, loads] = stack.back();
        stack.pop_back();
        for (ItemSize s : graph.feasible(ms)) {
            std::int32_t next = graph.next(ms, s);
            auto key = std::make_pair(loads, s);
            std::optional<Packed> chosen;
            auto dit = defaults.find(key);
            if (dit != defaults.end()) {
                auto [child, engine] = place(loads, s, dit->second.first, dit->second.second);
                if (!game.adversary_wins(next, engine)) chosen = child;
            }
            if (!chosen) {
                std::vector<Placement> cands;
                for (int i = 0; i < m; ++i) {
                    if (i > 0 && load_at(loads, i) == load_at(loads, i - 1)) continue;
                    for (int j = 0; j < m; ++j) {
                        if (j > 0 && load_at(loads, m + j) == load_at(loads, m + j - 1)) continue;
                        auto [child, engine] = place(loads, s, i, j);
                        (void)engine;
                        cands.push_back(Placement{i, j, child, wa * load_at(child, 0) + wb * load_at(child, m)});
                    }
                }
                std::stable_sort(cands.begin(), cands.end(),
                                 [](const Placement& x, const Placement& y) { return x.score < y.score; });
                for (const auto& c : cands) {
                    auto [child, engine] = place(loads, s, c.i, c.j);
                    if (game.adversary_wins(next, engine)) continue;
                    chosen = child;
                    if (dit == defaults.end()) {
                        defaults.emplace(key, std::make_pair(c.i, c.j));
                        default_order.push_back({key, {c.i, c.j}});
                    } else {
                        PairState st = make_state(graph, ms, game, loads);
                        exceptions.push_back(PairDecision{std::move(st), s, c.i, c.j, false});
                    }
                    break;
                }
                if (!chosen) throw std::logic_error("pair table extraction reached a losing state");
            }
            if (seen.insert(Key{next, *chosen}).second) stack.emplace_back(next, *chosen);
        }
    }

    std::vector<PairDecision> table;
    table.reserve(default_order.size() + exceptions.size());
    for (const auto& [key, bins] : default_order) {
        PairState st{ItemMultiset(graph.g()), {}, {}};
        game.unpack(key.first, st.a, st.b);
        table.push_back(PairDecision{std::move(st), key.second, bins.first, bins.second, true});
    }
    for (auto& d : exceptions) table.push_back(std::move(d));
    return table;
}

ProofTree extract_proof(const MultisetGraph& graph, PairGame& game, const Rational& p) {
    const int m = graph.m();
    const int g = graph.g();
    ProofTree proof;
    absl::flat_hash_set<Key> seen;
    std::vector<std::pair<std::int32_t, Packed>> stack{{graph.root(), 0}};
    seen.insert(Key{graph.root(), 0});
    std::array<Child, kMaxBins * kMaxBins> buf;
    while (!stack.empty()) {
        auto [ms, loads] = stack.back();
        stack.pop_back();
        PairState st = make_state(graph, ms, game, loads);
        if (game.violated(loads)) {
            Rational w = weighted_payoff(st.a, st.b, p, g);
            proof.nodes.push_back(AdversaryMove{std::move(st), 0, w});
            continue;
        }
        const auto& items = graph.feasible(ms);
        bool found = false;
        for (auto it = items.rbegin(); it != items.rend() && !found; ++it) {
            std::int32_t next = graph.next(ms, *it);
            int n = game.children(loads, *it, buf.data());
            bool all = true;
            for (int k = 0; k < n && all; ++k) all = game.adversary_wins(next, buf[static_cast<std::size_t>(k)].loads);
            if (!all) continue;
            found = true;
            proof.nodes.push_back(AdversaryMove{st, *it, Rational(0)});
            for (int k = 0; k < n; ++k) {
                Packed c = buf[static_cast<std::size_t>(k)].loads;
                if (seen.insert(Key{next, c}).second) stack.emplace_back(next, c);
            }
        }
        if (!found) throw std::logic_error("proof extraction reached a state the adversary does not win");
    }
    (void)m;
    return proof;
}

}  // namespace

bool symmetric_weight(const Rational& p) { return p == Rational(1, 2); }

void canonicalize(PairState& s, bool symmetric) {
    s.a = canonical(std::move(s.a));
    s.b = canonical(std::move(s.b));
    if (symmetric && s.a < s.b) std::swap(s.a, s.b);
}

Rational weighted_payoff(const LoadVector& a, const LoadVector& b, const Rational& p, int g) {
    return p * payoff(a, g) + (Rational(1) - p) * payoff(b, g);
}

std::optional<StrategyPairCertificate> search_pair(int m, int g, const Rational& p, const Rational& target,
                                                   const SearchOptions& opts, SearchStats* stats) {
    validate(m, g, p);
    if (target.sign() <= 0) throw InputError("target guarantee must be positive");
    MultisetGraph graph(m, g);
    PairGame game(graph, p, target, /*strict=*/true, opts);
    bool adversary = game.solve_root();
    std::optional<StrategyPairCertificate> out;
    if (!adversary) out = StrategyPairCertificate{m, g, p, target, extract_pair_table(graph, game, p)};
    if (stats) *stats = game.stats();
    return out;
}

std::vector<Rational> guarantee_candidates(int m, int g, const Rational& p) {
    validate(m, g, p);
    std::set<Rational> vals;
    for (int a = 0; a <= m * g; ++a)
        for (int b = 0; b <= m * g; ++b) vals.insert((p * Rational(a) + (Rational(1) - p) * Rational(b)) / Rational(g));
    return {vals.begin(), vals.end()};
}

Rational best_guarantee(int m, int g, const Rational& p, const SearchOptions& opts) {
    auto cands = guarantee_candidates(m, g, p);
    MultisetGraph graph(m, g);
    auto succeeds = [&](const Rational& target) {
        if (target.sign() <= 0) return false;
        PairGame game(graph, p, target, true, opts);
        return !game.solve_root();
    };
    // The largest candidate is m, which every pair achieves.
    std::size_t lo = 0, hi = cands.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (succeeds(cands[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return cands[lo];
}

ThresholdResult minmax_threshold(int m, int g, const Rational& p, const Rational& threshold,
                                 const SearchOptions& opts) {
    validate(m, g, p);
    MultisetGraph graph(m, g);
    PairGame game(graph, p, threshold, /*strict=*/false, opts);
    ThresholdResult r;
    r.proved = game.solve_root();
    if (r.proved) r.proof = extract_proof(graph, game, p);
    r.stats = game.stats();
    return r;
}

Rational shifted_bound(const Rational& v, const Rational& p, const Rational& p_prime, int m) {
    for (const Rational* q : {&p, &p_prime})
        if (q->sign() <= 0 || *q >= Rational(1)) throw InputError("probabilities must lie strictly between 0 and 1");
    return v - abs(p - p_prime) * Rational(m);
}

std::vector<Rational> sweep_grid(int n) {
    if (n < 1) throw InputError("number of searches N must be >= 1");
    Rational delta(1, 4L * n);
    std::vector<Rational> grid;
    for (int i = 0; i < n; ++i) grid.push_back(delta + Rational(2) * delta * Rational(i));
    return grid;
}

SweepResult sweep(int m, int g, int n, const Rational& target, const SearchOptions& opts, const SweepHooks* hooks) {
    auto grid = sweep_grid(n);
    if (target.sign() <= 0) throw InputError("target must be positive");
    Rational delta(1, 4L * n);
    Rational threshold = target + Rational(m) * delta;

    struct Outcome {
        std::optional<ThresholdResult> result;
        bool budget = false;
        std::string what;
    };
    std::vector<Outcome> outcomes(grid.size());
    SearchOptions inner = opts;
    inner.threads = 1;
    std::atomic<bool> stop{false};
    parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
        if (stop.load()) return;
        try {
            if (hooks && hooks->load) outcomes[i].result = hooks->load(i, grid[i]);
            if (!outcomes[i].result) {
                outcomes[i].result = minmax_threshold(m, g, grid[i], threshold, inner);
                if (hooks && hooks->store) hooks->store(i, grid[i], *outcomes[i].result);
            }
            if (!outcomes[i].result->proved && opts.threads <= 1) stop = true;
        } catch (const BudgetExceeded& e) {
            outcomes[i].budget = true;
            outcomes[i].what = e.what();
            if (opts.threads <= 1) stop = true;
        }
    });

    SweepResult res;
    SweepCertificate cert{m, g, n, target, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto& o = outcomes[i];
        if (o.budget)
            throw BudgetExceeded("sweep index " + std::to_string(i) + " (p = " + grid[i].to_string() + "): " + o.what, 0);
        if (!o.result || !o.result->proved) {
            res.failed_index = static_cast<int>(i);
            if (o.result) res.stats.push_back(o.result->stats);
            return res;
        }
        res.stats.push_back(o.result->stats);
        cert.entries.push_back(SweepEntry{grid[i], threshold, std::move(*o.result->proof)});
    }
    res.proved = true;
    res.certificate = std::move(cert);
    return res;
}

// ---------------------------------------------------------------------------
// Verification. Shares only the core model with the searches above.

VerifyReport verify_pair_cert(const StrategyPairCertificate& cert) {
    VerifyReport rep;
    auto reject = [&](std::string why) {
        rep.ok = false;
        rep.reason = std::move(why);
        return rep;
    };
    if (cert.m < 1 || cert.g < 1) return reject("invalid dimensions");
    if (cert.p.sign() <= 0 || cert.p >= Rational(1)) return reject("mixing weight outside (0,1)");
    rep.checks.push_back("dimensions and mixing weight valid");
    const bool sym = symmetric_weight(cert.p);
    const auto m = static_cast<std::size_t>(cert.m);

    auto loads_key = [](const PairState& s) { return to_string(s.a) + "|" + to_string(s.b); };
    std::map<std::pair<std::string, int>, std::pair<int, int>> decide, fallback;
    for (const auto& d : cert.table) {
        if (d.state.sent.g() != cert.g || d.state.a.size() != m || d.state.b.size() != m)
            return reject("table entry with malformed state " + state_key(d.state));
        if (d.bin_a < 0 || d.bin_a >= cert.m || d.bin_b < 0 || d.bin_b >= cert.m)
            return reject("table entry with bin index out of range at " + state_key(d.state));
        PairState canon = d.state;
        canonicalize(canon, sym);
        if (!(canon == d.state)) return reject("table entry state not canonical: " + state_key(d.state));
        if (d.item < 1 || d.item > cert.g) return reject("table entry with item out of range at " + state_key(d.state));
        if (d.any_sent && !d.state.sent.empty())
            return reject("default entry carries a multiset at " + state_key(d.state));
        auto& target = d.any_sent ? fallback : decide;
        auto key = std::make_pair(d.any_sent ? loads_key(d.state) : state_key(d.state), d.item);
        if (!target.emplace(key, std::make_pair(d.bin_a, d.bin_b)).second)
            return reject("duplicate table entry at " + state_key(d.state) + " item " + std::to_string(d.item));
    }
    rep.checks.push_back("table entries well-formed (" + std::to_string(cert.table.size()) + ")");

    PackingOracle oracle(cert.m, cert.g);
    std::set<std::string> seen;
    std::vector<PairState> stack{{ItemMultiset(cert.g), LoadVector(m, 0), LoadVector(m, 0)}};
    seen.insert(state_key(stack.back()));
    std::size_t terminals = 0;
    while (!stack.empty()) {
        PairState st = std::move(stack.back());
        stack.pop_back();
        auto items = oracle.feasible_items(st.sent);
        if (items.empty()) {
            ++terminals;
            Rational w = weighted_payoff(st.a, st.b, cert.p, cert.g);
            if (w > cert.guarantee)
                return reject("terminal state " + state_key(st) + " has weighted payoff " + w.to_string() +
                              " above the guarantee " + cert.guarantee.to_string());
            continue;
        }
        for (ItemSize s : items) {
            auto it = decide.find({state_key(st), s});
            if (it == decide.end()) it = fallback.find({loads_key(st), s});
            if (it == fallback.end())
                return reject("closure violation: no decision for state " + state_key(st) + " item " + std::to_string(s));
            PairState c = st;
            c.sent.add(s);
            c.a[static_cast<std::size_t>(it->second.first)] += s;
            c.b[static_cast<std::size_t>(it->second.second)] += s;
            canonicalize(c, sym);
            if (seen.insert(state_key(c)).second) stack.push_back(std::move(c));
        }
    }
    rep.checks.push_back("table closed under every feasible item; " + std::to_string(seen.size()) + " states");
    rep.checks.push_back("all " + std::to_string(terminals) + " maximal states within guarantee " +
                         cert.guarantee.to_string());
    return rep;
}

VerifyReport verify_proof_tree(int m, int g, const Rational& p, const Rational& threshold, const ProofTree& proof) {
    VerifyReport rep;
    auto reject = [&](std::string why) {
        rep.ok = false;
        rep.reason = std::move(why);
        return rep;
    };
    if (m < 1 || g < 1) return reject("invalid dimensions");
    if (p.sign() <= 0 || p >= Rational(1)) return reject("mixing weight outside (0,1)");
    const bool sym = symmetric_weight(p);
    const auto mm = static_cast<std::size_t>(m);
    std::map<std::string, const AdversaryMove*> nodes;
    for (const auto& n : proof.nodes) {
        if (n.state.sent.g() != g || n.state.a.size() != mm || n.state.b.size() != mm)
            return reject("proof node with malformed state");
        if (!nodes.emplace(state_key(n.state), &n).second) return reject("duplicate proof node " + state_key(n.state));
    }
    if (proof.nodes.empty()) return reject("empty proof tree");
    PairState root{ItemMultiset(g), LoadVector(mm, 0), LoadVector(mm, 0)};
    if (!(proof.nodes.front().state == root)) return reject("proof root is not the empty state");

    PackingOracle oracle(m, g);
    std::set<std::string> done;
    std::vector<std::string> path;
    std::string failure;
    std::function<bool(const PairState&)> check = [&](const PairState& st) -> bool {
        std::string key = state_key(st);
        if (done.count(key)) return true;
        auto it = nodes.find(key);
        auto where = [&] {
            std::string s;
            for (const auto& step : path) s += step + " ";
            return s.empty() ? std::string("root") : s;
        };
        if (it == nodes.end()) {
            failure = "uncovered state " + key + " along path " + where();
            return false;
        }
        const AdversaryMove& node = *it->second;
        if (!oracle.packs(st.sent)) {
            failure = "unpackable items at " + key;
            return false;
        }
        if (node.item == 0) {
            Rational w = weighted_payoff(st.a, st.b, p, g);
            if (w != node.payoff) {
                failure = "leaf payoff claim " + node.payoff.to_string() + " differs from " + w.to_string() +
                          " along path " + where();
                return false;
            }
            if (w < threshold) {
                failure = "leaf payoff " + w.to_string() + " below threshold " + threshold.to_string() +
                          " along path " + where();
                return false;
            }
            done.insert(key);
            return true;
        }
        ItemMultiset next = st.sent;
        if (node.item < 1 || node.item > g) {
            failure = "item out of range at " + key;
            return false;
        }
        next.add(node.item);
        if (!oracle.packs(next)) {
            failure = "infeasible item " + std::to_string(node.item) + " at " + key;
            return false;
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                PairState c{next, st.a, st.b};
                c.a[static_cast<std::size_t>(i)] += node.item;
                c.b[static_cast<std::size_t>(j)] += node.item;
                canonicalize(c, sym);
                path.push_back("item " + std::to_string(node.item) + "->(" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
                bool ok = check(c);
                path.pop_back();
                if (!ok) return false;
            }
        done.insert(key);
        return true;
    };
    if (!check(root)) return reject(failure);
    rep.checks.push_back("proof tree covers all " + std::to_string(m * m) + " joint placements at every node; " +
                         std::to_string(done.size()) + " states");
    rep.checks.push_back("every leaf reaches weighted payoff >= " + threshold.to_string());
    return rep;
}

VerifyReport verify_sweep_cert(const SweepCertificate& cert) {
    VerifyReport rep;
    auto reject = [&](std::string why) {
        rep.ok = false;
        rep.reason = std::move(why);
        return rep;
    };
    if (cert.n < 1) return reject("N must be >= 1");
    if (cert.entries.size() != static_cast<std::size_t>(cert.n))
        return reject("expected " + std::to_string(cert.n) + " entries, found " + std::to_string(cert.entries.size()));
    Rational delta(1, 4L * cert.n);
    Rational half(1, 2);
    Rational covered(0);
    for (std::size_t i = 0; i < cert.entries.size(); ++i) {
        const auto& e = cert.entries[i];
        Rational expect_p = delta + Rational(2) * delta * Rational(static_cast<long>(i));
        if (e.p != expect_p)
            return reject("entry " + std::to_string(i) + ": p = " + e.p.to_string() + ", expected " + expect_p.to_string());
        Rational expect_t = cert.target + Rational(cert.m) * delta;
        if (e.threshold != expect_t)
            return reject("entry " + std::to_string(i) + ": threshold " + e.threshold.to_string() + ", expected " +
                          expect_t.to_string());
        if (e.p - delta > covered) return reject("probability gap before entry " + std::to_string(i));
        covered = e.p + delta;
        // Neighbouring weights inherit at least threshold - m delta = target.
        if (shifted_bound(e.threshold, e.p, e.p - delta == Rational(0) ? e.p : e.p - delta, cert.m) < cert.target)
            return reject("entry " + std::to_string(i) + ": shifted bound below target");
    }
    if (covered < half) return reject("grid does not cover (0, 1/2]");
    rep.checks.push_back("delta = " + delta.to_string() + ", grid p_i = delta + 2 delta i verified");
    rep.checks.push_back("intervals [p_i - delta, p_i + delta] cover (0, 1/2]");
    rep.checks.push_back("thresholds t + m delta = " + (cert.target + Rational(cert.m) * delta).to_string());
    for (std::size_t i = 0; i < cert.entries.size(); ++i) {
        const auto& e = cert.entries[i];
        auto sub = verify_proof_tree(cert.m, cert.g, e.p, e.threshold, e.proof);
        if (!sub.ok) return reject("entry " + std::to_string(i) + " (p = " + e.p.to_string() + "): " + sub.reason);
        rep.checks.push_back("entry " + std::to_string(i) + " (p = " + e.p.to_string() + "): " + sub.checks.front());
    }
    rep.checks.push_back("weights p > 1/2 follow by exchanging the two algorithms");
    return rep;
}

}  // namespace obs::m2
