#pragma once

// Searches over the class of mixtures of two deterministic algorithms.
//
// Both algorithms see the same item sequence and each picks its own bin; a
// game state therefore holds the items sent plus one load vector per
// algorithm. With mixing weight p the score of a finished instance is
//   p * max(loadsA)/g + (1 - p) * max(loadsB)/g.
//
// Upper-bound mode looks for a pair keeping the score <= G on every
// discretized instance. Lower-bound mode proves that every pair lets the
// adversary reach score >= t, and the sweep lifts fixed-p proofs to all p.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "obs/model.hpp"
#include "obs/rational.hpp"
#include "obs/report.hpp"

namespace obs::m2 {

struct SearchOptions {
    bool transposition = true;
    // At p = 1/2 keep loadsA >= loadsB lexicographically.
    bool symmetry = true;
    // Known-sum pruning on the 2m bin loads alone.
    bool partial_info = true;
    // Force both algorithms to take the same decisions (a single
    // deterministic algorithm played twice).
    bool identical_pair = false;
    std::uint64_t node_budget = 100'000'000;
    int threads = 1;
};

struct PairState {
    ItemMultiset sent;
    LoadVector a;
    LoadVector b;

    friend bool operator==(const PairState&, const PairState&) = default;
};

struct PairDecision {
    PairState state;
    ItemSize item = 0;
    // Bin indices into the state's load vectors (0-based, canonical order).
    int bin_a = 0;
    int bin_b = 0;
    // Applies to every state with these loads (state.sent is then empty)
    // unless an entry for the exact state exists.
    bool any_sent = false;
};

struct StrategyPairCertificate {
    int m = 0;
    int g = 0;
    Rational p;
    Rational guarantee;
    std::vector<PairDecision> table;
};

// One node of an adversary proof: a state and the item sent there, or a leaf
// (item == 0) whose weighted payoff already meets the threshold.
struct AdversaryMove {
    PairState state;
    ItemSize item = 0;
    Rational payoff;
};

struct ProofTree {
    std::vector<AdversaryMove> nodes;  // nodes[0] is the root
};

struct SweepEntry {
    Rational p;
    Rational threshold;
    ProofTree proof;
};

struct SweepCertificate {
    int m = 0;
    int g = 0;
    int n = 0;
    Rational target;
    std::vector<SweepEntry> entries;
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t table_entries = 0;
};

struct ThresholdResult {
    bool proved = false;
    std::optional<ProofTree> proof;
    SearchStats stats;
};

using obs::VerifyReport;

// Canonical form used by searches and certificates: each load vector sorted
// descending, and at p = 1/2 (when `symmetric`) the pair ordered so that
// loadsA >= loadsB lexicographically.
void canonicalize(PairState& s, bool symmetric);
Rational weighted_payoff(const LoadVector& a, const LoadVector& b, const Rational& p, int g);
bool symmetric_weight(const Rational& p);

std::optional<StrategyPairCertificate> search_pair(int m, int g, const Rational& p, const Rational& target,
                                                   const SearchOptions& opts = {}, SearchStats* stats = nullptr);

// Finite set {(p a + (1-p) b)/g : a, b in 0..m g}, sorted ascending.
std::vector<Rational> guarantee_candidates(int m, int g, const Rational& p);
Rational best_guarantee(int m, int g, const Rational& p, const SearchOptions& opts = {});

ThresholdResult minmax_threshold(int m, int g, const Rational& p, const Rational& threshold,
                                 const SearchOptions& opts = {});

Rational shifted_bound(const Rational& v, const Rational& p, const Rational& p_prime, int m);

// Mixing weights p_i = delta + 2 delta i, delta = 1/(4N), i = 0..N-1.
std::vector<Rational> sweep_grid(int n);

struct SweepResult {
    bool proved = false;
    std::optional<SweepCertificate> certificate;
    int failed_index = -1;  // first index not proved
    std::vector<SearchStats> stats;
};
// Optional persistence for long sweeps: `load` may return an earlier result
// for grid index i, `store` receives each freshly computed one. Both may be
// called from worker threads.
struct SweepHooks {
    std::function<std::optional<ThresholdResult>(std::size_t i, const Rational& p)> load;
    std::function<void(std::size_t i, const Rational& p, const ThresholdResult&)> store;
};
SweepResult sweep(int m, int g, int n, const Rational& target, const SearchOptions& opts = {},
                  const SweepHooks* hooks = nullptr);

VerifyReport verify_pair_cert(const StrategyPairCertificate& cert);
VerifyReport verify_sweep_cert(const SweepCertificate& cert);
VerifyReport verify_proof_tree(int m, int g, const Rational& p, const Rational& threshold, const ProofTree& proof);

}  // namespace obs::m2
