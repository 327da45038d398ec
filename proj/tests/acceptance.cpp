// Acceptance checks: one PASS/FAIL line per criterion.
//
// Criteria 4 and 5 are known not to hold in this model (see README); they are
// run in full and reported as FAIL, and the exit status only flags
// unexpected outcomes.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "mutate.hpp"
#include "obs/certificate.hpp"
#include "obs/game_tree.hpp"
#include "obs/m2_search.hpp"
#include "obs/seqform.hpp"
#include "obs/solver.hpp"
#include "obs/verify.hpp"
#include "oracle.hpp"

using namespace obs;

namespace {

// Tolerances and limits.
const Rational kSkiTarget(-48, 100);
const Rational kSkiTolerance(1, 100);
constexpr double kSkiSeconds = 1.0;
constexpr double kDetSeconds = 1.0;
constexpr int kMaxG = 18;
constexpr double kPairSeconds = 30 * 60;
constexpr double kSweepSeconds = 30 * 60;
constexpr int kSweepN = 12;
constexpr std::size_t kMutationsPerKind = 300;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Matrix = std::vector<std::vector<Rational>>;

Matrix ints(std::vector<std::vector<int>> v) {
    Matrix out;
    for (auto& row : v) {
        std::vector<Rational> r;
        for (int x : row) r.emplace_back(x);
        out.push_back(std::move(r));
    }
    return out;
}

int minimal_g = 0;  // shared by criteria 3 and 5

Outcome ski() {
    auto start = Clock::now();
    auto lp = build_lp(ski_fixture());
    const Matrix E = ints({
        {1, 0, 0, 0, 0, 1, 0, 0, 0, 0},
        {-1, 1, 1, 0, 0, 0, 0, 0, 0, 0},
        {-1, 0, 0, 1, 1, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, -1, 1, 1, 0, 0},
        {0, 0, 0, 0, 0, -1, 0, 0, 1, 1},
    });
    const std::vector<Rational> e{1, 0, 0, 0, 0};
    const Matrix C = ints({
        {0, 0, 0, 0}, {2, -2, 0, 0}, {0, 2, 0, 0}, {0, 0, -1, -4}, {0, 0, -3, -1},
        {0, 0, 0, 0}, {0, -4, 0, 0}, {-2, 0, 0, 0}, {0, 0, 2, -1}, {0, 0, 0, 2},
    });
    bool shape = lp.num_rows() == 5 && lp.num_x == 10 && lp.num_y() == 4;
    bool matrices = shape && dense(lp.E, 5, 10) == E && lp.e == e && dense(lp.C, 10, 4) == C;
    auto sol = solve_exact(to_dual(lp));
    double secs = seconds_since(start);
    bool value = sol.status == lp::Status::Optimal && abs(sol.u - kSkiTarget) <= kSkiTolerance;
    bool zeros = sol.x.size() == 10 && sol.x[6].is_zero() && sol.x[8].is_zero();
    std::ostringstream d;
    d << "E/e/C " << (matrices ? "match" : "DIFFER") << ", u = " << sol.u << " (" << sol.u.to_decimal(4) << "), x7 = "
      << (sol.x.size() == 10 ? sol.x[6].to_string() : "?") << ", x9 = " << (sol.x.size() == 10 ? sol.x[8].to_string() : "?")
      << ", " << secs << " s";
    return {matrices && value && zeros && secs < kSkiSeconds, d.str()};
}

Outcome deterministic() {
    auto start = Clock::now();
    Rational v = minmax_det(build_tree(2, 3, true));
    double secs = seconds_since(start);
    std::ostringstream d;
    d << "lb-det(2,3) = " << v << ", " << secs << " s";
    return {v == Rational(4, 3) && secs < kDetSeconds, d.str()};
}

Outcome randomized() {
    std::ostringstream d;
    for (int g = 1; g <= kMaxG; ++g) {
        auto start = Clock::now();
        auto r = lb_rand(2, g);
        d << "g=" << g << ": " << r.value << " (" << seconds_since(start) << " s); ";
        if (r.value == Rational(7, 6)) {
            minimal_g = g;
            LowerBoundCertificate cert{2, g, r.value, r.adversary};
            bool ok = verify_certificate_text(emit_certificate(cert)).ok;
            d << "minimal g = " << g << ", certificate " << (ok ? "verified" : "REJECTED");
            return {ok, d.str()};
        }
    }
    return {false, d.str() + "7/6 not reached"};
}

Outcome upper_bound() {
    auto start = Clock::now();
    const Rational half(1, 2), target(5, 4);
    Rational best = m2::best_guarantee(2, 18, half);
    auto cert = m2::search_pair(2, 18, half, target);
    bool cert_ok = cert && verify_certificate_text(emit_certificate(*cert)).ok;
    double secs = seconds_since(start);
    std::ostringstream d;
    d << "best_guarantee(2,18,1/2) = " << best << " (" << best.to_decimal(4) << "), 5/4 pair certificate "
      << (cert ? (cert_ok ? "found and verified" : "found but REJECTED") : "not found") << ", " << secs << " s";
    return {best == target && cert_ok && secs <= kPairSeconds, d.str()};
}

Outcome sweep_bound() {
    auto start = Clock::now();
    int g = minimal_g > 0 ? minimal_g : 3;
    const Rational t(7, 6);
    auto r = m2::sweep(2, g, kSweepN, t);
    double secs = seconds_since(start);
    std::ostringstream d;
    d << "sweep(m=2, g=" << g << ", N=" << kSweepN << ", t=7/6): ";
    bool ok = r.proved && r.certificate && verify_certificate_text(emit_certificate(*r.certificate)).ok;
    if (r.proved) {
        d << (ok ? "proved, certificate verified" : "proved, certificate REJECTED");
    } else {
        auto grid = m2::sweep_grid(kSweepN);
        Rational p = grid[static_cast<std::size_t>(r.failed_index)];
        Rational threshold = t + Rational(2, 4 * kSweepN);
        Rational ub = m2::best_guarantee(2, g, p);
        d << "not proved at index " << r.failed_index << " (p = " << p << ", threshold " << threshold
          << "); a pair with guarantee " << ub << " exists there";
    }
    d << ", " << secs << " s";
    return {ok && secs <= kSweepSeconds, d.str()};
}

Outcome duality() {
    std::ostringstream d;
    bool all = true;
    for (int g = 1; g <= 3; ++g) {
        auto r = lb_rand(2, g);
        Rational wc = worst_case_value(r.algorithm, 2, g);
        Rational br = best_response_value(r.adversary, 2, g);
        bool eq = wc == r.value && br == r.value;
        all = all && eq;
        d << "g=" << g << ": u=" << r.value << " wc=" << wc << " br=" << br << "; ";
    }
    return {all, d.str()};
}

Outcome oracle_equivalence() {
    std::ostringstream d;
    bool all = true;
    for (int g = 1; g <= 3; ++g) {
        Rational lp = lb_rand(2, g).value;
        Rational game = oracle::matrix_game_value(2, g);
        all = all && lp == game;
        d << "g=" << g << ": lb-rand=" << lp << " matrix game=" << game << "; ";
    }
    return {all, d.str()};
}

Outcome monotone() {
    std::ostringstream d;
    Rational r1 = lb_rand(2, 1).value, r2 = lb_rand(2, 2).value, r4 = lb_rand(2, 4).value;
    bool chain = r1 <= r2 && r2 <= r4;
    d << "lb-rand(2,1..4 by doubling) = " << r1 << ", " << r2 << ", " << r4 << "; ";
    bool dominated = true;
    for (auto [m, g] : {std::pair{1, 2}, {2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 2}}) {
        Rational rand = lb_rand(m, g).value;
        Rational det = minmax_det(build_tree(m, g, true));
        dominated = dominated && rand <= det;
        d << "(" << m << "," << g << ") " << rand << "<=" << det << " ";
    }
    return {chain && dominated, d.str()};
}

Outcome robustness() {
    std::ostringstream d;
    bool ok = true;
    auto note = [&](bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            d << "FAILED " << what << "; ";
        }
    };
    std::vector<std::string> certs;
    for (int g = 1; g <= 3; ++g) {
        LbRandOptions off;
        off.merge = false;
        auto a = lb_rand(2, g);
        auto b = lb_rand(2, g, off);
        note(a.value == b.value, "lb-rand merge g=" + std::to_string(g));
        note(minmax_det(build_tree(2, g, true)) == minmax_det(build_tree(2, g, false)), "lb-det merge g=" + std::to_string(g));
        certs.push_back(emit_certificate(LowerBoundCertificate{2, g, a.value, a.adversary}));
        certs.push_back(emit_certificate(LowerBoundCertificate{2, g, b.value, b.adversary}));
    }
    const Rational half(1, 2);
    for (int g = 1; g <= 3; ++g) {
        std::set<std::string> answers;
        for (bool tt : {true, false})
            for (int threads : {1, 4}) {
                m2::SearchOptions o;
                o.transposition = tt;
                o.threads = threads;
                std::ostringstream key;
                key << m2::best_guarantee(2, g, half, o);
                for (auto t : {Rational(1), Rational(7, 6), Rational(5, 4)})
                    key << " " << m2::minmax_threshold(2, g, half, t, o).proved;
                auto s = m2::sweep(2, g, 4, Rational(1), o);
                key << " " << s.proved << " " << s.failed_index;
                if (s.certificate) certs.push_back(emit_certificate(*s.certificate));
                answers.insert(key.str());
            }
        note(answers.size() == 1, "m2 options g=" + std::to_string(g));
    }
    for (int g = 3; g <= 4; ++g) {
        auto pair = m2::search_pair(2, g, half, Rational(4, 3));
        if (pair) certs.push_back(emit_certificate(*pair));
    }
    std::size_t verified = 0, mutants = 0;
    for (std::size_t i = 0; i < certs.size(); ++i) {
        bool good = verify_certificate_text(certs[i]).ok;
        note(good, "certificate " + std::to_string(i) + " verifies");
        verified += good;
        auto res = mutation_suite(certs[i], kMutationsPerKind, static_cast<unsigned>(i + 1));
        mutants += res.tried;
        for (const auto& f : res.accepted) note(false, "mutant accepted: " + f);
        for (const auto& f : res.unstructured) note(false, "mutant without reason: " + f);
    }
    d << verified << "/" << certs.size() << " certificates verified, " << mutants << " single-field mutants all rejected";
    return {ok, d.str()};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
        bool expected;
    };
    const std::vector<Criterion> criteria{
        {1, "ski fixture LP", ski, true},
        {2, "deterministic baseline", deterministic, true},
        {3, "randomized lower bound 7/6", randomized, true},
        {4, "upper-bound search 5/4", upper_bound, false},
        {5, "two-algorithm sweep bound", sweep_bound, false},
        {6, "duality triangle", duality, true},
        {7, "oracle equivalence", oracle_equivalence, true},
        {8, "monotonicity", monotone, true},
        {9, "robustness", robustness, true},
    };
    int unexpected = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << o.detail;
        if (o.pass != c.expected) {
            ++unexpected;
            std::cout << (o.pass ? " [unexpected pass]" : " [unexpected failure]");
        } else if (!o.pass) {
            std::cout << " [known]";
        }
        std::cout << std::endl;
    }
    return unexpected == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
