#include <doctest.h>

#include <random>

#include "obs/error.hpp"
#include "obs/lp.hpp"
#include "obs/solver.hpp"
#include "obs/verify.hpp"
#include "oracle.hpp"

using namespace obs;

TEST_CASE("simplex: tight single bound") {
    // min u  s.t.  3/2 x - u <= 0,  x = 1
    lp::LinearProgram p;
    p.num_vars = 2;
    p.objective = {1, 0};
    p.free = {true, false};
    p.rows.push_back({{{0, Rational(-1)}, {1, Rational(3, 2)}}, lp::Sense::LessEqual, Rational(0)});
    p.rows.push_back({{{1, Rational(1)}}, lp::Sense::Equal, Rational(1)});
    auto r = lp::solve(p);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.value == Rational(3, 2));
    CHECK(r.primal[0] == Rational(3, 2));
}

TEST_CASE("simplex: infeasible and unbounded") {
    lp::LinearProgram p;
    p.num_vars = 1;
    p.objective = {1};
    p.free = {false};
    p.rows.push_back({{{0, Rational(1)}}, lp::Sense::Equal, Rational(-1)});
    CHECK(lp::solve(p).status == lp::Status::Infeasible);
    lp::LinearProgram q;
    q.num_vars = 1;
    q.objective = {-1};
    q.free = {false};
    q.rows.push_back({{{0, Rational(1)}}, lp::Sense::GreaterEqual, Rational(1)});
    CHECK(lp::solve(q).status == lp::Status::Unbounded);
}

TEST_CASE("simplex: pivot budget") {
    auto d = to_dual(build_lp(build_tree(2, 3, true)));
    lp::SimplexOptions o;
    o.pivot_budget = 3;
    CHECK(lp::solve(d.program, o).status == lp::Status::BudgetExceeded);
}

TEST_CASE("simplex agrees with the dense oracle on random matrix games") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
        std::vector<std::vector<Rational>> a(r, std::vector<Rational>(c));
        for (auto& row : a)
            for (auto& v : row) v = Rational(1 + static_cast<long>(rng() % 9), 1 + static_cast<long>(rng() % 3));
        // min u s.t. sum_i x_i a_ij - u <= 0, sum x = 1
        lp::LinearProgram p;
        p.num_vars = 1 + r;
        p.objective.assign(1 + r, Rational(0));
        p.objective[0] = Rational(1);
        p.free.assign(1 + r, false);
        p.free[0] = true;
        for (std::size_t j = 0; j < c; ++j) {
            lp::Row row{{{0, Rational(-1)}}, lp::Sense::LessEqual, Rational(0)};
            for (std::size_t i = 0; i < r; ++i) row.coeffs.emplace_back(1 + i, a[i][j]);
            p.rows.push_back(row);
        }
        lp::Row sum{{}, lp::Sense::Equal, Rational(1)};
        for (std::size_t i = 0; i < r; ++i) sum.coeffs.emplace_back(1 + i, Rational(1));
        p.rows.push_back(sum);
        for (bool lex : {false, true}) {
            lp::SimplexOptions o;
            o.lexicographic = lex;
            auto res = lp::solve(p, o);
            REQUIRE(res.status == lp::Status::Optimal);
            CHECK(res.value == oracle::solve_matrix_game(a).value);
            // duals of the column rows form the maximizer's optimal mixture
            Rational total(0);
            for (std::size_t j = 0; j < c; ++j) {
                CHECK(res.duals[j].sign() <= 0);
                total -= res.duals[j];
            }
            CHECK(total == Rational(1));
        }
    }
}

TEST_CASE("ski optimum") {
    auto lp = build_lp(ski_fixture());
    auto sol = solve_exact(to_dual(lp));
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(abs(sol.u - Rational(-48, 100)) <= Rational(1, 100));
    CHECK(sol.u == Rational(-12, 25));
    CHECK(sol.x[6] == Rational(0));
    CHECK(sol.x[8] == Rational(0));
    // E x = e and u >= C^T x
    auto E = dense(lp.E, lp.num_rows(), lp.num_x);
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
        Rational s(0);
        for (std::size_t c = 0; c < lp.num_x; ++c) s += E[r][c] * sol.x[c];
        CHECK(s == lp.e[r]);
    }
    auto C = dense(lp.C, lp.num_x, lp.num_y());
    for (std::size_t j = 0; j < lp.num_y(); ++j) {
        Rational s(0);
        for (std::size_t i = 0; i < lp.num_x; ++i) s += C[i][j] * sol.x[i];
        CHECK(s <= sol.u);
    }
    Rational ysum(0);
    for (const auto& v : sol.y) {
        CHECK(v.sign() >= 0);
        ysum += v;
    }
    CHECK(ysum == Rational(1));

    auto strat = extract_behavioral(sol.x, lp);
    CHECK(strat.keying == StrategyKeying::History);
    // set of x7, x8: day one C, weather S
    auto it = strat.table.find(history_key({1}, {2}));
    REQUIRE(it != strat.table.end());
    CHECK(it->second[0] == Rational(0));
    auto jt = strat.table.find(history_key({2}, {2}));
    REQUIRE(jt != strat.table.end());
    CHECK(jt->second[0] == Rational(0));
    CHECK(worst_case_on_tree(ski_fixture(), strat) == sol.u);
    CHECK(best_response_on_tree(ski_fixture(), mix_from_solution(sol, lp)) == sol.u);
}

TEST_CASE("matching pennies optimum") {
    auto lp = build_lp(matching_pennies_fixture());
    auto sol = solve_exact(to_dual(lp));
    CHECK(sol.u == Rational(1, 2));
    CHECK(sol.x == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    auto strat = extract_behavioral(sol.x, lp);
    REQUIRE(strat.table.size() == 1);
    CHECK(strat.table.begin()->second == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
}

TEST_CASE("behavioral extraction") {
    auto lp = build_lp(build_tree(2, 1, false));
    REQUIRE(lp.num_x == 6);
    // variables are numbered depth first: root bin 1, its follow-ups, root bin 2, its follow-ups
    std::vector<Rational> half{Rational(1, 2), Rational(1, 2), Rational(0), Rational(1, 2), Rational(1, 4), Rational(1, 4)};
    auto s = extract_behavioral(half, lp);
    CHECK(s.table.at(history_key({1}, {})) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    CHECK(s.table.at(history_key({1, 1}, {1})) == std::vector<Rational>{Rational(1), Rational(0)});
    CHECK(s.table.at(history_key({1, 1}, {2})) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    // second set unreached: uniform
    std::vector<Rational> skew{Rational(0), Rational(0), Rational(0), Rational(1), Rational(0), Rational(1)};
    auto t = extract_behavioral(skew, lp);
    CHECK(t.table.at(history_key({1, 1}, {1})) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    CHECK(t.table.at(history_key({1, 1}, {2})) == std::vector<Rational>{Rational(0), Rational(1)});
}

TEST_CASE("lb_rand small values") {
    CHECK(lb_rand(1, 2).value == Rational(1));
    CHECK(lb_rand(2, 1).value == Rational(1));
    auto r = lb_rand(2, 3);
    CHECK(r.value <= Rational(4, 3));
    CHECK(r.value >= Rational(1));
    CHECK(r.value == oracle::matrix_game_value(2, 3));
}

TEST_CASE("randomization never hurts and refines along multiples") {
    for (auto [m, g] : {std::pair{1, 3}, {2, 1}, {2, 2}, {2, 3}, {3, 2}}) {
        auto r = lb_rand(m, g);
        CHECK_MESSAGE(r.value <= minmax_det(build_tree(m, g, true)), "m=" << m << " g=" << g);
    }
    CHECK(lb_rand(2, 1).value <= lb_rand(2, 2).value);
    CHECK(lb_rand(2, 2).value <= lb_rand(2, 4).value);
}

TEST_CASE("lb_rand node budget") {
    LbRandOptions o;
    o.node_budget = 50;
    CHECK_THROWS_AS(lb_rand(2, 4, o), BudgetExceeded);
}
