#include "obs/lp.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace obs::lp {

std::string to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::BudgetExceeded: return "budget-exceeded";
    }
    return "unknown";
}

namespace {

struct Entry {
    int col;
    mpq_class v;
};
using SparseRow = std::vector<Entry>;

const mpq_class* find(const SparseRow& row, int col) {
    auto it = std::lower_bound(row.begin(), row.end(), col, [](const Entry& e, int c) { return e.col < c; });
    return (it != row.end() && it->col == col) ? &it->v : nullptr;
}

// row := row - f * pivot
void axpy(SparseRow& row, const mpq_class& f, const SparseRow& pivot, SparseRow& scratch) {
    scratch.clear();
    scratch.reserve(row.size() + pivot.size());
    std::size_t i = 0, j = 0;
    mpq_class t;
    while (i < row.size() || j < pivot.size()) {
        if (j == pivot.size() || (i < row.size() && row[i].col < pivot[j].col)) {
            scratch.push_back(std::move(row[i++]));
        } else if (i == row.size() || pivot[j].col < row[i].col) {
            t = -f * pivot[j].v;
            scratch.push_back(Entry{pivot[j].col, t});
            ++j;
        } else {
            t = row[i].v - f * pivot[j].v;
            if (sgn(t) != 0) scratch.push_back(Entry{row[i].col, t});
            ++i;
            ++j;
        }
    }
    row.swap(scratch);
}

class Tableau {
public:
    std::vector<SparseRow> rows;
    std::vector<mpq_class> rhs;
    std::vector<int> basis;
    SparseRow cost;  // reduced costs
    mpq_class z;     // objective value of the current basis
    int ncols = 0;
    std::vector<char> forbidden;  // columns that may not enter
    std::uint64_t pivots = 0;

    void pivot(std::size_t r, int q) {
        ++pivots;
        SparseRow& prow = rows[r];
        mpq_class inv = 1 / *find(prow, q);
        for (auto& e : prow) e.v *= inv;
        rhs[r] *= inv;
        SparseRow scratch;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r) continue;
            const mpq_class* a = find(rows[i], q);
            if (!a) continue;
            mpq_class f = *a;
            axpy(rows[i], f, prow, scratch);
            rhs[i] -= f * rhs[r];
        }
        if (const mpq_class* d = find(cost, q)) {
            mpq_class f = *d;
            z += f * rhs[r];
            axpy(cost, f, prow, scratch);
        }
        basis[r] = q;
    }

    // Returns Optimal, Unbounded or BudgetExceeded.
    Status optimize(const SimplexOptions& opts, std::uint64_t& budget_used) {
        int streak = 0;
        while (true) {
            if (budget_used >= opts.pivot_budget) return Status::BudgetExceeded;
            bool bland = streak >= opts.degenerate_streak;
            int q = -1;
            const mpq_class* best = nullptr;
            for (const auto& e : cost) {
                if (sgn(e.v) >= 0 || forbidden[static_cast<std::size_t>(e.col)]) continue;
                if (bland) {
                    q = e.col;
                    break;
                }
                if (!best || e.v < *best) {
                    best = &e.v;
                    q = e.col;
                }
            }
            if (q < 0) return Status::Optimal;

            std::optional<std::size_t> leave;
            mpq_class best_ratio;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const mpq_class* a = find(rows[i], q);
                if (!a || sgn(*a) <= 0) continue;
                mpq_class ratio = rhs[i] / *a;
                if (!leave || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[*leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (!leave) return Status::Unbounded;
            streak = sgn(best_ratio) == 0 ? streak + 1 : 0;
            pivot(*leave, q);
            ++budget_used;
        }
    }
};

}  // namespace

SimplexResult solve(const LinearProgram& program, const SimplexOptions& opts) {
    const std::size_t n = program.num_vars;
    const std::size_t m = program.rows.size();
    if (program.objective.size() != n || program.free.size() != n)
        throw std::invalid_argument("linear program objective/free size mismatch");

    // Column layout: structural (+ negative parts of free vars), slacks, artificials.
    std::vector<int> pos_col(n), neg_col(n, -1);
    int ncols = 0;
    for (std::size_t j = 0; j < n; ++j) pos_col[j] = ncols++;
    for (std::size_t j = 0; j < n; ++j)
        if (program.free[j]) neg_col[j] = ncols++;

    Tableau t;
    t.rows.resize(m);
    t.rhs.resize(m);
    t.basis.assign(m, -1);
    std::vector<int> identity_col(m, -1);
    std::vector<int> row_sign(m, 1);
    std::vector<char> is_art;
    std::vector<std::pair<std::size_t, int>> slack_cols;  // row, coefficient

    for (std::size_t i = 0; i < m; ++i) {
        const Row& row = program.rows[i];
        int sign = row.rhs.sign() < 0 ? -1 : 1;
        row_sign[i] = sign;
        SparseRow sr;
        for (const auto& [j, v] : row.coeffs) {
            if (j >= n) throw std::invalid_argument("row references unknown variable");
            if (v.is_zero()) continue;
            mpq_class c = sign * v.raw();
            sr.push_back(Entry{pos_col[j], c});
            if (neg_col[j] >= 0) sr.push_back(Entry{neg_col[j], -c});
        }
        std::sort(sr.begin(), sr.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
        // merge duplicate columns
        SparseRow merged;
        for (auto& e : sr) {
            if (!merged.empty() && merged.back().col == e.col)
                merged.back().v += e.v;
            else
                merged.push_back(std::move(e));
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Entry& e) { return sgn(e.v) == 0; }),
                     merged.end());
        t.rows[i] = std::move(merged);
        t.rhs[i] = sign * row.rhs.raw();
        Sense s = row.sense;
        if (sign < 0 && s != Sense::Equal) s = s == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
        if (s == Sense::LessEqual) slack_cols.emplace_back(i, +1);
        if (s == Sense::GreaterEqual) slack_cols.emplace_back(i, -1);
    }
    for (auto& [i, c] : slack_cols) {
        int col = ncols++;
        t.rows[i].push_back(Entry{col, mpq_class(c)});
        if (c > 0) identity_col[i] = col;
    }
    is_art.assign(static_cast<std::size_t>(ncols), 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (identity_col[i] >= 0) continue;
        int col = ncols++;
        is_art.push_back(1);
        t.rows[i].push_back(Entry{col, mpq_class(1)});
        identity_col[i] = col;
    }
    t.ncols = ncols;
    for (std::size_t i = 0; i < m; ++i) t.basis[i] = identity_col[i];
    t.forbidden.assign(static_cast<std::size_t>(ncols), 0);

    SimplexResult res;
    std::uint64_t used = 0;

    // Phase 1: minimize the sum of artificials.
    {
        std::vector<mpq_class> d(static_cast<std::size_t>(ncols));
        t.z = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_art[static_cast<std::size_t>(t.basis[i])]) continue;
            t.z += t.rhs[i];
            for (const auto& e : t.rows[i])
                if (!is_art[static_cast<std::size_t>(e.col)]) d[static_cast<std::size_t>(e.col)] -= e.v;
        }
        t.cost.clear();
        for (int c = 0; c < ncols; ++c)
            if (sgn(d[static_cast<std::size_t>(c)]) != 0) t.cost.push_back(Entry{c, d[static_cast<std::size_t>(c)]});
        Status st = t.optimize(opts, used);
        if (st == Status::BudgetExceeded) {
            res.status = st;
            res.pivots = t.pivots;
            return res;
        }
        if (sgn(t.z) > 0) {
            res.status = Status::Infeasible;
            res.pivots = t.pivots;
            return res;
        }
    }

    // Drive zero-level artificials out of the basis; rows that cannot be
    // pivoted are redundant and dropped.
    std::vector<char> dropped(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (!is_art[static_cast<std::size_t>(t.basis[i])]) continue;
        int q = -1;
        for (const auto& e : t.rows[i])
            if (!is_art[static_cast<std::size_t>(e.col)]) {
                q = e.col;
                break;
            }
        if (q >= 0)
            t.pivot(i, q);
        else
            dropped[i] = 1;
    }
    for (int c = 0; c < ncols; ++c)
        if (is_art[static_cast<std::size_t>(c)]) t.forbidden[static_cast<std::size_t>(c)] = 1;

    // Phase 2.
    std::vector<mpq_class> cost(static_cast<std::size_t>(ncols));
    for (std::size_t j = 0; j < n; ++j) {
        cost[static_cast<std::size_t>(pos_col[j])] = program.objective[j].raw();
        if (neg_col[j] >= 0) cost[static_cast<std::size_t>(neg_col[j])] = -program.objective[j].raw();
    }
    {
        std::vector<mpq_class> d = cost;
        t.z = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (dropped[i]) continue;
            const mpq_class& cb = cost[static_cast<std::size_t>(t.basis[i])];
            if (sgn(cb) == 0) continue;
            t.z += cb * t.rhs[i];
            for (const auto& e : t.rows[i]) d[static_cast<std::size_t>(e.col)] -= cb * e.v;
        }
        t.cost.clear();
        for (int c = 0; c < ncols; ++c)
            if (sgn(d[static_cast<std::size_t>(c)]) != 0) t.cost.push_back(Entry{c, d[static_cast<std::size_t>(c)]});
    }
    // Dropped rows keep an artificial basic at level zero; exclude them from pivoting.
    if (std::any_of(dropped.begin(), dropped.end(), [](char c) { return c != 0; })) {
        for (std::size_t i = 0; i < m; ++i)
            if (dropped[i]) t.rows[i].clear();
    }
    Status st = t.optimize(opts, used);
    res.pivots = t.pivots;
    res.status = st;
    if (st != Status::Optimal) return res;

    // pi_i = c_col - d_col for the column that started as e_i.
    res.duals.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (dropped[i]) continue;
        int col = identity_col[i];
        const mpq_class* d = find(t.cost, col);
        mpq_class pi = cost[static_cast<std::size_t>(col)] - (d ? *d : mpq_class(0));
        res.duals[i] = Rational(mpq_class(row_sign[i] * pi));
    }

    if (opts.lexicographic) {
        // Maximize z_0, z_1, ... in turn over the optimal face.
        auto freeze = [&t] {
            for (const auto& e : t.cost)
                if (sgn(e.v) > 0) t.forbidden[static_cast<std::size_t>(e.col)] = 1;
        };
        freeze();
        std::vector<int> row_of(static_cast<std::size_t>(ncols), -1);
        for (std::size_t j = 0; j < n; ++j) {
            if (program.free[j]) continue;
            int col = pos_col[j];
            if (t.forbidden[static_cast<std::size_t>(col)]) continue;
            std::fill(row_of.begin(), row_of.end(), -1);
            for (std::size_t i = 0; i < m; ++i)
                if (!dropped[i]) row_of[static_cast<std::size_t>(t.basis[i])] = static_cast<int>(i);
            int r = row_of[static_cast<std::size_t>(col)];
            t.cost.clear();
            if (r < 0) {
                t.cost.push_back(Entry{col, mpq_class(-1)});
                t.z = 0;
            } else {
                for (const auto& e : t.rows[static_cast<std::size_t>(r)])
                    if (e.col != col) t.cost.push_back(e);
                t.z = -t.rhs[static_cast<std::size_t>(r)];
            }
            Status ls = t.optimize(opts, used);
            res.pivots = t.pivots;
            if (ls != Status::Optimal) {
                res.status = ls;
                return res;
            }
            freeze();
        }
    }

    std::vector<mpq_class> colval(static_cast<std::size_t>(ncols));
    for (std::size_t i = 0; i < m; ++i)
        if (!dropped[i]) colval[static_cast<std::size_t>(t.basis[i])] = t.rhs[i];
    res.primal.resize(n);
    Rational value(0);
    for (std::size_t j = 0; j < n; ++j) {
        mpq_class v = colval[static_cast<std::size_t>(pos_col[j])];
        if (neg_col[j] >= 0) v -= colval[static_cast<std::size_t>(neg_col[j])];
        res.primal[j] = Rational(v);
        value += program.objective[j] * res.primal[j];
    }
    res.value = value;
    return res;
}

}  // namespace obs::lp
