#pragma once

#include "kptau/npoly.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace kptau {

// Sparse linear system over Q[N]: rows of (column -> coefficient) = rhs.
struct SparseRow {
    std::map<int, NPoly> entries;
    NPoly rhs;
};

struct LinearSystem {
    int unknowns = 0;
    std::vector<SparseRow> rows;
};

struct SolveResult {
    enum class Status { unique, inconsistent, underdetermined };
    Status status = Status::unique;
    std::vector<NPoly> solution;  // filled when unique
    int rank = 0;
    bool sampled = false;  // N-dependent pivots forced the evaluation/interpolation path
    std::string detail;
};

namespace detail {

inline void axpy(SparseRow& row, const NPoly& c, const SparseRow& pivot) {
    for (const auto& [col, v] : pivot.entries) {
        auto [it, ins] = row.entries.try_emplace(col, NPoly{});
        it->second -= c * v;
        if (it->second.is_zero()) row.entries.erase(it);
    }
    row.rhs -= c * pivot.rhs;
}

// Gauss-Jordan elimination that only ever divides by nonzero constants.
// Rows whose surviving entries are all N-dependent are returned in `stuck`.
struct ConstantPivotElimination {
    std::map<int, SparseRow> pivots;  // pivot column -> row normalised to 1 there, free of other pivot columns
    std::vector<SparseRow> stuck;
    bool inconsistent = false;
    std::string detail;

    void reduce(SparseRow& row) const {
        std::vector<std::pair<int, NPoly>> hits;
        for (const auto& [col, v] : row.entries)
            if (pivots.count(col) != 0) hits.emplace_back(col, v);
        for (const auto& [col, v] : hits) axpy(row, v, pivots.at(col));
    }

    // true when the row was consumed (pivot, redundant or inconsistent)
    bool insert(SparseRow row) {
        reduce(row);
        if (row.entries.empty()) {
            if (!row.rhs.is_zero()) {
                inconsistent = true;
                if (detail.empty()) detail = "0 = " + row.rhs.to_string();
            }
            return true;
        }
        auto pick = row.entries.end();
        for (auto it = row.entries.begin(); it != row.entries.end(); ++it)
            if (it->second.is_constant()) {
                pick = it;
                break;
            }
        if (pick == row.entries.end()) return false;
        int col = pick->first;
        Rational inv = Rational(1) / pick->second.constant_term();
        for (auto& [c, v] : row.entries) v *= inv;
        row.rhs *= inv;
        for (auto& [pc, prow] : pivots) {
            auto it = prow.entries.find(col);
            if (it != prow.entries.end()) {
                NPoly f = it->second;
                axpy(prow, f, row);
            }
        }
        pivots.emplace(col, std::move(row));
        return true;
    }

    void run(const std::vector<SparseRow>& rows) {
        std::vector<SparseRow> pending;
        for (const auto& r : rows)
            if (!insert(r)) pending.push_back(r);
        // Later pivots may have made stuck rows constant-pivotable.
        bool progress = true;
        while (progress && !pending.empty()) {
            progress = false;
            std::vector<SparseRow> next;
            for (auto& r : pending) {
                if (insert(r)) progress = true;
                else next.push_back(std::move(r));
            }
            pending = std::move(next);
        }
        for (auto& r : pending) {
            reduce(r);
            stuck.push_back(std::move(r));
        }
    }
};

inline SolveResult solve_constant(const LinearSystem& sys) {
    ConstantPivotElimination el;
    el.run(sys.rows);
    SolveResult res;
    res.rank = static_cast<int>(el.pivots.size());
    if (el.inconsistent) {
        res.status = SolveResult::Status::inconsistent;
        res.detail = el.detail;
        return res;
    }
    if (!el.stuck.empty()) {
        res.status = SolveResult::Status::underdetermined;
        res.detail = "N-dependent pivots";
        return res;
    }
    if (res.rank < sys.unknowns) {
        res.status = SolveResult::Status::underdetermined;
        res.detail = "rank " + std::to_string(res.rank) + " < " + std::to_string(sys.unknowns) + " unknowns";
        return res;
    }
    res.solution.assign(sys.unknowns, NPoly{});
    for (const auto& [col, row] : el.pivots) res.solution[col] = row.rhs;
    return res;
}

inline LinearSystem eval_system(const LinearSystem& sys, const Rational& n) {
    LinearSystem out{sys.unknowns, {}};
    for (const auto& row : sys.rows) {
        SparseRow r;
        for (const auto& [c, v] : row.entries) {
            Rational x = v.eval(n);
            if (!x.is_zero()) r.entries.emplace(c, NPoly(x));
        }
        r.rhs = NPoly(row.rhs.eval(n));
        out.rows.push_back(std::move(r));
    }
    return out;
}

// Newton interpolation through (xs[i], ys[i]).
inline NPoly interpolate(const std::vector<Rational>& xs, std::vector<Rational> ys) {
    std::size_t n = xs.size();
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - j]);
    NPoly p;
    for (std::size_t i = n; i-- > 0;) p = p * NPoly{-xs[i], 1} + NPoly(ys[i]);
    return p;
}

inline bool satisfies(const LinearSystem& sys, const std::vector<NPoly>& x) {
    for (const auto& row : sys.rows) {
        NPoly lhs;
        for (const auto& [c, v] : row.entries) lhs += v * x[c];
        if (!(lhs == row.rhs)) return false;
    }
    return true;
}

}  // namespace detail

// Exact solve over Q[N]. Constant pivots are used directly; if only
// N-dependent pivots remain the system is solved at sample values of N,
// interpolated within the degree bound and verified by substitution.
inline SolveResult solve(const LinearSystem& sys) {
    SolveResult res = detail::solve_constant(sys);
    if (res.status != SolveResult::Status::underdetermined || res.detail != "N-dependent pivots") return res;

    int entry_deg = 0, rhs_deg = 0;
    for (const auto& row : sys.rows) {
        for (const auto& [c, v] : row.entries) entry_deg = std::max(entry_deg, v.degree());
        rhs_deg = std::max(rhs_deg, row.rhs.degree());
    }
    // Cramer: numerators have degree <= rhs_deg + (n-1)*entry_deg.
    int bound = std::max(0, rhs_deg + (sys.unknowns - 1) * entry_deg);
    std::vector<Rational> xs;
    std::vector<std::vector<Rational>> ys(sys.unknowns);
    int rank = 0;
    for (long n = 0; static_cast<int>(xs.size()) <= bound && n < 4L * (bound + 8); ++n) {
        SolveResult at = detail::solve_constant(detail::eval_system(sys, Rational(n)));
        if (at.status == SolveResult::Status::inconsistent) continue;
        rank = std::max(rank, at.rank);
        if (at.status != SolveResult::Status::unique) continue;
        xs.emplace_back(n);
        for (int i = 0; i < sys.unknowns; ++i) ys[i].push_back(at.solution[i].constant_term());
    }
    SolveResult out;
    out.sampled = true;
    out.rank = rank;
    if (static_cast<int>(xs.size()) <= bound) {
        out.status = SolveResult::Status::underdetermined;
        out.detail = "no unique solution at enough sample values of N";
        return out;
    }
    out.solution.resize(sys.unknowns);
    for (int i = 0; i < sys.unknowns; ++i) out.solution[i] = detail::interpolate(xs, ys[i]);
    if (!detail::satisfies(sys, out.solution)) {
        out.status = SolveResult::Status::inconsistent;
        out.detail = "interpolated solution is not polynomial in N";
        out.solution.clear();
    }
    return out;
}

}  // namespace kptau
