#pragma once

#include "kptau/linear_solve.hpp"
#include "kptau/operators.hpp"

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kptau {

enum class SeriesKind { tau, free_energy };

// Series in hbar: layers[g] is homogeneous of weight 3g.
struct TauSeries {
    SeriesKind kind = SeriesKind::tau;
    std::vector<TPolynomial> layers;

    [[nodiscard]] int gmax() const { return static_cast<int>(layers.size()) - 1; }
    [[nodiscard]] const TPolynomial& layer(int g) const { return layers.at(static_cast<std::size_t>(g)); }
    [[nodiscard]] TPolynomial total() const {
        TPolynomial out;
        for (const auto& l : layers) out += l;
        return out;
    }
    friend bool operator==(const TauSeries& a, const TauSeries& b) { return a.kind == b.kind && a.layers == b.layers; }
};

inline TauSeries eval_N(const TauSeries& s, const Rational& n) {
    TauSeries out{s.kind, {}};
    for (const auto& l : s.layers) out.layers.push_back(eval_N(l, n));
    return out;
}

using LayerCallback = std::function<void(const TauSeries&, int)>;

// tau^(g) = (1/g)(W1 tau^(g-1) + W2 tau^(g-2)), tau^(0) = 1. Layers already
// present in `resume` are kept; on_layer fires after each new layer.
inline TauSeries compute_tau_cutjoin(int gmax, const TauSeries* resume = nullptr, const LayerCallback& on_layer = {}) {
    if (gmax < 0) throw std::invalid_argument("compute_tau_cutjoin: gmax < 0");
    TauSeries tau;
    if (resume != nullptr) {
        if (resume->kind != SeriesKind::tau || resume->layers.empty())
            throw std::invalid_argument("compute_tau_cutjoin: resume series is not a tau series");
        tau = *resume;
        if (tau.gmax() > gmax) tau.layers.resize(static_cast<std::size_t>(gmax) + 1);
    } else {
        tau.layers.push_back(TPolynomial::one());
    }
    int start = tau.gmax() + 1;
    if (start > gmax) return tau;
    Operator W1 = build_W1(3 * (gmax - 1));
    Operator W2 = build_W2(std::max(0, 3 * (gmax - 2)));
    for (int g = start; g <= gmax; ++g) {
        TPolynomial next = apply(W1, tau.layer(g - 1));
        if (g >= 2) next += apply(W2, tau.layer(g - 2));
        next *= NPoly(Rational(1, g));
        tau.layers.push_back(std::move(next));
        if (on_layer) on_layer(tau, g);
    }
    return tau;
}

// Per-layer record of the constraint system used by the linear route.
struct LayerManifest {
    int g = 0;
    std::pair<int, int> L_range{-1, -1};  // Lsf_k, k in [first, second]
    std::pair<int, int> M_range{-2, -2};  // Msf_k
    int unknowns = 0;
    int equations = 0;
    int rank = 0;
    bool unique = false;
    bool sampled = false;
    std::string status;
};

struct LinearTau {
    TauSeries tau;
    std::vector<LayerManifest> manifest;
};

class LinearSolveError : public std::runtime_error {
public:
    LinearSolveError(const std::string& what, LinearTau partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    [[nodiscard]] const LinearTau& partial() const { return partial_; }

private:
    LinearTau partial_;
};

namespace detail {

inline int min_hbar(const Operator& op) {
    auto hs = op.hbar_powers();
    return hs.empty() ? 0 : hs.front();
}

// Rows of O tau = 0 at the hbar order where tau^(g) first enters (op must be
// built with its leading derivative kept, even if it kills weight 3g):
// O_{hmin} tau^(g) = - sum_{h > hmin} O_h tau^(g + hmin - h).
inline void add_constraint_rows(const Operator& op, const TauSeries& tau, int g,
                                const std::map<TMonomial, int>& column, LinearSystem& sys) {
    int hmin = min_hbar(op);
    std::map<TMonomial, SparseRow> rows;
    Operator lead = op.hbar_part(hmin);
    for (const auto& [u, col] : column) {
        TPolynomial img = apply(lead, u);
        for (const auto& [r, c] : img.terms()) {
            auto [it, ins] = rows.try_emplace(r);
            it->second.entries.emplace(col, c);
        }
    }
    for (int h : op.hbar_powers()) {
        if (h == hmin) continue;
        int layer = g + hmin - h;
        if (layer < 0) continue;
        TPolynomial known = apply(op.hbar_part(h), tau.layer(layer));
        for (const auto& [r, c] : known.terms()) rows[r].rhs -= c;
    }
    for (auto& [r, row] : rows) sys.rows.push_back(std::move(row));
}

}  // namespace detail

// Solves Lsf_k tau = 0 (k >= -1) and Msf_k tau = 0 (k >= -2) layer by layer.
// Per layer the ranges cover every constraint whose leading derivative can
// reach weight 3g, plus one more of each family as a consistency check.
inline LinearTau compute_tau_linear(int gmax, const LayerCallback& on_layer = {}) {
    if (gmax < 0) throw std::invalid_argument("compute_tau_linear: gmax < 0");
    LinearTau out;
    out.tau.layers.push_back(TPolynomial::one());
    out.manifest.push_back(LayerManifest{0, {-1, -2}, {-2, -3}, 0, 0, 0, true, false, "initial condition"});
    for (int g = 1; g <= gmax; ++g) {
        const int w = 3 * g;
        auto monos = monomials_of_weight(w);
        std::map<TMonomial, int> column;
        for (std::size_t i = 0; i < monos.size(); ++i) column.emplace(monos[i], static_cast<int>(i));

        LayerManifest man;
        man.g = g;
        man.unknowns = static_cast<int>(monos.size());
        auto floor_half = [](int a) { return a >= 0 ? a / 2 : -((1 - a) / 2); };
        man.L_range = {-1, floor_half(w - 3) + 1};  // 2k + 3 <= w, plus one
        man.M_range = {-2, floor_half(w - 6) + 1};  // 2k + 6 <= w, plus one

        LinearSystem sys{man.unknowns, {}};
        for (int k = man.L_range.first; k <= man.L_range.second; ++k)
            detail::add_constraint_rows(build_Lsf(k, std::max(w, 2 * k + 3)), out.tau, g, column, sys);
        for (int k = man.M_range.first; k <= man.M_range.second; ++k)
            detail::add_constraint_rows(build_Msf(k, std::max(w, 2 * k + 6)), out.tau, g, column, sys);
        man.equations = static_cast<int>(sys.rows.size());

        SolveResult res = solve(sys);
        man.rank = res.rank;
        man.sampled = res.sampled;
        man.unique = res.status == SolveResult::Status::unique;
        switch (res.status) {
            case SolveResult::Status::unique: man.status = "unique"; break;
            case SolveResult::Status::inconsistent: man.status = "inconsistent: " + res.detail; break;
            case SolveResult::Status::underdetermined: man.status = "underdetermined: " + res.detail; break;
        }
        out.manifest.push_back(man);
        if (!man.unique)
            throw LinearSolveError("compute_tau_linear: layer " + std::to_string(g) + " " + man.status, out);

        TPolynomial layer;
        for (std::size_t i = 0; i < monos.size(); ++i) layer.add(monos[i], res.solution[i]);
        out.tau.layers.push_back(std::move(layer));
        if (on_layer) on_layer(out.tau, g);
    }
    return out;
}

// ---- verification ------------------------------------------------------------

struct ResidualEntry {
    OperatorName op;
    int requested_weight = 0;
    int max_weight_checked = 0;  // largest weight at which the residual can be nonzero and was computed
    bool complete = false;       // every weight <= requested was covered by the available layers
    TPolynomial residual;
    bool pass = false;
};

struct VerificationReport {
    std::vector<ResidualEntry> entries;

    [[nodiscard]] bool pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    [[nodiscard]] const ResidualEntry* first_failure() const {
        for (const auto& e : entries)
            if (!e.pass) return &e;
        return nullptr;
    }
};

namespace detail {

inline int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// generous cutoff so the leading derivative, and with it hmin, is never dropped
inline Operator residual_operator(const OperatorName& name, int G) {
    return build(name, std::max(0, 3 * G) + 2 * std::abs(name.index) + 8);
}

}  // namespace detail

// Residual of op on tau up to weight W. An operator with graded shift s sends
// the hbar^G part of the result to weight 3G + s and needs layers up to
// G - hmin, so the check is complete when those layers exist. With eval_n the
// operator is specialised to that N (for series stored at a fixed N).
inline ResidualEntry residual(const OperatorName& name, const TauSeries& tau, int W,
                              const std::optional<Rational>& eval_n = std::nullopt) {
    const int G = tau.gmax();
    Operator op = detail::residual_operator(name, G);
    ResidualEntry e;
    e.op = name;
    e.requested_weight = W;
    int s = op.weight_shift();
    int hmin = detail::min_hbar(op);
    int wanted = detail::floor_div(W - s, 3);
    int available = G + hmin;
    int top = std::min(wanted, available);
    e.complete = available >= wanted;
    e.max_weight_checked = 3 * top + s;
    if (eval_n) op = eval_N(op, *eval_n);
    e.residual = e.max_weight_checked >= 0 ? apply(op, tau.total(), e.max_weight_checked) : TPolynomial{};
    e.pass = e.residual.is_zero() && e.complete;
    return e;
}

// Largest W for which residual(name, tau, W) is complete given layers 0..G.
inline int max_complete_weight(const OperatorName& name, int G) {
    Operator op = detail::residual_operator(name, G);
    return 3 * (G + detail::min_hbar(op)) + op.weight_shift() + 2;
}

inline VerificationReport verify_annihilation(const TauSeries& tau, const std::vector<OperatorName>& ops, int W,
                                              const std::optional<Rational>& eval_n = std::nullopt) {
    VerificationReport rep;
    for (const auto& name : ops) rep.entries.push_back(residual(name, tau, W, eval_n));
    return rep;
}

// Lsf_k, k in l_range; Msf_k, k in m_range; and the free-field CalL_N, CalM_N
// on the same ranges.
inline std::vector<OperatorName> constraint_operators(std::pair<int, int> l_range, std::pair<int, int> m_range,
                                                      bool free_field = true) {
    std::vector<OperatorName> ops;
    for (int k = l_range.first; k <= l_range.second; ++k) ops.push_back(op_name(Family::Lsf, k));
    for (int k = m_range.first; k <= m_range.second; ++k) ops.push_back(op_name(Family::Msf, k));
    if (free_field) {
        for (int k = l_range.first; k <= l_range.second; ++k) ops.push_back(op_name(Family::CalL_N, k));
        for (int k = m_range.first; k <= m_range.second; ++k) ops.push_back(op_name(Family::CalM_N, k));
    }
    return ops;
}

struct DegreeEntry {
    int g = 0;
    bool pass = false;
};

// D tau^(g) = g tau^(g)
inline std::vector<DegreeEntry> degree_check(const TauSeries& tau) {
    std::vector<DegreeEntry> out;
    Operator D = build_D(std::max(0, 3 * tau.gmax()));
    for (int g = 0; g <= tau.gmax(); ++g) {
        TPolynomial lhs = apply(D, tau.layer(g));
        out.push_back({g, lhs == tau.layer(g) * NPoly(g)});
    }
    return out;
}

// Weight shift of op on every basis monomial of weight <= W: true when each
// image is homogeneous of weight(m) + shift.
inline bool shifts_weight_by(const Operator& op, int shift, int W) {
    for (const auto& m : monomial_basis(W)) {
        TPolynomial img = apply(op, m);
        if (!img.is_homogeneous(m.weight() + shift)) return false;
    }
    return true;
}

}  // namespace kptau
