#pragma once

#include "kptau/tau_engine.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kptau {

// log of a tau series, layer by layer: from g tau_g = sum_{j=1}^g j F_j tau_{g-j},
// F_g = tau_g - (1/g) sum_{j<g} j F_j tau_{g-j}.
inline TauSeries free_energy(const TauSeries& tau) {
    if (tau.kind != SeriesKind::tau) throw std::invalid_argument("free_energy: expected a tau series");
    if (tau.layers.empty() || !(tau.layer(0) == TPolynomial::one()))
        throw std::invalid_argument("free_energy: layer 0 must be 1");
    TauSeries F{SeriesKind::free_energy, {TPolynomial{}}};
    for (int g = 1; g <= tau.gmax(); ++g) {
        TPolynomial acc;
        for (int j = 1; j < g; ++j) acc += (F.layer(j) * tau.layer(g - j)) * NPoly(j);
        F.layers.push_back(tau.layer(g) - acc * NPoly(Rational(1, g)));
    }
    return F;
}

// exp of a free-energy series (inverse of free_energy).
inline TauSeries exp_series(const TauSeries& F) {
    if (F.kind != SeriesKind::free_energy) throw std::invalid_argument("exp_series: expected a free-energy series");
    TauSeries tau{SeriesKind::tau, {TPolynomial::one()}};
    for (int g = 1; g <= F.gmax(); ++g) {
        TPolynomial acc;
        for (int j = 1; j <= g; ++j) acc += (F.layer(j) * tau.layer(g - j)) * NPoly(j);
        tau.layers.push_back(acc * NPoly(Rational(1, g)));
    }
    return tau;
}

// Sets N = 0 and checks that no even time survives.
inline TauSeries kw_specialize(const TauSeries& s) {
    TauSeries out = eval_N(s, Rational(0));
    for (const auto& layer : out.layers)
        for (const auto& [m, c] : layer.terms())
            for (auto [k, e] : m.factors())
                if (k % 2 == 0)
                    throw std::logic_error("kw_specialize: even-time monomial " + m.to_string() + " survives at N = 0");
    return out;
}

// t_{2k+1} = T_k / (2k+1)!!,  t_{2k+2} = S_k / (2^{k+1} (k+1)!)
inline Rational time_scale(int t_index) {
    if (t_index < 1) throw std::invalid_argument("time_scale: index must be >= 1");
    Rational r(1);
    if (t_index % 2 == 1) {
        for (int j = t_index; j > 1; j -= 2) r *= Rational(j);
    } else {
        int k = t_index / 2 - 1;
        r = pow(Rational(2), k + 1) * factorial(k + 1);
    }
    return Rational(1) / r;
}

// Descendant content of a t-monomial: T_k for odd t_{2k+1}, S_k for even t_{2k+2}.
struct GeometricMonomial {
    std::vector<int> alphas;  // interior descendants, sorted
    std::vector<int> betas;   // boundary descendants, sorted
    friend auto operator<=>(const GeometricMonomial&, const GeometricMonomial&) = default;
};

inline GeometricMonomial to_geometric(const TMonomial& m) {
    GeometricMonomial g;
    for (auto [k, e] : m.factors())
        for (int i = 0; i < e; ++i) (k % 2 == 1 ? g.alphas : g.betas).push_back(k % 2 == 1 ? (k - 1) / 2 : k / 2 - 1);
    return g;
}

inline TMonomial from_geometric(const GeometricMonomial& g) {
    TMonomial m;
    for (int a : g.alphas) m.multiply_var(2 * a + 1, 1);
    for (int b : g.betas) m.multiply_var(2 * b + 2, 1);
    return m;
}

// Coefficient of the T/S-monomial: the t-coefficient divided by the variable scales.
inline NPoly geometric_coefficient(const TMonomial& m, const NPoly& c) {
    Rational f(1);
    for (auto [k, e] : m.factors()) f *= pow(time_scale(k), e);
    return c * f;
}

inline std::map<GeometricMonomial, NPoly> to_geometric_times(const TauSeries& F) {
    std::map<GeometricMonomial, NPoly> out;
    for (const auto& layer : F.layers)
        for (const auto& [m, c] : layer.terms()) out.emplace(to_geometric(m), geometric_coefficient(m, c));
    return out;
}

struct CorrelatorKey {
    std::vector<int> alphas;
    std::vector<int> betas;
    int h = 0;
    int b = 0;

    void normalize() {
        std::sort(alphas.begin(), alphas.end());
        std::sort(betas.begin(), betas.end());
    }
    [[nodiscard]] int k() const { return static_cast<int>(betas.size()); }
    [[nodiscard]] int l() const { return static_cast<int>(alphas.size()); }
    [[nodiscard]] int real_dimension() const { return 6 * h - 6 + 3 * b + k() + 2 * l(); }
    [[nodiscard]] int degree() const {
        int d = 0;
        for (int a : alphas) d += 2 * a;
        for (int x : betas) d += 2 * x;
        return d;
    }
    [[nodiscard]] bool stable() const { return 4 * h - 4 + 2 * b + k() + 2 * l() > 0; }
    friend auto operator<=>(const CorrelatorKey&, const CorrelatorKey&) = default;
};

struct CorrelatorValue {
    Rational value;
    bool dimension_ok = true;  // 6h-6+3b+k+2l = 2 sum alpha + 2 sum beta
    bool even_dimension = true;
    bool in_range = true;  // the key's hbar layer lies within the series
};

inline Rational symmetry_factor(const std::vector<int>& xs) {
    Rational f(1);
    std::map<int, int> mult;
    for (int x : xs) ++mult[x];
    for (auto [x, e] : mult) f *= factorial(e);
    return f;
}

// <tau_alphas sigma_betas>_{h,b}: coefficient of N^b times the T/S-monomial
// in F, times the multiplicity factorials.
inline CorrelatorValue correlator(const TauSeries& F, CorrelatorKey key) {
    key.normalize();
    CorrelatorValue out;
    out.even_dimension = (3 * key.b + key.k()) % 2 == 0;
    out.dimension_ok = key.real_dimension() == key.degree();
    if (!out.even_dimension || !out.dimension_ok) {
        out.value = Rational(0);
        return out;
    }
    TMonomial m = from_geometric({key.alphas, key.betas});
    // the dimension constraint makes the weight 3(2h - 2 + b + k + l)
    if (m.weight() % 3 != 0 || 2 * key.h - 2 + key.b + key.k() + key.l() != m.weight() / 3)
        throw std::logic_error("correlator: dimension formula and layer disagree");
    int g = m.weight() / 3;
    if (g > F.gmax()) {
        out.in_range = false;
        out.value = Rational(0);
        return out;
    }
    NPoly c = geometric_coefficient(m, F.layer(g).coefficient(m));
    out.value = c.coefficient(key.b) * symmetry_factor(key.alphas) * symmetry_factor(key.betas);
    return out;
}

struct CorrelatorRow {
    CorrelatorKey key;
    Rational value;
};

// Every nonzero correlator stored in F, in canonical key order. Asserts the
// hbar bookkeeping: h must come out a nonnegative integer.
inline std::vector<CorrelatorRow> correlator_table(const TauSeries& F) {
    std::vector<CorrelatorRow> rows;
    for (int g = 0; g <= F.gmax(); ++g) {
        for (const auto& [m, c] : F.layer(g).terms()) {
            GeometricMonomial gm = to_geometric(m);
            NPoly gc = geometric_coefficient(m, c);
            for (int b = 0; b <= gc.degree(); ++b) {
                Rational v = gc.coefficient(b);
                if (v.is_zero()) continue;
                int kl = static_cast<int>(gm.alphas.size() + gm.betas.size());
                int twice_h = g + 2 - b - kl;
                if (twice_h < 0 || twice_h % 2 != 0)
                    throw std::logic_error("correlator_table: non-integral genus for " + m.to_string() + " N^" +
                                           std::to_string(b));
                CorrelatorKey key{gm.alphas, gm.betas, twice_h / 2, b};
                if (key.real_dimension() != key.degree())
                    throw std::logic_error("correlator_table: dimension constraint violated by " + m.to_string());
                rows.push_back({key, v * symmetry_factor(gm.alphas) * symmetry_factor(gm.betas)});
            }
        }
    }
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.key < y.key; });
    return rows;
}

}  // namespace kptau
