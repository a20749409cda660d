#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "neurise/basis.hpp"
#include "neurise/model.hpp"
#include "neurise/rng.hpp"

namespace neurise::test {

/// Strength of the truth term matching (sites, kind, labels), or 0.
inline double truth_strength(const EnergyModel& truth, const BasisTerm& term) {
    for (const BasisTerm& t : truth.terms) {
        if (t.kind == term.kind && t.sites == term.sites && t.labels == term.labels)
            return t.strength;
    }
    return 0.0;
}

/// Truth parameters laid out in the order of a partial basis.
inline std::vector<double> theta_star(const EnergyModel& truth, const PartialBasis& basis) {
    std::vector<double> theta(basis.terms.size());
    for (std::size_t k = 0; k < basis.terms.size(); ++k)
        theta[k] = truth_strength(truth, basis.terms[k]);
    return theta;
}

/// Central finite differences of a scalar function of a flat vector.
inline std::vector<double> finite_difference(const std::function<double(const std::vector<double>&)>& f,
                                             std::vector<double> x, double step) {
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + step;
        const double hi = f(x);
        x[i] = saved - step;
        const double lo = f(x);
        x[i] = saved;
        grad[i] = (hi - lo) / (2.0 * step);
    }
    return grad;
}

/// max_i |a_i - b_i| / max(1, |b_i|)
inline double max_rel_error(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max(1.0, std::abs(b[i]));
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

/// Random binary monomial model with unique terms of size <= max_order.
inline EnergyModel random_binary_model(int p, int n_terms, int max_order, Rng& rng) {
    std::vector<BasisTerm> terms;
    int guard = 0;
    while (static_cast<int>(terms.size()) < n_terms && guard++ < 1000) {
        const int size = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_order)));
        std::vector<int> sites;
        while (static_cast<int>(sites.size()) < size) {
            const int s = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(p)));
            bool dup = false;
            for (int x : sites) dup = dup || x == s;
            if (!dup) sites.push_back(s);
        }
        std::sort(sites.begin(), sites.end());
        bool seen = false;
        for (const BasisTerm& t : terms) seen = seen || t.sites == sites;
        if (seen) continue;
        BasisTerm t;
        t.kind = TermKind::monomial;
        t.sites = std::move(sites);
        t.strength = rng.uniform(-1.0, 1.0);
        terms.push_back(std::move(t));
    }
    return EnergyModel(p, Alphabet(2), std::move(terms));
}

inline Config random_config(int p, int q, Rng& rng) {
    Config c(static_cast<std::size_t>(p));
    for (auto& s : c) s = static_cast<Symbol>(rng.uniform_int(static_cast<std::uint64_t>(q)));
    return c;
}

}  // namespace neurise::test
