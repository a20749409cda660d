#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "neurise/alphabet.hpp"

namespace neurise {

enum class TermKind { monomial, indicator };

/// One basis function over a subset of sites, with an attached strength when
/// the term is part of an energy model.
///
/// monomial  (q = 2 only): product of the sites' spins.
/// indicator (any q):      product of centered indicators, one label per site.
struct BasisTerm {
    std::vector<int> sites;     // strictly increasing, all in [0, p)
    TermKind kind = TermKind::monomial;
    std::vector<Symbol> labels; // indicator only; same length as sites
    double strength = 0.0;
};

/// Value of the basis function at a full configuration. Ignores strength.
/// Throws invalid_input on an out-of-range site or symbol.
double eval_basis(const BasisTerm& term, const Config& config, const Alphabet& alphabet);

/// All basis terms of one kind that contain the center variable u and have
/// at most max_order sites, in lexicographic (|sites|, sites, labels) order.
struct PartialBasis {
    int u = 0;
    int p = 0;
    Alphabet alphabet;
    TermKind kind = TermKind::monomial;
    int max_order = 1;
    std::vector<BasisTerm> terms;
};

PartialBasis build_partial_basis(int p, const Alphabet& alphabet, int max_order, int u,
                                 TermKind kind);

/// Streaming variant: visits the same terms in the same order without
/// storing them. Used for counting checks at sizes where materializing the
/// basis would be wasteful.
void for_each_partial_term(int p, const Alphabet& alphabet, int max_order, int u, TermKind kind,
                           const std::function<void(const BasisTerm&)>& visit);

/// Closed-form size of build_partial_basis output.
///   monomial : sum_{k=0}^{L-1} C(p-1, k)
///   indicator: sum_{k=1}^{L} C(p-1, k-1) * q^k
std::uint64_t count_grise_params(int p, int q, int max_order, TermKind kind);

/// Exact binomial coefficient; throws invalid_input on uint64 overflow.
std::uint64_t binomial(int n, int k);

}  // namespace neurise
