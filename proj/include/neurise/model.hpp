#pragma once

#include <cstdint>
#include <vector>

#include "neurise/basis.hpp"

namespace neurise {

/// Explicit energy function H(sigma) = sum_k strength_k * g_k(sigma) over a
/// list of basis terms. The Gibbs distribution it induces is
/// exp(H(sigma)) / Z.
struct EnergyModel {
    int p = 0;
    Alphabet alphabet;
    std::vector<BasisTerm> terms;

    EnergyModel() = default;
    EnergyModel(int p_, Alphabet alphabet_, std::vector<BasisTerm> terms_);
};

double eval_energy(const EnergyModel& model, const Config& config);

/// Checks site ranges, monomial/q compatibility and term uniqueness.
/// Throws invalid_input on violation.
void validate_model(const EnergyModel& model);

/// Translation-invariant binary chain with shared strength per order:
/// H = sum_{l=1}^{L} theta[l-1] * sum_{i=0}^{p-l} sigma_i ... sigma_{i+l-1}.
/// Term count is sum_l (p - l + 1).
EnergyModel gen_one_d_model(int p, int order, const std::vector<double>& theta);

/// Pairwise binary model on an Erdos-Renyi random graph: each unordered pair
/// is an edge independently with edge_probability; edge strengths are
/// uniform on [lo, hi]. Deterministic under seed.
EnergyModel gen_er_pairwise(int p, double edge_probability, double lo, double hi,
                            std::uint64_t seed);

/// Convenience: mean degree d maps to edge probability d / (p - 1).
inline double er_probability_from_degree(double mean_degree, int p) {
    return mean_degree / static_cast<double>(p - 1);
}

/// Binary hypergraph instance: one five-body term of strength 1/2 on sites
/// {0,2,4,6,8}, a closing pair {0, p-1}, and a chain of pairs {i, i+1},
/// with all pair strengths uniform on [lo, hi]. Requires p >= 15.
EnergyModel gen_hypergraph_model(int p, double lo, double hi, std::uint64_t seed);

/// Model with no terms (H identically zero): the independent uniform model.
EnergyModel gen_empty_model(int p, const Alphabet& alphabet);

}  // namespace neurise
