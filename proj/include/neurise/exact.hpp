#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "neurise/model.hpp"
#include "neurise/samples.hpp"

namespace neurise {

using EnergyFn = std::function<double(const Config&)>;

/// Full Gibbs distribution over [q]^p, indexed by the mixed-radix encoding
/// of configurations (site 0 is the least significant digit).
struct ExactDistribution {
    int p = 0;
    Alphabet alphabet;
    std::vector<double> probs;
};

std::uint64_t encode_config(const Config& config, int q);
Config decode_config(std::uint64_t index, int p, int q);

/// Number of states q^p, or throws capacity_error when p*log2(q) exceeds
/// the cap (default 2^24 states).
std::uint64_t state_count(int p, int q, std::uint64_t cap = (1ull << 24));

/// Enumerates all states, exponentiates the energy with log-sum-exp
/// normalization. Throws capacity_error beyond the cap.
ExactDistribution exact_distribution(const EnergyFn& energy, int p, const Alphabet& alphabet,
                                     std::uint64_t cap = (1ull << 24));
ExactDistribution exact_distribution(const EnergyModel& model,
                                     std::uint64_t cap = (1ull << 24));

/// n i.i.d. draws by inverse CDF. Deterministic under seed.
SampleSet exact_sample(const ExactDistribution& dist, std::size_t n, std::uint64_t seed);

/// Conditional distribution of variable u given the rest of config (the
/// value at u is ignored): softmax over s of H(config with sigma_u = s).
std::vector<double> true_conditional(const EnergyModel& model, int u, const Config& config);

}  // namespace neurise
