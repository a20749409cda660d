#pragma once

#include <cstdint>
#include <functional>

#include "neurise/samples.hpp"

namespace neurise {

/// Yields the conditional distribution of variable u given the rest of the
/// configuration. Must return q strictly positive entries summing to 1.
using ConditionalProvider = std::function<std::vector<double>(int u, const Config&)>;

/// Chain settings. Negative burn_in or thinning means "default for this p":
/// burn_in = 10*p sweeps, thinning = p sweeps between retained samples.
struct GibbsConfig {
    int burn_in_sweeps = -1;
    int thinning_sweeps = -1;
    std::uint64_t seed = 0;
};

/// Systematic-scan Gibbs sampler (site order 0..p-1 within a sweep).
/// Starts from a uniform random configuration; retains one configuration
/// per thinning interval after burn-in until n samples are collected.
SampleSet gibbs_sample(const ConditionalProvider& provider, int p, const Alphabet& alphabet,
                       std::size_t n, const GibbsConfig& config);

/// Runs n_chains independent chains with seeds seed+0 .. seed+chains-1 and
/// concatenates their outputs in chain order. Each chain burns in fully.
/// The factory is called once per chain so providers may own mutable
/// scratch state.
SampleSet gibbs_sample_chains(const std::function<ConditionalProvider(int chain)>& make_provider,
                              int p, const Alphabet& alphabet, std::size_t n,
                              const GibbsConfig& config, int n_chains);

}  // namespace neurise
