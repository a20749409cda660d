#include "neurise/gibbs.hpp"

#include <cmath>
#include <memory>

#include <omp.h>

#include "neurise/parallel.hpp"
#include "neurise/rng.hpp"

namespace neurise {

namespace {

Symbol draw_symbol(const std::vector<double>& dist, double u) {
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < dist.size(); ++s) {
        acc += dist[s];
        if (u < acc) return static_cast<Symbol>(s);
    }
    return static_cast<Symbol>(dist.size() - 1);
}

void check_distribution(const std::vector<double>& dist, int q) {
    if (dist.size() != static_cast<std::size_t>(q))
        throw contract_violation("conditional provider returned " + std::to_string(dist.size()) +
                                 " entries, expected " + std::to_string(q));
    double total = 0.0;
    for (double v : dist) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw contract_violation("conditional provider returned a non-positive probability");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw contract_violation("conditional provider probabilities sum to " +
                                 std::to_string(total));
}

}  // namespace

SampleSet gibbs_sample(const ConditionalProvider& provider, int p, const Alphabet& alphabet,
                       std::size_t n, const GibbsConfig& config) {
    if (n == 0) throw invalid_input("need at least one sample");
    const int burn_in = config.burn_in_sweeps >= 0 ? config.burn_in_sweeps : 10 * p;
    const int thinning = config.thinning_sweeps >= 1 ? config.thinning_sweeps : p;

    Rng rng(config.seed);
    Config state(static_cast<std::size_t>(p));
    for (auto& s : state) s = static_cast<Symbol>(rng.uniform_int(static_cast<std::uint64_t>(alphabet.q)));

    auto sweep = [&]() {
        for (int u = 0; u < p; ++u) {
            const std::vector<double> dist = provider(u, state);
            check_distribution(dist, alphabet.q);
            state[static_cast<std::size_t>(u)] = draw_symbol(dist, rng.uniform());
        }
    };

    for (int s = 0; s < burn_in; ++s) sweep();

    std::vector<Symbol> data;
    data.reserve(n * static_cast<std::size_t>(p));
    for (std::size_t t = 0; t < n; ++t) {
        for (int s = 0; s < thinning; ++s) sweep();
        data.insert(data.end(), state.begin(), state.end());
    }
    return SampleSet(p, alphabet, std::move(data));
}

SampleSet gibbs_sample_chains(const std::function<ConditionalProvider(int chain)>& make_provider,
                              int p, const Alphabet& alphabet, std::size_t n,
                              const GibbsConfig& config, int n_chains) {
    if (n_chains < 1) throw invalid_input("need at least one chain");
    if (static_cast<std::size_t>(n_chains) > n) n_chains = static_cast<int>(n);

    std::vector<SampleSet> parts;
    parts.reserve(static_cast<std::size_t>(n_chains));
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_chains), n / static_cast<std::size_t>(n_chains));
    for (std::size_t c = 0; c < n % static_cast<std::size_t>(n_chains); ++c) ++counts[c];

    std::vector<std::unique_ptr<SampleSet>> results(static_cast<std::size_t>(n_chains));
    const bool go = n_chains > 1 && max_threads() > 1 && !omp_in_parallel();
#pragma omp parallel for schedule(dynamic) num_threads(max_threads()) if (go)
    for (int c = 0; c < n_chains; ++c) {
        GibbsConfig chain_cfg = config;
        chain_cfg.seed = config.seed + static_cast<std::uint64_t>(c);
        const ConditionalProvider provider = make_provider(c);
        results[static_cast<std::size_t>(c)] = std::make_unique<SampleSet>(
            gibbs_sample(provider, p, alphabet, counts[static_cast<std::size_t>(c)], chain_cfg));
    }

    std::vector<Symbol> data;
    data.reserve(n * static_cast<std::size_t>(p));
    for (const auto& part : results)
        data.insert(data.end(), part->data().begin(), part->data().end());
    return SampleSet(p, alphabet, std::move(data));
}

}  // namespace neurise
