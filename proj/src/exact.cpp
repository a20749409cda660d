#include "neurise/exact.hpp"

#include <algorithm>
#include <cmath>

#include "neurise/parallel.hpp"
#include "neurise/rng.hpp"

namespace neurise {

std::uint64_t encode_config(const Config& config, int q) {
    std::uint64_t index = 0;
    std::uint64_t radix = 1;
    for (Symbol s : config) {
        index += radix * static_cast<std::uint64_t>(s);
        radix *= static_cast<std::uint64_t>(q);
    }
    return index;
}

Config decode_config(std::uint64_t index, int p, int q) {
    Config config(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        config[static_cast<std::size_t>(i)] = static_cast<Symbol>(index % static_cast<std::uint64_t>(q));
        index /= static_cast<std::uint64_t>(q);
    }
    return config;
}

std::uint64_t state_count(int p, int q, std::uint64_t cap) {
    std::uint64_t states = 1;
    for (int i = 0; i < p; ++i) {
        if (states > cap / static_cast<std::uint64_t>(q))
            throw capacity_error("q^p exceeds enumeration cap of " + std::to_string(cap) +
                                 " states (p=" + std::to_string(p) + ", q=" + std::to_string(q) + ")");
        states *= static_cast<std::uint64_t>(q);
    }
    return states;
}

ExactDistribution exact_distribution(const EnergyFn& energy, int p, const Alphabet& alphabet,
                                     std::uint64_t cap) {
    const std::uint64_t states = state_count(p, alphabet.q, cap);
    ExactDistribution dist;
    dist.p = p;
    dist.alphabet = alphabet;
    dist.probs.resize(states);
    std::vector<double>& logw = dist.probs;

    par::for_each(states, [&](std::size_t x) {
        logw[x] = energy(decode_config(x, p, alphabet.q));
    });

    const double peak = *std::max_element(logw.begin(), logw.end());
    const double total = par::sum(states, [&](std::size_t x) { return std::exp(logw[x] - peak); });
    const double log_z = peak + std::log(total);
    par::for_each(states, [&](std::size_t x) { logw[x] = std::exp(logw[x] - log_z); });
    return dist;
}

ExactDistribution exact_distribution(const EnergyModel& model, std::uint64_t cap) {
    return exact_distribution([&model](const Config& c) { return eval_energy(model, c); },
                              model.p, model.alphabet, cap);
}

SampleSet exact_sample(const ExactDistribution& dist, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw invalid_input("need at least one sample");
    std::vector<double> cdf(dist.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        acc += dist.probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    Rng rng(seed);
    std::vector<Symbol> data;
    data.reserve(n * static_cast<std::size_t>(dist.p));
    for (std::size_t t = 0; t < n; ++t) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::uint64_t x = static_cast<std::uint64_t>(it - cdf.begin());
        const Config c = decode_config(x, dist.p, dist.alphabet.q);
        data.insert(data.end(), c.begin(), c.end());
    }
    return SampleSet(dist.p, dist.alphabet, std::move(data));
}

std::vector<double> true_conditional(const EnergyModel& model, int u, const Config& config) {
    if (u < 0 || u >= model.p) throw invalid_input("conditional center out of range");
    const int q = model.alphabet.q;
    Config work = config;
    std::vector<double> logits(static_cast<std::size_t>(q));
    for (int s = 0; s < q; ++s) {
        work[static_cast<std::size_t>(u)] = static_cast<Symbol>(s);
        // Terms not containing u cancel in the softmax.
        logits[static_cast<std::size_t>(s)] = eval_energy(model, work);
    }
    const double peak = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& v : logits) {
        v = std::exp(v - peak);
        total += v;
    }
    for (double& v : logits) v /= total;
    return logits;
}

}  // namespace neurise
