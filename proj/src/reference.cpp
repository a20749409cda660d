#include "neurise/reference.hpp"

#include <cmath>

namespace neurise::reference {

double iso_value(const PartialBasis& basis, const SampleSet& samples,
                 const std::vector<double>& theta) {
    double total = 0.0;
    for (std::size_t t = 0; t < samples.size(); ++t) {
        const Config config = samples.config(t);
        double z = 0.0;
        for (std::size_t k = 0; k < basis.terms.size(); ++k)
            z += theta[k] * eval_basis(basis.terms[k], config, basis.alphabet);
        total += std::exp(-z);
    }
    return total / static_cast<double>(samples.size());
}

std::vector<double> iso_gradient(const PartialBasis& basis, const SampleSet& samples,
                                 const std::vector<double>& theta) {
    std::vector<double> grad(basis.terms.size(), 0.0);
    for (std::size_t t = 0; t < samples.size(); ++t) {
        const Config config = samples.config(t);
        double z = 0.0;
        for (std::size_t k = 0; k < basis.terms.size(); ++k)
            z += theta[k] * eval_basis(basis.terms[k], config, basis.alphabet);
        const double e = std::exp(-z);
        for (std::size_t k = 0; k < basis.terms.size(); ++k)
            grad[k] -= eval_basis(basis.terms[k], config, basis.alphabet) * e;
    }
    for (double& g : grad) g /= static_cast<double>(samples.size());
    return grad;
}

ExactDistribution exact_distribution(const EnergyModel& model) {
    std::uint64_t states = 1;
    for (int i = 0; i < model.p; ++i) states *= static_cast<std::uint64_t>(model.alphabet.q);
    ExactDistribution dist;
    dist.p = model.p;
    dist.alphabet = model.alphabet;
    dist.probs.resize(states);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::uint64_t x = 0; x < states; ++x) {
        dist.probs[x] = eval_energy(model, decode_config(x, model.p, model.alphabet.q));
        peak = std::max(peak, dist.probs[x]);
    }
    double z = 0.0;
    for (double v : dist.probs) z += std::exp(v - peak);
    for (double& v : dist.probs) v = std::exp(v - peak) / z;
    return dist;
}

double neuriso_value(const ConditionalModel& model, const SampleSet& samples) {
    double total = 0.0;
    MlpWorkspace ws;
    std::vector<double> energies(static_cast<std::size_t>(model.alphabet.q));
    for (std::size_t t = 0; t < samples.size(); ++t) {
        const Config config = samples.config(t);
        partial_energies(model, config, ws, energies.data());
        total += std::exp(-energies[config[static_cast<std::size_t>(model.u)]]);
    }
    return total / static_cast<double>(samples.size());
}

double full_energy_loss(const EnergyNet& net, const SampleSet& samples) {
    double total = 0.0;
    MlpWorkspace ws;
    for (std::size_t t = 0; t < samples.size(); ++t) {
        const Config config = samples.config(t);
        const double base = net_energy(net, config, ws);
        for (int u = 0; u < net.p; ++u) {
            const Config flipped = flip(config, u, samples.alphabet());
            total += std::exp(0.5 * (net_energy(net, flipped, ws) - base));
        }
    }
    return total / static_cast<double>(samples.size());
}

double avg_conditional_error(const std::vector<ConditionalModel>& models,
                             const EnergyModel& truth) {
    const int p = truth.p;
    const int q = truth.alphabet.q;
    std::uint64_t contexts = 1;
    for (int i = 0; i < p - 1; ++i) contexts *= static_cast<std::uint64_t>(q);

    double total = 0.0;
    for (int u = 0; u < p; ++u) {
        for (std::uint64_t ctx = 0; ctx < contexts; ++ctx) {
            Config config(static_cast<std::size_t>(p), 0);
            std::uint64_t rest = ctx;
            for (int v = 0; v < p; ++v) {
                if (v == u) continue;
                config[static_cast<std::size_t>(v)] = static_cast<Symbol>(rest % static_cast<std::uint64_t>(q));
                rest /= static_cast<std::uint64_t>(q);
            }
            // truth conditional straight from the energy definition
            std::vector<double> truth_probs(static_cast<std::size_t>(q));
            double z = 0.0;
            for (int s = 0; s < q; ++s) {
                config[static_cast<std::size_t>(u)] = static_cast<Symbol>(s);
                truth_probs[static_cast<std::size_t>(s)] = std::exp(eval_energy(truth, config));
                z += truth_probs[static_cast<std::size_t>(s)];
            }
            for (double& v : truth_probs) v /= z;
            const std::vector<double> learned =
                learned_conditional(models[static_cast<std::size_t>(u)], config);
            for (int s = 0; s < q; ++s)
                total += std::abs(truth_probs[static_cast<std::size_t>(s)] - learned[static_cast<std::size_t>(s)]);
        }
    }
    return total / (static_cast<double>(p) * static_cast<double>(contexts));
}

CoefficientSpectrum fourier_expand(const std::function<double(const Config&)>& f, int p) {
    const std::uint64_t n = std::uint64_t{1} << p;
    CoefficientSpectrum spectrum;
    spectrum.p = p;
    spectrum.coefficients.assign(n, 0.0);
    std::vector<double> table(n);
    for (std::uint64_t x = 0; x < n; ++x) {
        Config config(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) config[static_cast<std::size_t>(i)] = static_cast<Symbol>((x >> i) & 1u);
        table[x] = f(config);
    }
    for (std::uint64_t mask = 0; mask < n; ++mask) {
        double c = 0.0;
        for (std::uint64_t x = 0; x < n; ++x) {
            const int parity = __builtin_popcountll(x & mask) & 1;
            c += (parity != 0 ? -table[x] : table[x]);
        }
        spectrum.coefficients[mask] = c / static_cast<double>(n);
    }
    return spectrum;
}

}  // namespace neurise::reference
