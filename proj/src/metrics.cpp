#include "neurise/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <omp.h>

#include "neurise/parallel.hpp"

namespace neurise {

ConditionalFn conditional_fn_of_model(const EnergyModel& truth) {
    return [&truth](int u, const Config& config, double* out) {
        const std::vector<double> dist = true_conditional(truth, u, config);
        std::copy(dist.begin(), dist.end(), out);
    };
}

ConditionalFn conditional_fn_of_learned(const std::vector<ConditionalModel>& models) {
    auto pool = std::make_shared<std::vector<MlpWorkspace>>(
        static_cast<std::size_t>(omp_get_max_threads()) + 1);
    return [&models, pool](int u, const Config& config, double* out) {
        const ConditionalModel& model = models[static_cast<std::size_t>(u)];
        if (model.u != u) throw invalid_input("learned models must be indexed by center u");
        MlpWorkspace& ws = (*pool)[static_cast<std::size_t>(omp_get_thread_num())];
        const int q = model.alphabet.q;
        partial_energies(model, config, ws, out);
        double peak = out[0];
        for (int s = 1; s < q; ++s) peak = std::max(peak, out[s]);
        double total = 0.0;
        for (int s = 0; s < q; ++s) {
            out[s] = std::exp(out[s] - peak);
            total += out[s];
        }
        for (int s = 0; s < q; ++s) out[s] /= total;
    };
}

double avg_conditional_error(const ConditionalFn& a, const ConditionalFn& b, int p,
                             const Alphabet& alphabet, std::uint64_t cap) {
    state_count(p, alphabet.q, cap);  // capacity check
    const int q = alphabet.q;
    std::uint64_t contexts = 1;
    for (int i = 0; i < p - 1; ++i) contexts *= static_cast<std::uint64_t>(q);

    double total = 0.0;
    for (int u = 0; u < p; ++u) {
        total += par::sum(contexts, [&](std::size_t ctx) {
            // Decode the context over the other p-1 sites; the value at u
            // is irrelevant to both providers.
            Config config(static_cast<std::size_t>(p), 0);
            std::uint64_t rest = ctx;
            for (int v = 0; v < p; ++v) {
                if (v == u) continue;
                config[static_cast<std::size_t>(v)] = static_cast<Symbol>(rest % static_cast<std::uint64_t>(q));
                rest /= static_cast<std::uint64_t>(q);
            }
            std::vector<double> pa(static_cast<std::size_t>(q));
            std::vector<double> pb(static_cast<std::size_t>(q));
            a(u, config, pa.data());
            b(u, config, pb.data());
            double l1 = 0.0;
            for (int s = 0; s < q; ++s) l1 += std::abs(pa[static_cast<std::size_t>(s)] - pb[static_cast<std::size_t>(s)]);
            return l1;
        });
    }
    return total / (static_cast<double>(p) * static_cast<double>(contexts));
}

double avg_conditional_error(const std::vector<ConditionalModel>& models,
                             const EnergyModel& truth, std::uint64_t cap) {
    if (models.size() != static_cast<std::size_t>(truth.p))
        throw invalid_input("need one conditional model per variable");
    return avg_conditional_error(conditional_fn_of_learned(models),
                                 conditional_fn_of_model(truth), truth.p, truth.alphabet, cap);
}

double tvd_exact(const ExactDistribution& d1, const ExactDistribution& d2) {
    if (d1.p != d2.p || d1.alphabet.q != d2.alphabet.q || d1.probs.size() != d2.probs.size())
        throw invalid_input("distributions differ in shape");
    double sum = 0.0;
    for (std::size_t i = 0; i < d1.probs.size(); ++i) sum += std::abs(d1.probs[i] - d2.probs[i]);
    return 0.5 * sum;
}

namespace {

std::vector<std::pair<std::uint64_t, std::size_t>> state_histogram(const SampleSet& s) {
    // q^p must fit a 64-bit key
    double bits = static_cast<double>(s.p()) * std::log2(static_cast<double>(s.alphabet().q));
    if (bits > 63.0)
        throw capacity_error("empirical TVD needs q^p to fit a 64-bit state key");
    std::vector<std::uint64_t> keys(s.size());
    for (std::size_t t = 0; t < s.size(); ++t)
        keys[t] = encode_config(s.config(t), s.alphabet().q);
    std::sort(keys.begin(), keys.end());
    std::vector<std::pair<std::uint64_t, std::size_t>> hist;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        hist.emplace_back(keys[i], j - i);
        i = j;
    }
    return hist;
}

}  // namespace

double tvd_empirical(const SampleSet& s1, const SampleSet& s2) {
    if (s1.p() != s2.p() || s1.alphabet().q != s2.alphabet().q)
        throw invalid_input("sample sets differ in shape");
    const auto h1 = state_histogram(s1);
    const auto h2 = state_histogram(s2);
    const double n1 = static_cast<double>(s1.size());
    const double n2 = static_cast<double>(s2.size());
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < h1.size() || j < h2.size()) {
        if (j == h2.size() || (i < h1.size() && h1[i].first < h2[j].first)) {
            sum += static_cast<double>(h1[i].second) / n1;
            ++i;
        } else if (i == h1.size() || h2[j].first < h1[i].first) {
            sum += static_cast<double>(h2[j].second) / n2;
            ++j;
        } else {
            sum += std::abs(static_cast<double>(h1[i].second) / n1 -
                            static_cast<double>(h2[j].second) / n2);
            ++i;
            ++j;
        }
    }
    return 0.5 * sum;
}

void walsh_hadamard(std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw invalid_input("transform length must be a power of two");
    for (std::size_t half = 1; half < n; half <<= 1) {
        const std::size_t n_blocks = n / (2 * half);
        // Each butterfly writes two distinct slots; deterministic under
        // any thread count.
        par::for_each(n_blocks, [&](std::size_t block) {
            const std::size_t base = block * 2 * half;
            for (std::size_t j = base; j < base + half; ++j) {
                const double a = values[j];
                const double b = values[j + half];
                values[j] = a + b;
                values[j + half] = a - b;
            }
        });
    }
}

CoefficientSpectrum fourier_expand(const std::function<double(const Config&)>& f, int p,
                                   int max_p) {
    if (p < 1) throw invalid_input("need p >= 1");
    if (p > max_p)
        throw capacity_error("full spectrum needs p <= " + std::to_string(max_p) +
                             ", got p = " + std::to_string(p));
    const std::size_t n = std::size_t{1} << p;
    CoefficientSpectrum spectrum;
    spectrum.p = p;
    spectrum.coefficients.resize(n);
    std::vector<double>& table = spectrum.coefficients;
    // Symbol convention makes the truth-table index the subset mask:
    // bit i of x is site i's symbol, and spin = (-1)^bit.
    par::for_each(n, [&](std::size_t x) {
        Config config(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) config[static_cast<std::size_t>(i)] = static_cast<Symbol>((x >> i) & 1u);
        table[x] = f(config);
    });
    walsh_hadamard(table);
    const double scale = 1.0 / static_cast<double>(n);
    for (double& c : table) c *= scale;
    return spectrum;
}

double fourier_coefficient(const std::function<double(const Config&)>& f, int p,
                           std::uint64_t subset_mask, int max_p) {
    if (p > max_p) throw capacity_error("coefficient evaluation capped at p <= " + std::to_string(max_p));
    const std::uint64_t n = std::uint64_t{1} << p;
    const double total = par::sum(n, [&](std::size_t x) {
        Config config(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) config[static_cast<std::size_t>(i)] = static_cast<Symbol>((x >> i) & 1u);
        const int parity = __builtin_popcountll(x & subset_mask) & 1;
        return (parity != 0 ? -1.0 : 1.0) * f(config);
    });
    return total / static_cast<double>(n);
}

CoefficientSpectrum spectrum_of_partial_energy(const ConditionalModel& model, int max_p) {
    auto pool = std::make_shared<std::vector<MlpWorkspace>>(
        static_cast<std::size_t>(omp_get_max_threads()) + 1);
    return fourier_expand(
        [&model, pool](const Config& config) {
            MlpWorkspace& ws = (*pool)[static_cast<std::size_t>(omp_get_thread_num())];
            return partial_energy(model, config, ws);
        },
        model.p, max_p);
}

CoefficientSpectrum spectrum_of_energy_net(const EnergyNet& net, int max_p) {
    auto pool = std::make_shared<std::vector<MlpWorkspace>>(
        static_cast<std::size_t>(omp_get_max_threads()) + 1);
    return fourier_expand(
        [&net, pool](const Config& config) {
            MlpWorkspace& ws = (*pool)[static_cast<std::size_t>(omp_get_thread_num())];
            return net_energy(net, config, ws);
        },
        net.p, max_p);
}

std::vector<double> spectrum_to_table(const CoefficientSpectrum& spectrum) {
    std::vector<double> table = spectrum.coefficients;
    walsh_hadamard(table);  // self-inverse up to the 2^p factor already applied
    return table;
}

namespace {

std::vector<int> mask_sites(std::uint64_t mask) {
    std::vector<int> sites;
    for (int i = 0; mask != 0; ++i, mask >>= 1)
        if (mask & 1u) sites.push_back(i);
    return sites;
}

}  // namespace

std::vector<LeadingCoefficient> leading_coefficients(const CoefficientSpectrum& spectrum,
                                                     int max_order) {
    if (max_order < 1 || max_order > spectrum.p)
        throw invalid_input("max order must be in [1, p]");
    std::vector<LeadingCoefficient> leaders(static_cast<std::size_t>(max_order));
    for (int l = 1; l <= max_order; ++l) leaders[static_cast<std::size_t>(l - 1)].order = l;
    for (std::uint64_t mask = 1; mask < spectrum.coefficients.size(); ++mask) {
        const int order = __builtin_popcountll(mask);
        if (order > max_order) continue;
        LeadingCoefficient& lead = leaders[static_cast<std::size_t>(order - 1)];
        const double value = std::abs(spectrum.coefficients[mask]);
        if (value > lead.value ||
            (value == lead.value && lead.subset != 0 && mask_sites(mask) < mask_sites(lead.subset))) {
            lead.value = value;
            lead.subset = mask;
        }
    }
    return leaders;
}

}  // namespace neurise
