#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "neurise/energy_net.hpp"
#include "neurise/exact.hpp"
#include "neurise/metrics.hpp"
#include "neurise/reference.hpp"
#include "test_util.hpp"

using namespace neurise;

namespace {

SampleSet rows(const std::vector<Config>& configs, const Alphabet& alphabet) {
    std::vector<Symbol> data;
    for (const Config& c : configs) data.insert(data.end(), c.begin(), c.end());
    return SampleSet(static_cast<int>(configs.front().size()), alphabet, std::move(data));
}

EnergyNet random_energy_net(int p, int d, int w, Rng& rng) {
    MlpSpec spec{p, d, w, 1};
    Mlp net = make_mlp(spec);
    glorot_init(net, rng);
    return make_energy_net(p, std::move(net));
}

}  // namespace

TEST_CASE("flip is an involution and commutes across sites") {
    const Alphabet a2(2);
    const Config c{0, 0, 1, 0};
    CHECK(flip(c, 0, a2) == Config{1, 0, 1, 0});
    CHECK(flip(flip(c, 2, a2), 2, a2) == c);
    CHECK(flip(flip(c, 1, a2), 3, a2) == flip(flip(c, 3, a2), 1, a2));
    CHECK_THROWS_AS(flip(c, 0, Alphabet(3)), invalid_input);
    CHECK_THROWS_AS(flip(c, 9, a2), invalid_input);
}

TEST_CASE("constant nets have loss exactly p") {
    const Alphabet a2(2);
    MlpSpec spec{3, 1, 4, 1};
    Mlp net = make_mlp(spec);
    net.params[mlp_bias_offset(spec, 1)] = 5.5;
    const EnergyNet energy = make_energy_net(3, std::move(net));
    Rng rng(1);
    std::vector<Config> configs;
    for (int i = 0; i < 4; ++i) configs.push_back(test::random_config(3, 2, rng));
    CHECK(full_energy_loss(energy, rows(configs, a2)) == 3.0);
}

TEST_CASE("single-sample flip loss from a hand-built net") {
    // f(x) = 2*swish(x) + 0.537...: f(+1) = 2, f(-1) = 0
    const Alphabet a2(2);
    MlpSpec spec{1, 1, 1, 1};
    Mlp net = make_mlp(spec);
    net.params[0] = 1.0;                          // hidden weight
    net.params[1] = 0.0;                          // hidden bias
    net.params[2] = 2.0;                          // output weight
    net.params[3] = -2.0 * swish(-1.0);           // output bias
    const EnergyNet energy = make_energy_net(1, std::move(net));
    MlpWorkspace ws;
    CHECK(net_energy(energy, {0}, ws) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(net_energy(energy, {1}, ws) == doctest::Approx(0.0).epsilon(1e-12));
    const SampleSet one = rows({{0}}, a2);
    CHECK(full_energy_loss(energy, one) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("loss is invariant to constant output shifts") {
    Rng rng(4);
    EnergyNet net = random_energy_net(5, 2, 7, rng);
    std::vector<Config> configs;
    for (int i = 0; i < 50; ++i) configs.push_back(test::random_config(5, 2, rng));
    const SampleSet samples = rows(configs, Alphabet(2));
    const double base = full_energy_loss(net, samples);
    net.net.params[mlp_bias_offset(net.net.spec, net.net.spec.hidden_depth)] += 11.5;
    CHECK(std::abs(full_energy_loss(net, samples) - base) < 1e-10);
}

TEST_CASE("aggregated loss decomposes into per-variable screening losses") {
    Rng rng(6);
    const int p = 5;
    EnergyNet net = random_energy_net(p, 2, 6, rng);
    std::vector<Config> configs;
    for (int i = 0; i < 40; ++i) configs.push_back(test::random_config(p, 2, rng));
    const SampleSet samples = rows(configs, Alphabet(2));

    const double aggregated = full_energy_loss(net, samples);
    // per-variable screening loss with H_u(sigma) = (NN(sigma) - NN(flip_u sigma)) / 2
    double sum = 0.0;
    MlpWorkspace ws;
    for (int u = 0; u < p; ++u) {
        double term = 0.0;
        for (std::size_t t = 0; t < samples.size(); ++t) {
            const Config config = samples.config(t);
            const double h =
                0.5 * (net_energy(net, config, ws) -
                       net_energy(net, flip(config, u, samples.alphabet()), ws));
            term += std::exp(-h);
        }
        sum += term / static_cast<double>(samples.size());
    }
    CHECK(std::abs(aggregated - sum) < 1e-10);
}

TEST_CASE("batch gradient agrees with finite differences") {
    Rng rng(8);
    const int p = 4;
    EnergyNet net = random_energy_net(p, 2, 5, rng);
    std::vector<Config> configs;
    for (int i = 0; i < 10; ++i) configs.push_back(test::random_config(p, 2, rng));
    const SampleSet samples = rows(configs, Alphabet(2));
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < samples.size(); ++i) indices.push_back(i);

    std::vector<double> grad;
    energy_batch_gradient(net, samples, indices, grad);
    const auto objective = [&](const std::vector<double>& params) {
        EnergyNet probe = net;
        probe.net.params = params;
        return full_energy_loss(probe, samples);
    };
    const std::vector<double> fd = test::finite_difference(objective, net.net.params, 1e-5);
    CHECK(test::max_rel_error(grad, fd) < 1e-5);
}

TEST_CASE("parallel loss kernel matches the serial reference") {
    Rng rng(12);
    EnergyNet net = random_energy_net(6, 2, 8, rng);
    std::vector<Config> configs;
    for (int i = 0; i < 200; ++i) configs.push_back(test::random_config(6, 2, rng));
    const SampleSet samples = rows(configs, Alphabet(2));
    CHECK(full_energy_loss(net, samples) ==
          doctest::Approx(reference::full_energy_loss(net, samples)).epsilon(1e-12));
}

TEST_CASE("population flip loss has zero gradient at the true energy") {
    const EnergyModel model = gen_one_d_model(6, 2, {0.6, -0.5});
    const ExactDistribution dist = exact_distribution(model);
    // table surrogate over all 64 configurations
    std::vector<double> table(64);
    for (std::uint64_t x = 0; x < 64; ++x)
        table[x] = eval_energy(model, decode_config(x, 6, 2));

    const auto population_loss = [&dist](const std::vector<double>& entries) {
        double total = 0.0;
        for (std::uint64_t x = 0; x < 64; ++x) {
            for (int u = 0; u < 6; ++u) {
                const std::uint64_t y = x ^ (1ull << u);
                total += dist.probs[x] * std::exp(0.5 * (entries[y] - entries[x]));
            }
        }
        return total;
    };
    const std::vector<double> fd = test::finite_difference(population_loss, table, 1e-5);
    for (double g : fd) CHECK(std::abs(g) < 1e-7);
}

TEST_CASE("gauge-aligned comparison ignores additive constants") {
    // zero net against the zero model, with and without a bias shift
    MlpSpec spec{4, 1, 3, 1};
    Mlp net = make_mlp(spec);
    net.params[mlp_bias_offset(spec, 1)] = 7.3;
    const EnergyNet shifted = make_energy_net(4, std::move(net));
    const EnergyModel flat = gen_empty_model(4, Alphabet(2));
    const EnergyGap gap = energy_compare(shifted, flat);
    CHECK(gap.mean_abs < 1e-10);
    CHECK(gap.max_abs < 1e-10);

    // shifting a random net never changes the gap
    Rng rng(9);
    EnergyNet base = random_energy_net(5, 2, 6, rng);
    const EnergyModel model = gen_one_d_model(5, 2, {0.4, 0.3});
    const EnergyGap before = energy_compare(base, model);
    base.net.params[mlp_bias_offset(base.net.spec, 2)] += 7.3;
    const EnergyGap after = energy_compare(base, model);
    CHECK(std::abs(before.mean_abs - after.mean_abs) < 1e-10);
    CHECK(std::abs(before.max_abs - after.max_abs) < 1e-10);
}

TEST_CASE("zero net against a single pair term gaps by one") {
    const MlpSpec spec{4, 1, 3, 1};
    const EnergyNet zero = make_energy_net(4, make_mlp(spec));
    BasisTerm pair;
    pair.sites = {0, 1};
    pair.strength = 1.0;
    const EnergyModel model(4, Alphabet(2), {pair});
    const EnergyGap gap = energy_compare(zero, model);
    CHECK(gap.mean_abs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gap.max_abs == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("squared energy gap equals the spectrum gap") {
    Rng rng(14);
    const int p = 6;
    const EnergyNet net = random_energy_net(p, 2, 6, rng);
    const EnergyModel model = gen_one_d_model(p, 3, {0.5, -0.4, 0.3});

    const CoefficientSpectrum net_spec = spectrum_of_energy_net(net);
    const CoefficientSpectrum truth_spec =
        fourier_expand([&model](const Config& c) { return eval_energy(model, c); }, p);
    double spectrum_gap = 0.0;
    for (std::uint64_t mask = 1; mask < net_spec.coefficients.size(); ++mask) {
        const double d = net_spec.coefficients[mask] - truth_spec.coefficients[mask];
        spectrum_gap += d * d;
    }

    MlpWorkspace ws;
    double mean = 0.0;
    std::vector<double> gaps(64);
    for (std::uint64_t x = 0; x < 64; ++x) {
        const Config c = decode_config(x, p, 2);
        gaps[x] = net_energy(net, c, ws) - eval_energy(model, c);
        mean += gaps[x];
    }
    mean /= 64.0;
    double mean_square = 0.0;
    for (double g : gaps) mean_square += (g - mean) * (g - mean);
    mean_square /= 64.0;
    CHECK(std::abs(mean_square - spectrum_gap) < 1e-9);
}

TEST_CASE("training the zero model yields a near-constant energy") {
    const EnergyModel flat = gen_empty_model(6, Alphabet(2));
    const SampleSet samples = exact_sample(exact_distribution(flat), 20000, 21);
    TrainConfig config;
    config.epochs = 10;
    config.minibatch = 256;
    config.seed = 2;
    MlpSpec spec;
    spec.hidden_depth = 2;
    spec.hidden_width = 8;
    const EnergyFitResult fit = energy_fit(samples, spec, config);

    MlpWorkspace ws;
    double mean = 0.0;
    std::vector<double> values(64);
    for (std::uint64_t x = 0; x < 64; ++x) {
        values[x] = net_energy(fit.net, decode_config(x, 6, 2), ws);
        mean += values[x];
    }
    mean /= 64.0;
    double variance = 0.0;
    for (double v : values) variance += (v - mean) * (v - mean);
    variance /= 64.0;
    CHECK(variance < 0.01);
}

TEST_CASE("energy training is deterministic under a fixed seed") {
    const EnergyModel model = gen_one_d_model(5, 2, {0.5, -0.4});
    const SampleSet samples = exact_sample(exact_distribution(model), 2000, 5);
    TrainConfig config;
    config.epochs = 4;
    config.minibatch = 128;
    config.seed = 11;
    MlpSpec spec;
    spec.hidden_depth = 1;
    spec.hidden_width = 6;
    const EnergyFitResult a = energy_fit(samples, spec, config);
    const EnergyFitResult b = energy_fit(samples, spec, config);
    CHECK(a.net.net.params == b.net.net.params);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i)
        CHECK(a.history[i].train_loss == b.history[i].train_loss);
}
