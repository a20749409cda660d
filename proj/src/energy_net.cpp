#include "neurise/energy_net.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "neurise/exact.hpp"
#include "neurise/parallel.hpp"

namespace neurise {

EnergyNet make_energy_net(int p, Mlp net) {
    if (net.spec.input_dim != p || net.spec.output_dim != 1)
        throw invalid_input("energy net must map p inputs to one output");
    EnergyNet e;
    e.p = p;
    e.net = std::move(net);
    return e;
}

Config flip(const Config& config, int u, const Alphabet& alphabet) {
    if (alphabet.q != 2) throw invalid_input("flip is defined for binary alphabets only");
    if (u < 0 || static_cast<std::size_t>(u) >= config.size())
        throw invalid_input("flip site out of range");
    Config out = config;
    out[static_cast<std::size_t>(u)] ^= Symbol{1};
    return out;
}

void encode_energy_input(const Config& config, double* out) {
    for (std::size_t i = 0; i < config.size(); ++i) out[i] = Alphabet::spin(config[i]);
}

double net_energy(const EnergyNet& net, const Config& config, MlpWorkspace& ws) {
    if (config.size() != static_cast<std::size_t>(net.p))
        throw invalid_input("configuration length does not match energy net");
    std::vector<double> input(config.size());
    encode_energy_input(config, input.data());
    return mlp_forward(net.net, input.data(), ws)[0];
}

namespace {

/// Per-sample pass shared by the loss and the gradient: forwards the base
/// configuration and its p single-site flips, optionally backpropagating
/// the flip-term cotangents into grad_acc.
double sample_flip_terms(const EnergyNet& net, const Symbol* row, int p, MlpWorkspace& ws,
                         std::vector<double>& input, std::vector<double>& flip_coeff,
                         double* grad_acc) {
    for (int i = 0; i < p; ++i) input[static_cast<std::size_t>(i)] = Alphabet::spin(row[i]);
    // base forward
    double base = mlp_forward(net.net, input.data(), ws)[0];
    double total = 0.0;
    for (int u = 0; u < p; ++u) {
        const double saved = input[static_cast<std::size_t>(u)];
        input[static_cast<std::size_t>(u)] = -saved;
        const double flipped = mlp_forward(net.net, input.data(), ws)[0];
        const double e = std::exp(0.5 * (flipped - base));
        total += e;
        if (grad_acc != nullptr) {
            const double cot = 0.5 * e;
            mlp_backward(net.net, input.data(), &cot, ws, grad_acc);
        }
        flip_coeff[static_cast<std::size_t>(u)] = e;
        input[static_cast<std::size_t>(u)] = saved;
    }
    if (grad_acc != nullptr) {
        // one backward for the base configuration with the summed coefficient
        double coeff = 0.0;
        for (int u = 0; u < p; ++u) coeff += flip_coeff[static_cast<std::size_t>(u)];
        mlp_forward(net.net, input.data(), ws);  // restore base activations
        const double cot = -0.5 * coeff;
        mlp_backward(net.net, input.data(), &cot, ws, grad_acc);
    }
    return total;
}

}  // namespace

double full_energy_loss(const EnergyNet& net, const SampleSet& samples) {
    if (samples.alphabet().q != 2) throw invalid_input("flip objective needs binary samples");
    if (samples.p() != net.p) throw invalid_input("samples do not match energy net width");
    const std::size_t n = samples.size();
    const int p = net.p;
    std::vector<MlpWorkspace> pool(static_cast<std::size_t>(omp_get_max_threads()) + 1);
    std::vector<double> total(1, 0.0);
    par::accumulate_chunks(n, 1, total.data(), [&](std::size_t lo, std::size_t hi, double* acc) {
        MlpWorkspace& ws = pool[static_cast<std::size_t>(omp_get_thread_num())];
        std::vector<double> input(static_cast<std::size_t>(p));
        std::vector<double> coeff(static_cast<std::size_t>(p));
        for (std::size_t t = lo; t < hi; ++t)
            acc[0] += sample_flip_terms(net, samples.row(t), p, ws, input, coeff, nullptr);
    });
    return total[0] / static_cast<double>(n);
}

double energy_batch_gradient(const EnergyNet& net, const SampleSet& samples,
                             const std::vector<std::size_t>& indices,
                             std::vector<double>& grad) {
    if (indices.empty()) throw invalid_input("empty minibatch");
    const std::size_t n_params = net.net.params.size();
    const int p = net.p;
    std::vector<MlpWorkspace> pool(static_cast<std::size_t>(omp_get_max_threads()) + 1);
    std::vector<double> acc_all(n_params + 1, 0.0);
    par::accumulate_chunks(indices.size(), n_params + 1, acc_all.data(),
                           [&](std::size_t lo, std::size_t hi, double* acc) {
        MlpWorkspace& ws = pool[static_cast<std::size_t>(omp_get_thread_num())];
        std::vector<double> input(static_cast<std::size_t>(p));
        std::vector<double> coeff(static_cast<std::size_t>(p));
        for (std::size_t b = lo; b < hi; ++b)
            acc[n_params] +=
                sample_flip_terms(net, samples.row(indices[b]), p, ws, input, coeff, acc);
    });
    const double scale = 1.0 / static_cast<double>(indices.size());
    grad.assign(acc_all.begin(), acc_all.begin() + static_cast<std::ptrdiff_t>(n_params));
    for (double& g : grad) g *= scale;
    return acc_all[n_params] * scale;
}

EnergyFitResult energy_fit(const SampleSet& samples, MlpSpec spec, const TrainConfig& config) {
    if (samples.alphabet().q != 2) throw invalid_input("energy learning needs binary samples");
    const int p = samples.p();
    if (spec.input_dim == 0) spec.input_dim = p;
    if (spec.output_dim == 0) spec.output_dim = 1;
    if (spec.input_dim != p || spec.output_dim != 1)
        throw invalid_input("energy net spec must map p inputs to one output");
    if (config.minibatch < 1) throw invalid_input("minibatch must be >= 1");

    Rng rng(config.seed);
    Mlp mlp = make_mlp(spec);
    glorot_init(mlp, rng);
    if (config.zero_input_init) zero_input_weights(mlp);
    EnergyNet net = make_energy_net(p, std::move(mlp));

    const std::size_t n = samples.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto shuffle = [&rng](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.uniform_int(i)]);
    };

    Optimizer optimizer(config.optimizer, net.net.params.size());
    EnergyFitResult result;
    std::vector<double> grad;
    std::vector<std::size_t> batch;
    const std::size_t batch_size = static_cast<std::size_t>(config.minibatch);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle(order);
        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t stop = std::min(start + batch_size, order.size());
            batch.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(stop));
            const double loss = energy_batch_gradient(net, samples, batch, grad);
            if (!std::isfinite(loss))
                throw solver_error("energy training loss diverged at epoch " +
                                   std::to_string(epoch) + "; try a smaller learning rate");
            optimizer.step(net.net.params, grad);
            epoch_loss += loss;
            ++n_batches;
        }
        if (config.log_every > 0 && (epoch % config.log_every == 0 || epoch == config.epochs)) {
            EpochLog log;
            log.epoch = epoch;
            log.train_loss = epoch_loss / static_cast<double>(n_batches);
            result.history.push_back(log);
        }
    }
    result.net = std::move(net);
    return result;
}

EnergyGap energy_compare(const EnergyNet& net, const EnergyModel& truth, std::uint64_t cap) {
    if (truth.p != net.p) throw invalid_input("model and net disagree on p");
    if (truth.alphabet.q != 2) throw invalid_input("energy comparison needs a binary model");
    const std::uint64_t states = state_count(truth.p, 2, cap);

    std::vector<double> gap(states);
    std::vector<MlpWorkspace> pool(static_cast<std::size_t>(omp_get_max_threads()) + 1);
    par::for_each(states, [&](std::size_t x) {
        MlpWorkspace& ws = pool[static_cast<std::size_t>(omp_get_thread_num())];
        const Config c = decode_config(x, truth.p, 2);
        gap[x] = net_energy(net, c, ws) - eval_energy(truth, c);
    });
    const double mean = par::sum(states, [&](std::size_t x) { return gap[x]; }) /
                        static_cast<double>(states);
    EnergyGap result;
    result.mean_abs = par::sum(states, [&](std::size_t x) { return std::abs(gap[x] - mean); }) /
                      static_cast<double>(states);
    double peak = 0.0;
    for (double g : gap) peak = std::max(peak, std::abs(g - mean));
    result.max_abs = peak;
    return result;
}

}  // namespace neurise
