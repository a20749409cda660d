#include "neurise/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "neurise/parallel.hpp"

namespace neurise {

int conditional_input_dim(int p, int q) { return q == 2 ? p - 1 : (p - 1) * q; }

ConditionalModel make_linear_conditional(PartialBasis basis, std::vector<double> theta) {
    if (theta.size() != basis.terms.size())
        throw invalid_input("theta length does not match basis term count");
    ConditionalModel model;
    model.u = basis.u;
    model.p = basis.p;
    model.alphabet = basis.alphabet;
    model.flavor = ConditionalFlavor::linear;
    model.basis = std::move(basis);
    model.theta = std::move(theta);
    return model;
}

ConditionalModel make_net_conditional(int u, int p, const Alphabet& alphabet, Mlp net) {
    if (u < 0 || u >= p) throw invalid_input("center variable out of range");
    const int expected_in = conditional_input_dim(p, alphabet.q);
    const int expected_out = alphabet.q == 2 ? 1 : alphabet.q;
    if (net.spec.input_dim != expected_in || net.spec.output_dim != expected_out)
        throw invalid_input("net dims (" + std::to_string(net.spec.input_dim) + "->" +
                            std::to_string(net.spec.output_dim) + ") do not fit p=" +
                            std::to_string(p) + ", q=" + std::to_string(alphabet.q));
    ConditionalModel model;
    model.u = u;
    model.p = p;
    model.alphabet = alphabet;
    model.flavor = alphabet.q == 2 ? ConditionalFlavor::binary_net : ConditionalFlavor::general_net;
    model.net = std::move(net);
    return model;
}

void encode_conditional_input(const Config& config, int u, const Alphabet& alphabet,
                              double* out) {
    const int p = static_cast<int>(config.size());
    if (alphabet.q == 2) {
        int j = 0;
        for (int v = 0; v < p; ++v) {
            if (v == u) continue;
            out[j++] = Alphabet::spin(config[static_cast<std::size_t>(v)]);
        }
        return;
    }
    const int q = alphabet.q;
    const double off_value = -1.0 / static_cast<double>(q);
    int j = 0;
    for (int v = 0; v < p; ++v) {
        if (v == u) continue;
        double* block = out + static_cast<std::size_t>(j) * static_cast<std::size_t>(q);
        for (int s = 0; s < q; ++s) block[s] = off_value;
        block[config[static_cast<std::size_t>(v)]] += 1.0;
        ++j;
    }
}

namespace {

void net_partial_energies(const ConditionalModel& model, const std::vector<double>& out_vec,
                          double* out) {
    const int q = model.alphabet.q;
    if (model.flavor == ConditionalFlavor::binary_net) {
        out[0] = out_vec[0];   // symbol 0 = spin +1
        out[1] = -out_vec[0];  // symbol 1 = spin -1
        return;
    }
    double mean = 0.0;
    for (int s = 0; s < q; ++s) mean += out_vec[static_cast<std::size_t>(s)];
    mean /= static_cast<double>(q);
    for (int s = 0; s < q; ++s) out[s] = out_vec[static_cast<std::size_t>(s)] - mean;
}

}  // namespace

void partial_energies(const ConditionalModel& model, const Config& config, MlpWorkspace& ws,
                      double* out) {
    const int q = model.alphabet.q;
    if (model.flavor == ConditionalFlavor::linear) {
        Config work = config;
        for (int s = 0; s < q; ++s) {
            work[static_cast<std::size_t>(model.u)] = static_cast<Symbol>(s);
            double h = 0.0;
            for (std::size_t j = 0; j < model.basis.terms.size(); ++j)
                h += model.theta[j] * eval_basis(model.basis.terms[j], work, model.alphabet);
            out[s] = h;
        }
        return;
    }
    std::vector<double> input(static_cast<std::size_t>(model.net.spec.input_dim));
    encode_conditional_input(config, model.u, model.alphabet, input.data());
    const std::vector<double>& out_vec = mlp_forward(model.net, input.data(), ws);
    net_partial_energies(model, out_vec, out);
}

double partial_energy(const ConditionalModel& model, const Config& config, MlpWorkspace& ws) {
    std::vector<double> all(static_cast<std::size_t>(model.alphabet.q));
    partial_energies(model, config, ws, all.data());
    return all[config[static_cast<std::size_t>(model.u)]];
}

std::vector<double> learned_conditional(const ConditionalModel& model, const Config& config) {
    const int q = model.alphabet.q;
    MlpWorkspace ws;
    std::vector<double> logits(static_cast<std::size_t>(q));
    partial_energies(model, config, ws, logits.data());
    const double peak = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& v : logits) {
        v = std::exp(v - peak);
        total += v;
    }
    for (double& v : logits) v /= total;
    return logits;
}

double neuriso_value(const ConditionalModel& model, const SampleSet& samples,
                     const std::vector<double>& weights) {
    if (samples.p() != model.p || samples.alphabet().q != model.alphabet.q)
        throw invalid_input("samples do not match the conditional model's (p, q)");
    if (!weights.empty() && weights.size() != samples.size())
        throw invalid_input("need one weight per sample");
    const std::size_t n = samples.size();
    const int q = model.alphabet.q;
    std::vector<MlpWorkspace> pool(static_cast<std::size_t>(omp_get_max_threads()) + 1);
    std::vector<double> total(1, 0.0);
    par::accumulate_chunks(n, 1, total.data(), [&](std::size_t lo, std::size_t hi, double* acc) {
        MlpWorkspace& ws = pool[static_cast<std::size_t>(omp_get_thread_num())];
        std::vector<double> energies(static_cast<std::size_t>(q));
        Config config;
        for (std::size_t t = lo; t < hi; ++t) {
            config = samples.config(t);
            partial_energies(model, config, ws, energies.data());
            const double h = energies[config[static_cast<std::size_t>(model.u)]];
            const double w = weights.empty() ? 1.0 / static_cast<double>(n) : weights[t];
            acc[0] += w * std::exp(-h);
        }
    });
    return total[0];
}

double neuriso_batch_gradient(const ConditionalModel& model, const SampleSet& samples,
                              const std::vector<std::size_t>& indices,
                              std::vector<double>& grad) {
    if (model.flavor == ConditionalFlavor::linear)
        throw invalid_input("batch gradient applies to net-flavored models");
    const std::size_t n_params = model.net.params.size();
    const std::size_t batch = indices.size();
    if (batch == 0) throw invalid_input("empty minibatch");
    const int q = model.alphabet.q;
    const int in_dim = model.net.spec.input_dim;
    const std::size_t out_dim = static_cast<std::size_t>(model.net.spec.output_dim);

    std::vector<MlpWorkspace> pool(static_cast<std::size_t>(omp_get_max_threads()) + 1);
    std::vector<double> acc_all(n_params + 1, 0.0);
    par::accumulate_chunks(batch, n_params + 1, acc_all.data(),
                           [&](std::size_t lo, std::size_t hi, double* acc) {
        MlpWorkspace& ws = pool[static_cast<std::size_t>(omp_get_thread_num())];
        std::vector<double> input(static_cast<std::size_t>(in_dim));
        std::vector<double> cotangent(out_dim);
        Config config;
        for (std::size_t b = lo; b < hi; ++b) {
            config = samples.config(indices[b]);
            encode_conditional_input(config, model.u, model.alphabet, input.data());
            const std::vector<double>& out_vec = mlp_forward(model.net, input.data(), ws);
            const Symbol su = config[static_cast<std::size_t>(model.u)];
            double e;
            if (model.flavor == ConditionalFlavor::binary_net) {
                const double spin = Alphabet::spin(su);
                e = std::exp(-spin * out_vec[0]);
                cotangent[0] = -spin * e;
            } else {
                double mean = 0.0;
                for (std::size_t s = 0; s < out_dim; ++s) mean += out_vec[s];
                mean /= static_cast<double>(q);
                e = std::exp(-(out_vec[su] - mean));
                // d/d out_s of <Phi(su), out> is Phi_s(su)
                for (std::size_t s = 0; s < out_dim; ++s)
                    cotangent[s] = -e * (-1.0 / static_cast<double>(q));
                cotangent[su] -= e;
            }
            mlp_backward(model.net, input.data(), cotangent.data(), ws, acc);
            acc[n_params] += e;
        }
    });
    const double scale = 1.0 / static_cast<double>(batch);
    grad.assign(acc_all.begin(), acc_all.begin() + static_cast<std::ptrdiff_t>(n_params));
    for (double& g : grad) g *= scale;
    return acc_all[n_params] * scale;
}

std::pair<std::size_t, std::size_t> input_weight_range(const MlpSpec& spec) {
    const std::size_t first = mlp_weight_offset(spec, 0);
    return {first, first + static_cast<std::size_t>(spec.input_dim) *
                       static_cast<std::size_t>(spec.hidden_width)};
}

NeuriseFit neurise_fit(int u, const SampleSet& samples, MlpSpec spec, const TrainConfig& config) {
    const int p = samples.p();
    const Alphabet alphabet = samples.alphabet();
    if (u < 0 || u >= p) throw invalid_input("center variable out of range");
    if (config.minibatch < 1) throw invalid_input("minibatch must be >= 1");
    if (config.validation_fraction < 0.0 || config.validation_fraction >= 1.0)
        throw invalid_input("validation fraction must be in [0, 1)");

    const int expected_in = conditional_input_dim(p, alphabet.q);
    const int expected_out = alphabet.q == 2 ? 1 : alphabet.q;
    if (spec.input_dim == 0) spec.input_dim = expected_in;
    if (spec.output_dim == 0) spec.output_dim = expected_out;
    if (spec.input_dim != expected_in || spec.output_dim != expected_out)
        throw invalid_input("net spec dims do not fit (p, q)");

    Rng rng(config.seed);
    Mlp net = make_mlp(spec);
    glorot_init(net, rng);
    if (config.zero_input_init) zero_input_weights(net);
    ConditionalModel model = make_net_conditional(u, p, alphabet, std::move(net));

    // Deterministic permutation; a validation prefix is held out.
    const std::size_t n = samples.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto shuffle = [&rng](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.uniform_int(i)]);
    };
    shuffle(order);
    const std::size_t n_val = static_cast<std::size_t>(config.validation_fraction *
                                                       static_cast<double>(n));
    std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    if (train_idx.empty()) throw invalid_input("validation fraction leaves no training data");

    Optimizer optimizer(config.optimizer, model.net.params.size());
    const auto [in_first, in_last] = input_weight_range(spec);

    NeuriseFit result;
    std::vector<double> grad;
    std::vector<std::size_t> batch;
    const std::size_t batch_size = static_cast<std::size_t>(config.minibatch);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle(train_idx);
        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < train_idx.size(); start += batch_size) {
            const std::size_t stop = std::min(start + batch_size, train_idx.size());
            batch.assign(train_idx.begin() + static_cast<std::ptrdiff_t>(start),
                         train_idx.begin() + static_cast<std::ptrdiff_t>(stop));
            const double loss = neuriso_batch_gradient(model, samples, batch, grad);
            if (!std::isfinite(loss))
                throw solver_error("training loss diverged at epoch " + std::to_string(epoch) +
                                   " for variable " + std::to_string(u) +
                                   "; try a smaller learning rate");
            optimizer.step(model.net.params, grad);
            if (config.lambda_input > 0.0)
                optimizer.prox_l1(model.net.params, in_first, in_last, config.lambda_input);
            epoch_loss += loss;
            ++n_batches;
        }
        if (config.log_every > 0 && (epoch % config.log_every == 0 || epoch == config.epochs)) {
            EpochLog log;
            log.epoch = epoch;
            log.train_loss = epoch_loss / static_cast<double>(n_batches);
            if (n_val > 0) {
                double val = 0.0;
                MlpWorkspace ws;
                std::vector<double> energies(static_cast<std::size_t>(alphabet.q));
                for (std::size_t t : val_idx) {
                    const Config c = samples.config(t);
                    partial_energies(model, c, ws, energies.data());
                    val += std::exp(-energies[c[static_cast<std::size_t>(u)]]);
                }
                log.validation_loss = val / static_cast<double>(n_val);
            }
            result.history.push_back(log);
        }
    }
    result.model = std::move(model);
    return result;
}

}  // namespace neurise
