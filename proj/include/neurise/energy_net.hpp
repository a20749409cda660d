#pragma once

#include <cstdint>
#include <vector>

#include "neurise/conditional.hpp"
#include "neurise/model.hpp"

namespace neurise {

/// Single scalar net over all p spins, modeling the complete energy
/// function of a binary model (up to an additive constant).
struct EnergyNet {
    int p = 0;
    Mlp net;  // input_dim = p, output_dim = 1
};

EnergyNet make_energy_net(int p, Mlp net);

/// Spin at u negated, other sites unchanged. Binary alphabets only.
Config flip(const Config& config, int u, const Alphabet& alphabet);

/// Writes the p spin values of config into out.
void encode_energy_input(const Config& config, double* out);

double net_energy(const EnergyNet& net, const Config& config, MlpWorkspace& ws);

/// Aggregated flip objective:
///   (1/n) sum_t sum_u exp((NN(config_t with u flipped) - NN(config_t)) / 2).
/// Depends on energy differences only, so it is invariant under adding a
/// constant to the net output. Equals p exactly for a constant net.
double full_energy_loss(const EnergyNet& net, const SampleSet& samples);

/// Mean loss over the index subset and its parameter gradient.
double energy_batch_gradient(const EnergyNet& net, const SampleSet& samples,
                             const std::vector<std::size_t>& indices, std::vector<double>& grad);

struct EnergyFitResult {
    EnergyNet net;
    std::vector<EpochLog> history;
};

/// Minibatch training on the aggregated flip objective. Binary samples
/// only; deterministic under config.seed.
EnergyFitResult energy_fit(const SampleSet& samples, MlpSpec spec, const TrainConfig& config);

struct EnergyGap {
    double mean_abs = 0.0;
    double max_abs = 0.0;
};

/// Compares the net against an explicit model over the full cube after
/// removing each function's mean (energies are defined up to a constant).
EnergyGap energy_compare(const EnergyNet& net, const EnergyModel& truth,
                         std::uint64_t cap = (1ull << 24));

}  // namespace neurise
