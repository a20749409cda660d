#pragma once

#include <cstdint>
#include <vector>

#include "neurise/grise.hpp"
#include "neurise/mlp.hpp"
#include "neurise/optim.hpp"
#include "neurise/samples.hpp"

namespace neurise {

enum class ConditionalFlavor { linear, binary_net, general_net };

/// Per-variable model of the partial energy around center u, in one of
/// three parameterizations:
///   linear      theta over an explicit partial basis
///   binary_net  q=2, scalar net over the other sites' spins; the partial
///               energy is spin(sigma_u) * NN(rest)
///   general_net q outputs over the concatenated centered-indicator
///               encodings of the other sites; the partial energy is
///               <Phi(sigma_u), NN(rest)>, automatically centered in u
struct ConditionalModel {
    int u = 0;
    int p = 0;
    Alphabet alphabet;
    ConditionalFlavor flavor = ConditionalFlavor::binary_net;

    PartialBasis basis;         // linear only
    std::vector<double> theta;  // linear only
    Mlp net;                    // net flavors
};

ConditionalModel make_linear_conditional(PartialBasis basis, std::vector<double> theta);
ConditionalModel make_net_conditional(int u, int p, const Alphabet& alphabet, Mlp net);

/// Net input width: p-1 spins for q=2, (p-1)*q indicator entries otherwise.
int conditional_input_dim(int p, int q);

/// Writes the net encoding of all sites except u into out.
void encode_conditional_input(const Config& config, int u, const Alphabet& alphabet, double* out);

/// Partial energy at each candidate symbol of sigma_u given the rest of
/// config; one net forward serves all q candidates. out must hold q slots.
void partial_energies(const ConditionalModel& model, const Config& config, MlpWorkspace& ws,
                      double* out);

/// Partial energy at config's own sigma_u.
double partial_energy(const ConditionalModel& model, const Config& config, MlpWorkspace& ws);

/// Softmax of the partial energies: the modeled conditional of sigma_u.
std::vector<double> learned_conditional(const ConditionalModel& model, const Config& config);

/// Screening objective: weighted average of exp(-partial energy at the
/// sample's own sigma_u). Uniform 1/n when weights is empty.
double neuriso_value(const ConditionalModel& model, const SampleSet& samples,
                     const std::vector<double>& weights = {});

/// Mean objective over the index subset and its gradient w.r.t. net
/// parameters (net flavors only). grad is resized and overwritten.
double neuriso_batch_gradient(const ConditionalModel& model, const SampleSet& samples,
                              const std::vector<std::size_t>& indices, std::vector<double>& grad);

struct TrainConfig {
    int epochs = 200;
    int minibatch = 256;
    OptimizerConfig optimizer;
    std::uint64_t seed = 0;
    double lambda_input = 0.0;      // l1 penalty on first-layer weights; 0 disables
    bool zero_input_init = false;
    double validation_fraction = 0.0;
    int log_every = 1;              // epochs between loss records
};

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;  // mean minibatch objective, data term only
    double validation_loss = std::numeric_limits<double>::quiet_NaN();
};

struct NeuriseFit {
    ConditionalModel model;
    std::vector<EpochLog> history;
};

/// Minibatch training of a net-flavored conditional for center u.
/// spec.input_dim / output_dim of 0 are derived from (p, q); non-zero
/// values must match. Deterministic under config.seed. Throws solver_error
/// on non-finite loss.
NeuriseFit neurise_fit(int u, const SampleSet& samples, MlpSpec spec, const TrainConfig& config);

/// Parameter index range [first, last) of the net's first-layer weight
/// matrix, the range the input penalty applies to.
std::pair<std::size_t, std::size_t> input_weight_range(const MlpSpec& spec);

}  // namespace neurise
