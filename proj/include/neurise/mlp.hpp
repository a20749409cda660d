#pragma once

#include <cstddef>
#include <vector>

#include "neurise/errors.hpp"
#include "neurise/rng.hpp"

namespace neurise {

/// Feed-forward net: hidden_depth swish layers of hidden_width units, then
/// an identity output layer.
struct MlpSpec {
    int input_dim = 1;
    int hidden_depth = 1;
    int hidden_width = 1;
    int output_dim = 1;

    bool operator==(const MlpSpec&) const = default;
};

/// Flat parameter layout, fixed so callers can address specific weights:
/// for each affine layer l = 0..hidden_depth, the weight matrix (row-major,
/// fan_out x fan_in) followed by the bias vector (fan_out). Layer 0 reads
/// the input, so the weights feeding input coordinate j form column j of
/// the first matrix: entries at offset r*input_dim + j, r = 0..width-1.
struct Mlp {
    MlpSpec spec;
    std::vector<double> params;
};

std::size_t mlp_param_count(const MlpSpec& spec);

int mlp_layer_count(const MlpSpec& spec);
int mlp_fan_in(const MlpSpec& spec, int layer);
int mlp_fan_out(const MlpSpec& spec, int layer);
std::size_t mlp_weight_offset(const MlpSpec& spec, int layer);
std::size_t mlp_bias_offset(const MlpSpec& spec, int layer);

/// Zero-initialized net.
Mlp make_mlp(const MlpSpec& spec);

/// Uniform(+-sqrt(6/(fan_in+fan_out))) weights, zero biases, every layer.
void glorot_init(Mlp& net, Rng& rng);

/// Clears the first-layer weight matrix (biases untouched).
void zero_input_weights(Mlp& net);

double swish(double x);
double swish_derivative(double x);

/// Reusable per-thread scratch for forward/backward passes.
struct MlpWorkspace {
    std::vector<std::vector<double>> pre;    // preactivation per layer
    std::vector<std::vector<double>> act;    // activation per layer
    std::vector<double> delta;               // backprop buffer
    std::vector<double> delta_prev;

    void resize(const MlpSpec& spec);
};

/// Runs the net; the returned reference points into the workspace and is
/// valid until the next forward call on that workspace.
const std::vector<double>& mlp_forward(const Mlp& net, const double* input, MlpWorkspace& ws);

/// Reverse-mode gradient of <cotangent, forward(input)>. Requires ws to
/// hold the forward pass of the same input. Adds into param_grad
/// (mlp_param_count entries); writes input_grad (input_dim entries) when
/// non-null.
void mlp_backward(const Mlp& net, const double* input, const double* cotangent, MlpWorkspace& ws,
                  double* param_grad, double* input_grad = nullptr);

}  // namespace neurise
