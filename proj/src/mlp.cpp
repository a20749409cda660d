#include "neurise/mlp.hpp"

#include <cmath>

namespace neurise {

namespace {

void check_spec(const MlpSpec& spec) {
    if (spec.input_dim < 1 || spec.hidden_depth < 1 || spec.hidden_width < 1 ||
        spec.output_dim < 1)
        throw invalid_input("mlp spec dimensions must all be >= 1");
}

}  // namespace

int mlp_layer_count(const MlpSpec& spec) { return spec.hidden_depth + 1; }

int mlp_fan_in(const MlpSpec& spec, int layer) {
    return layer == 0 ? spec.input_dim : spec.hidden_width;
}

int mlp_fan_out(const MlpSpec& spec, int layer) {
    return layer == spec.hidden_depth ? spec.output_dim : spec.hidden_width;
}

std::size_t mlp_weight_offset(const MlpSpec& spec, int layer) {
    std::size_t off = 0;
    for (int l = 0; l < layer; ++l)
        off += static_cast<std::size_t>(mlp_fan_in(spec, l)) * static_cast<std::size_t>(mlp_fan_out(spec, l)) +
               static_cast<std::size_t>(mlp_fan_out(spec, l));
    return off;
}

std::size_t mlp_bias_offset(const MlpSpec& spec, int layer) {
    return mlp_weight_offset(spec, layer) +
           static_cast<std::size_t>(mlp_fan_in(spec, layer)) * static_cast<std::size_t>(mlp_fan_out(spec, layer));
}

std::size_t mlp_param_count(const MlpSpec& spec) {
    check_spec(spec);
    return mlp_weight_offset(spec, mlp_layer_count(spec));
}

Mlp make_mlp(const MlpSpec& spec) {
    Mlp net;
    net.spec = spec;
    net.params.assign(mlp_param_count(spec), 0.0);
    return net;
}

void glorot_init(Mlp& net, Rng& rng) {
    for (int l = 0; l < mlp_layer_count(net.spec); ++l) {
        const int fan_in = mlp_fan_in(net.spec, l);
        const int fan_out = mlp_fan_out(net.spec, l);
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        double* w = net.params.data() + mlp_weight_offset(net.spec, l);
        for (int i = 0; i < fan_in * fan_out; ++i) w[i] = rng.uniform(-bound, bound);
        double* b = net.params.data() + mlp_bias_offset(net.spec, l);
        for (int i = 0; i < fan_out; ++i) b[i] = 0.0;
    }
}

void zero_input_weights(Mlp& net) {
    double* w = net.params.data() + mlp_weight_offset(net.spec, 0);
    const std::size_t count = static_cast<std::size_t>(mlp_fan_in(net.spec, 0)) *
                              static_cast<std::size_t>(mlp_fan_out(net.spec, 0));
    for (std::size_t i = 0; i < count; ++i) w[i] = 0.0;
}

double swish(double x) { return x / (1.0 + std::exp(-x)); }

double swish_derivative(double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 + x * (1.0 - s));
}

void MlpWorkspace::resize(const MlpSpec& spec) {
    const int layers = mlp_layer_count(spec);
    pre.resize(static_cast<std::size_t>(layers));
    act.resize(static_cast<std::size_t>(layers));
    int widest = spec.input_dim;
    for (int l = 0; l < layers; ++l) {
        pre[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(mlp_fan_out(spec, l)));
        act[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(mlp_fan_out(spec, l)));
        widest = std::max(widest, mlp_fan_out(spec, l));
    }
    delta.resize(static_cast<std::size_t>(widest));
    delta_prev.resize(static_cast<std::size_t>(widest));
}

const std::vector<double>& mlp_forward(const Mlp& net, const double* input, MlpWorkspace& ws) {
    const MlpSpec& spec = net.spec;
    ws.resize(spec);
    const double* x = input;
    for (int l = 0; l < mlp_layer_count(spec); ++l) {
        const int fan_in = mlp_fan_in(spec, l);
        const int fan_out = mlp_fan_out(spec, l);
        const double* w = net.params.data() + mlp_weight_offset(spec, l);
        const double* b = net.params.data() + mlp_bias_offset(spec, l);
        std::vector<double>& pre = ws.pre[static_cast<std::size_t>(l)];
        std::vector<double>& act = ws.act[static_cast<std::size_t>(l)];
        for (int r = 0; r < fan_out; ++r) {
            const double* row = w + static_cast<std::size_t>(r) * static_cast<std::size_t>(fan_in);
            double z = b[r];
            for (int c = 0; c < fan_in; ++c) z += row[c] * x[c];
            pre[static_cast<std::size_t>(r)] = z;
            act[static_cast<std::size_t>(r)] = l == spec.hidden_depth ? z : swish(z);
        }
        x = act.data();
    }
    return ws.act.back();
}

void mlp_backward(const Mlp& net, const double* input, const double* cotangent, MlpWorkspace& ws,
                  double* param_grad, double* input_grad) {
    const MlpSpec& spec = net.spec;
    const int layers = mlp_layer_count(spec);
    // delta holds d<cotangent, out>/d(preactivation of layer l)
    double* delta = ws.delta.data();
    double* delta_prev = ws.delta_prev.data();
    for (int r = 0; r < spec.output_dim; ++r) delta[r] = cotangent[r];

    for (int l = layers - 1; l >= 0; --l) {
        const int fan_in = mlp_fan_in(spec, l);
        const int fan_out = mlp_fan_out(spec, l);
        const double* below = l == 0 ? input : ws.act[static_cast<std::size_t>(l - 1)].data();
        double* gw = param_grad + mlp_weight_offset(spec, l);
        double* gb = param_grad + mlp_bias_offset(spec, l);
        for (int r = 0; r < fan_out; ++r) {
            const double d = delta[r];
            double* grow = gw + static_cast<std::size_t>(r) * static_cast<std::size_t>(fan_in);
            for (int c = 0; c < fan_in; ++c) grow[c] += d * below[c];
            gb[r] += d;
        }
        if (l == 0 && input_grad == nullptr) break;
        const double* w = net.params.data() + mlp_weight_offset(spec, l);
        for (int c = 0; c < fan_in; ++c) delta_prev[c] = 0.0;
        for (int r = 0; r < fan_out; ++r) {
            const double d = delta[r];
            const double* row = w + static_cast<std::size_t>(r) * static_cast<std::size_t>(fan_in);
            for (int c = 0; c < fan_in; ++c) delta_prev[c] += d * row[c];
        }
        if (l == 0) {
            for (int c = 0; c < fan_in; ++c) input_grad[c] = delta_prev[c];
            break;
        }
        const std::vector<double>& pre_below = ws.pre[static_cast<std::size_t>(l - 1)];
        for (int c = 0; c < fan_in; ++c)
            delta_prev[c] *= swish_derivative(pre_below[static_cast<std::size_t>(c)]);
        std::swap(delta, delta_prev);
    }
}

}  // namespace neurise
