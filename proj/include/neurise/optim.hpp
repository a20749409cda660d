#pragma once

#include <cstddef>
#include <vector>

#include "neurise/errors.hpp"

namespace neurise {

enum class OptimizerKind { sgd, adam };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Stateful first-order optimizer over a flat parameter vector.
class Optimizer {
public:
    Optimizer(OptimizerConfig config, std::size_t dim);

    void step(std::vector<double>& params, const std::vector<double>& grad);

    /// Soft-thresholds params[begin, end) with the same per-coordinate step
    /// scale the last step() used (learning rate for SGD, the
    /// bias-corrected Adam denominator otherwise), so an l1 penalty of
    /// strength lambda behaves uniformly across coordinates and exact
    /// zeros are reachable.
    void prox_l1(std::vector<double>& params, std::size_t begin, std::size_t end, double lambda);

    const OptimizerConfig& config() const { return config_; }
    long steps_taken() const { return steps_; }

private:
    OptimizerConfig config_;
    long steps_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

}  // namespace neurise
