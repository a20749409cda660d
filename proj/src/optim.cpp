#include "neurise/optim.hpp"

#include <cmath>

namespace neurise {

Optimizer::Optimizer(OptimizerConfig config, std::size_t dim) : config_(config) {
    if (config_.learning_rate <= 0.0) throw invalid_input("learning rate must be > 0");
    if (config_.kind == OptimizerKind::adam) {
        m_.assign(dim, 0.0);
        v_.assign(dim, 0.0);
    }
}

void Optimizer::step(std::vector<double>& params, const std::vector<double>& grad) {
    if (params.size() != grad.size()) throw invalid_input("parameter/gradient length mismatch");
    if (config_.kind == OptimizerKind::adam && m_.size() != params.size())
        throw invalid_input("optimizer state sized for a different parameter vector");
    ++steps_;
    const double lr = config_.learning_rate;
    if (config_.kind == OptimizerKind::sgd) {
        for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grad[i];
        return;
    }
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
        v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
        const double mhat = m_[i] / c1;
        const double vhat = v_[i] / c2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
}

void Optimizer::prox_l1(std::vector<double>& params, std::size_t begin, std::size_t end,
                        double lambda) {
    if (lambda <= 0.0 || steps_ == 0) return;
    const double lr = config_.learning_rate;
    if (config_.kind == OptimizerKind::sgd) {
        const double t = lr * lambda;
        for (std::size_t i = begin; i < end; ++i) {
            const double x = params[i];
            params[i] = x > t ? x - t : (x < -t ? x + t : 0.0);
        }
        return;
    }
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
    for (std::size_t i = begin; i < end; ++i) {
        const double vhat = v_[i] / c2;
        const double t = lr * lambda / (std::sqrt(vhat) + config_.epsilon);
        const double x = params[i];
        params[i] = x > t ? x - t : (x < -t ? x + t : 0.0);
    }
}

}  // namespace neurise
