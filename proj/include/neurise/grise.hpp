#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "neurise/basis.hpp"
#include "neurise/samples.hpp"

namespace neurise {

/// Screening objective for one center variable: the weighted average of
/// exp(-sum_k theta_k g_k(sigma)) over samples. Caches the design values
/// g_k(sigma^(t)) when they fit the byte cap, otherwise streams them.
///
/// The problem keeps references to the basis and samples; both must outlive
/// it. Optional per-sample weights (summing to 1) replace the uniform 1/n
/// average; enumerating all configurations with their exact probabilities
/// as weights gives the population objective.
class GriseProblem {
public:
    GriseProblem(const PartialBasis& basis, const SampleSet& samples,
                 std::vector<double> weights = {},
                 std::size_t cache_cap_bytes = (std::size_t{1} << 28));

    std::size_t term_count() const { return basis_->terms.size(); }
    std::size_t sample_count() const { return samples_->size(); }
    const PartialBasis& basis() const { return *basis_; }
    bool cached() const { return !design_.empty(); }

    double value(const std::vector<double>& theta) const;
    /// Writes the gradient into grad (resized) and returns the value.
    double value_and_gradient(const std::vector<double>& theta, std::vector<double>& grad) const;

private:
    const PartialBasis* basis_;
    const SampleSet* samples_;
    std::vector<double> weights_;      // empty => uniform 1/n
    std::vector<double> design_;       // row-major [t][k] when cached
    void design_row(std::size_t t, std::vector<double>& row) const;
    double weight(std::size_t t) const {
        return weights_.empty() ? 1.0 / static_cast<double>(samples_->size()) : weights_[t];
    }
};

double iso_value(const GriseProblem& problem, const std::vector<double>& theta);
std::vector<double> iso_gradient(const GriseProblem& problem, const std::vector<double>& theta);

enum class GriseMode { penalized, constrained };

struct GriseSolverSettings {
    double tol = 1e-7;          // stop when the prox-gradient mapping norm drops below
    int max_iterations = 50000;
    double initial_step = 1.0;  // backtracking halves from here
};

struct GriseSolution {
    int u = 0;
    std::vector<double> theta;
    double objective = 0.0;     // penalized: S_n + lambda*||theta||_1; constrained: S_n
    int iterations = 0;
    bool converged = false;
    GriseMode mode = GriseMode::penalized;
    double penalty = 0.0;       // lambda (penalized) or gamma (constrained)
    GriseSolverSettings settings;
};

/// Proximal gradient (penalized) or projected gradient (constrained) descent
/// with Armijo backtracking. Never throws on non-convergence; the flag says.
GriseSolution grise_fit(const GriseProblem& problem, GriseMode mode, double penalty,
                        const GriseSolverSettings& settings = {});

/// Penalty rule of thumb: c * sqrt(ln p / n).
double grise_penalty_rule_of_thumb(int p, std::size_t n, double c = 1.0);

double soft_threshold(double x, double threshold);

/// Euclidean projection onto the l1 ball of the given radius.
std::vector<double> project_l1_ball(const std::vector<double>& v, double radius);

}  // namespace neurise
