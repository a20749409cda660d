#include "neurise/grise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "neurise/parallel.hpp"

namespace neurise {

GriseProblem::GriseProblem(const PartialBasis& basis, const SampleSet& samples,
                           std::vector<double> weights, std::size_t cache_cap_bytes)
    : basis_(&basis), samples_(&samples), weights_(std::move(weights)) {
    if (basis.p != samples.p() || basis.alphabet.q != samples.alphabet().q)
        throw invalid_input("basis and samples disagree on (p, q)");
    if (!weights_.empty() && weights_.size() != samples.size())
        throw invalid_input("need one weight per sample");
    const std::size_t n = samples.size();
    const std::size_t k = basis.terms.size();
    if (n * k * sizeof(double) <= cache_cap_bytes) {
        design_.resize(n * k);
        par::for_each(n, [&](std::size_t t) {
            const Config config = samples_->config(t);
            double* row = design_.data() + t * k;
            for (std::size_t j = 0; j < k; ++j)
                row[j] = eval_basis(basis_->terms[j], config, basis_->alphabet);
        });
    }
}

void GriseProblem::design_row(std::size_t t, std::vector<double>& row) const {
    const std::size_t k = basis_->terms.size();
    row.resize(k);
    if (!design_.empty()) {
        std::copy_n(design_.data() + t * k, k, row.data());
        return;
    }
    const Config config = samples_->config(t);
    for (std::size_t j = 0; j < k; ++j)
        row[j] = eval_basis(basis_->terms[j], config, basis_->alphabet);
}

double GriseProblem::value(const std::vector<double>& theta) const {
    const std::size_t k = basis_->terms.size();
    if (theta.size() != k)
        throw invalid_input("theta length " + std::to_string(theta.size()) +
                            " does not match term count " + std::to_string(k));
    const std::size_t n = samples_->size();
    if (!design_.empty()) {
        const double* design = design_.data();
        return par::sum(n, [&](std::size_t t) {
            const double* row = design + t * k;
            double z = 0.0;
            for (std::size_t j = 0; j < k; ++j) z += theta[j] * row[j];
            return weight(t) * std::exp(-z);
        });
    }
    // Streaming path keeps the same chunk structure; one scratch row per
    // chunk would race, so rows are rebuilt per sample.
    return par::sum(n, [&](std::size_t t) {
        const Config config = samples_->config(t);
        double z = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            z += theta[j] * eval_basis(basis_->terms[j], config, basis_->alphabet);
        return weight(t) * std::exp(-z);
    });
}

double GriseProblem::value_and_gradient(const std::vector<double>& theta,
                                        std::vector<double>& grad) const {
    const std::size_t k = basis_->terms.size();
    if (theta.size() != k) throw invalid_input("theta length does not match term count");
    const std::size_t n = samples_->size();

    // One fused pass; slot k of the accumulator holds the value.
    std::vector<double> acc_all(k + 1, 0.0);
    if (!design_.empty()) {
        const double* design = design_.data();
        par::accumulate(n, k + 1, acc_all.data(), [&](std::size_t t, double* acc) {
            const double* row = design + t * k;
            double z = 0.0;
            for (std::size_t j = 0; j < k; ++j) z += theta[j] * row[j];
            const double e = weight(t) * std::exp(-z);
            for (std::size_t j = 0; j < k; ++j) acc[j] -= row[j] * e;
            acc[k] += e;
        });
    } else {
        par::accumulate(n, k + 1, acc_all.data(), [&](std::size_t t, double* acc) {
            const Config config = samples_->config(t);
            double z = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                z += theta[j] * eval_basis(basis_->terms[j], config, basis_->alphabet);
            const double e = weight(t) * std::exp(-z);
            for (std::size_t j = 0; j < k; ++j)
                acc[j] -= eval_basis(basis_->terms[j], config, basis_->alphabet) * e;
            acc[k] += e;
        });
    }
    grad.assign(acc_all.begin(), acc_all.begin() + static_cast<std::ptrdiff_t>(k));
    return acc_all[k];
}

double iso_value(const GriseProblem& problem, const std::vector<double>& theta) {
    return problem.value(theta);
}

std::vector<double> iso_gradient(const GriseProblem& problem, const std::vector<double>& theta) {
    std::vector<double> grad;
    problem.value_and_gradient(theta, grad);
    return grad;
}

double soft_threshold(double x, double threshold) {
    if (x > threshold) return x - threshold;
    if (x < -threshold) return x + threshold;
    return 0.0;
}

std::vector<double> project_l1_ball(const std::vector<double>& v, double radius) {
    if (radius <= 0.0) throw invalid_input("l1 ball radius must be positive");
    double norm = 0.0;
    for (double x : v) norm += std::abs(x);
    if (norm <= radius) return v;
    // Duchi et al. style: find the largest rho with |v|_(rho) > (cum - radius)/rho.
    std::vector<double> mags(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    double cum = 0.0;
    double tau = 0.0;
    for (std::size_t r = 0; r < mags.size(); ++r) {
        cum += mags[r];
        const double candidate = (cum - radius) / static_cast<double>(r + 1);
        if (mags[r] - candidate > 0.0)
            tau = candidate;
        else
            break;
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = soft_threshold(v[i], tau);
    return out;
}

double grise_penalty_rule_of_thumb(int p, std::size_t n, double c) {
    return c * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

namespace {

double l1_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

}  // namespace

GriseSolution grise_fit(const GriseProblem& problem, GriseMode mode, double penalty,
                        const GriseSolverSettings& settings) {
    if (mode == GriseMode::constrained && penalty <= 0.0)
        throw invalid_input("constraint radius gamma must be > 0");
    if (mode == GriseMode::penalized && penalty < 0.0)
        throw invalid_input("penalty lambda must be >= 0");

    GriseSolution sol;
    sol.u = problem.basis().u;
    sol.mode = mode;
    sol.penalty = penalty;
    sol.settings = settings;

    const std::size_t k = problem.term_count();
    std::vector<double> theta(k, 0.0);
    std::vector<double> grad;
    std::vector<double> trial(k);
    double step = settings.initial_step;

    double value = problem.value_and_gradient(theta, grad);
    for (int iter = 1; iter <= settings.max_iterations; ++iter) {
        sol.iterations = iter;
        // Backtracking on the smooth part's quadratic upper bound.
        double trial_value = 0.0;
        while (true) {
            if (mode == GriseMode::penalized) {
                for (std::size_t j = 0; j < k; ++j)
                    trial[j] = soft_threshold(theta[j] - step * grad[j], step * penalty);
            } else {
                for (std::size_t j = 0; j < k; ++j) trial[j] = theta[j] - step * grad[j];
                trial = project_l1_ball(trial, penalty);
            }
            double inner = 0.0;
            double dist2 = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                const double d = trial[j] - theta[j];
                inner += grad[j] * d;
                dist2 += d * d;
            }
            trial_value = problem.value(trial);
            if (trial_value <= value + inner + dist2 / (2.0 * step) + 1e-12) break;
            step *= 0.5;
            if (step < 1e-18) break;
        }
        if (step < 1e-18) break;  // stalled; converged stays false

        double move2 = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double d = trial[j] - theta[j];
            move2 += d * d;
        }
        theta.swap(trial);
        const double progress = std::sqrt(move2) / step;
        if (progress < settings.tol) {
            sol.converged = true;
            value = trial_value;
            break;
        }
        step = std::min(step * 2.0, 1e3);
        value = problem.value_and_gradient(theta, grad);
    }

    sol.theta = std::move(theta);
    const double data_term = problem.value(sol.theta);
    sol.objective = mode == GriseMode::penalized ? data_term + penalty * l1_norm(sol.theta)
                                                 : data_term;
    return sol;
}

}  // namespace neurise
