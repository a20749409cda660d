#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "neurise/exact.hpp"
#include "neurise/grise.hpp"
#include "neurise/reference.hpp"
#include "test_util.hpp"

using namespace neurise;

namespace {

/// All configurations of a model paired with their exact probabilities,
/// for population (infinite-sample) objectives.
std::pair<SampleSet, std::vector<double>> population_samples(const EnergyModel& model) {
    const ExactDistribution dist = exact_distribution(model);
    std::vector<Symbol> data;
    for (std::uint64_t x = 0; x < dist.probs.size(); ++x) {
        const Config c = decode_config(x, model.p, model.alphabet.q);
        data.insert(data.end(), c.begin(), c.end());
    }
    return {SampleSet(model.p, model.alphabet, std::move(data)), dist.probs};
}

SampleSet single_row(const Config& config, int copies, const Alphabet& alphabet) {
    std::vector<Symbol> data;
    for (int i = 0; i < copies; ++i) data.insert(data.end(), config.begin(), config.end());
    return SampleSet(static_cast<int>(config.size()), alphabet, std::move(data));
}

}  // namespace

TEST_CASE("objective value basics") {
    // 4 identical rows, theta = 0: exp(0) averaged over a power-of-two count
    const PartialBasis basis = build_partial_basis(2, Alphabet(2), 2, 0, TermKind::monomial);
    const SampleSet samples = single_row({0, 0}, 4, Alphabet(2));
    const GriseProblem problem(basis, samples);
    CHECK(iso_value(problem, std::vector<double>(basis.terms.size(), 0.0)) == 1.0);

    // single pair term, theta = 1, spins (+1, +1)
    PartialBasis pair_only;
    pair_only.u = 0;
    pair_only.p = 2;
    pair_only.alphabet = Alphabet(2);
    pair_only.max_order = 2;
    BasisTerm pair;
    pair.sites = {0, 1};
    pair_only.terms = {pair};
    const SampleSet one = single_row({0, 0}, 1, Alphabet(2));
    const GriseProblem single_term(pair_only, one);
    CHECK(iso_value(single_term, {1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    CHECK_THROWS_AS(iso_value(single_term, {1.0, 2.0}), invalid_input);
}

TEST_CASE("gradient at zero theta is minus the design average") {
    // one sample with basis values (+1, -1): gradient is (-1, +1)
    PartialBasis basis;
    basis.u = 0;
    basis.p = 2;
    basis.alphabet = Alphabet(2);
    basis.max_order = 2;
    BasisTerm site;
    site.sites = {0};
    BasisTerm pair;
    pair.sites = {0, 1};
    basis.terms = {site, pair};
    const SampleSet one = single_row({0, 1}, 1, Alphabet(2));
    const GriseProblem problem(basis, one);
    const std::vector<double> grad = iso_gradient(problem, {0.0, 0.0});
    CHECK(grad[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(grad[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cached kernel matches the serial reference") {
    Rng rng(8);
    const EnergyModel model = test::random_binary_model(5, 6, 2, rng);
    const ExactDistribution dist = exact_distribution(model);
    const SampleSet samples = exact_sample(dist, 500, 19);
    const PartialBasis basis = build_partial_basis(5, Alphabet(2), 2, 1, TermKind::monomial);
    std::vector<double> theta(basis.terms.size());
    for (double& t : theta) t = rng.uniform(-0.8, 0.8);

    const GriseProblem cached(basis, samples);
    CHECK(cached.cached());
    const double fast = iso_value(cached, theta);
    const double slow = reference::iso_value(basis, samples, theta);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-12));

    const std::vector<double> g_fast = iso_gradient(cached, theta);
    const std::vector<double> g_slow = reference::iso_gradient(basis, samples, theta);
    CHECK(test::max_rel_error(g_fast, g_slow) < 1e-12);

    // the streaming path (cache disabled) agrees too
    const GriseProblem streaming(basis, samples, {}, 0);
    CHECK(!streaming.cached());
    CHECK(iso_value(streaming, theta) == doctest::Approx(slow).epsilon(1e-12));
    const std::vector<double> g_stream = iso_gradient(streaming, theta);
    CHECK(test::max_rel_error(g_stream, g_slow) < 1e-12);
}

TEST_CASE("gradient agrees with central finite differences") {
    Rng rng(13);
    const EnergyModel model = test::random_binary_model(5, 6, 3, rng);
    const SampleSet samples = exact_sample(exact_distribution(model), 400, 7);
    const PartialBasis basis = build_partial_basis(5, Alphabet(2), 3, 2, TermKind::monomial);
    std::vector<double> theta(basis.terms.size());
    for (double& t : theta) t = rng.uniform(-0.5, 0.5);

    const GriseProblem problem(basis, samples);
    const std::vector<double> grad = iso_gradient(problem, theta);
    const std::vector<double> fd = test::finite_difference(
        [&problem](const std::vector<double>& x) { return iso_value(problem, x); }, theta, 1e-5);
    CHECK(test::max_rel_error(grad, fd) < 1e-6);
}

TEST_CASE("population gradient vanishes at the true parameters") {
    const EnergyModel model = gen_er_pairwise(6, 0.5, -0.7, 0.7, 23);
    auto [samples, weights] = population_samples(model);
    const Alphabet a2(2);
    for (int u = 0; u < 6; ++u) {
        const PartialBasis basis = build_partial_basis(6, a2, 2, u, TermKind::monomial);
        const GriseProblem problem(basis, samples, weights);
        const std::vector<double> grad = iso_gradient(problem, test::theta_star(model, basis));
        for (double g : grad) CHECK(std::abs(g) < 1e-8);
    }
}

TEST_CASE("soft threshold and l1 projection primitives") {
    CHECK(soft_threshold(0.5, 0.2) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(soft_threshold(-0.5, 0.2) == doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(soft_threshold(0.1, 0.2) == 0.0);

    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> v(3);
        for (double& x : v) x = rng.uniform(-2.0, 2.0);
        const double radius = rng.uniform(0.1, 2.0);
        const std::vector<double> proj = project_l1_ball(v, radius);
        double norm = 0.0, dist = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            norm += std::abs(proj[i]);
            dist += (v[i] - proj[i]) * (v[i] - proj[i]);
        }
        CHECK(norm <= radius + 1e-9);
        // no feasible grid point may be closer
        const double step = radius / 20.0;
        for (double x = -radius; x <= radius + 1e-12; x += step)
            for (double y = -radius; y <= radius + 1e-12; y += step) {
                const double budget = radius - std::abs(x) - std::abs(y);
                if (budget < 0.0) continue;
                for (double z : {-budget, 0.0, budget}) {
                    const double d = (v[0] - x) * (v[0] - x) + (v[1] - y) * (v[1] - y) +
                                     (v[2] - z) * (v[2] - z);
                    CHECK(dist <= d + 1e-9);
                }
            }
    }
}

TEST_CASE("objective is convex along segments") {
    Rng rng(31);
    const EnergyModel model = test::random_binary_model(5, 5, 2, rng);
    const SampleSet samples = exact_sample(exact_distribution(model), 300, 3);
    const PartialBasis basis = build_partial_basis(5, Alphabet(2), 2, 0, TermKind::monomial);
    const GriseProblem problem(basis, samples);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> t1(basis.terms.size()), t2(basis.terms.size());
        for (double& x : t1) x = rng.uniform(-1.0, 1.0);
        for (double& x : t2) x = rng.uniform(-1.0, 1.0);
        const double v1 = iso_value(problem, t1);
        const double v2 = iso_value(problem, t2);
        for (double alpha : {0.25, 0.5, 0.75}) {
            std::vector<double> mix(basis.terms.size());
            for (std::size_t i = 0; i < mix.size(); ++i)
                mix[i] = alpha * t1[i] + (1.0 - alpha) * t2[i];
            CHECK(iso_value(problem, mix) <= alpha * v1 + (1.0 - alpha) * v2 + 1e-10);
        }
    }
}

TEST_CASE("degenerate data drives the constraint active") {
    const PartialBasis basis = build_partial_basis(3, Alphabet(2), 2, 0, TermKind::monomial);
    const SampleSet identical = single_row({0, 0, 0}, 16, Alphabet(2));
    const GriseProblem problem(basis, identical);
    const double gamma = 2.0;
    const GriseSolution sol = grise_fit(problem, GriseMode::constrained, gamma);
    double norm = 0.0;
    for (double t : sol.theta) norm += std::abs(t);
    CHECK(norm == doctest::Approx(gamma).epsilon(1e-6));
    CHECK(norm <= gamma + 1e-8);
}

TEST_CASE("penalized with zero penalty matches a loose constraint") {
    Rng rng(17);
    const EnergyModel model = test::random_binary_model(4, 4, 2, rng);
    const SampleSet samples = exact_sample(exact_distribution(model), 5000, 29);
    const PartialBasis basis = build_partial_basis(4, Alphabet(2), 2, 0, TermKind::monomial);
    const GriseProblem problem(basis, samples);
    GriseSolverSettings settings;
    settings.tol = 1e-9;
    const GriseSolution pen = grise_fit(problem, GriseMode::penalized, 0.0, settings);
    const GriseSolution con = grise_fit(problem, GriseMode::constrained, 100.0, settings);
    CHECK(pen.converged);
    CHECK(con.converged);
    CHECK(test::max_rel_error(pen.theta, con.theta) < 1e-4);
}

TEST_CASE("parameter recovery improves with more samples") {
    const EnergyModel model = gen_er_pairwise(8, 2.5 / 7.0, -0.7, 0.7, 91);
    const ExactDistribution dist = exact_distribution(model);
    const Alphabet a2(2);
    std::vector<double> errors;
    for (const std::size_t n : {std::size_t{1000}, std::size_t{10000}, std::size_t{100000}}) {
        const SampleSet samples = exact_sample(dist, n, 55);
        const double lambda = grise_penalty_rule_of_thumb(8, n);
        double worst = 0.0;
        for (int u = 0; u < 8; ++u) {
            const PartialBasis basis = build_partial_basis(8, a2, 2, u, TermKind::monomial);
            const GriseProblem problem(basis, samples);
            GriseSolverSettings settings;
            settings.tol = 1e-6;
            const GriseSolution sol = grise_fit(problem, GriseMode::penalized, lambda, settings);
            const std::vector<double> star = test::theta_star(model, basis);
            for (std::size_t k = 0; k < star.size(); ++k)
                worst = std::max(worst, std::abs(sol.theta[k] - star[k]));
        }
        errors.push_back(worst);
    }
    CHECK(errors[1] <= errors[0]);
    CHECK(errors[2] <= errors[1]);
    CHECK(errors[2] < 0.1);
}
