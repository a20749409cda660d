#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "neurise/io.hpp"
#include "neurise/mlp.hpp"
#include "neurise/optim.hpp"
#include "test_util.hpp"

using namespace neurise;

TEST_CASE("parameter counts") {
    CHECK(mlp_param_count({9, 2, 10, 1}) == 221);
    CHECK(mlp_param_count({14, 2, 12, 1}) == 349);
    CHECK(mlp_param_count({1, 1, 1, 1}) == 4);
    CHECK_THROWS_AS(mlp_param_count({0, 1, 1, 1}), invalid_input);
}

TEST_CASE("flat layout offsets") {
    const MlpSpec spec{3, 2, 4, 2};
    CHECK(mlp_weight_offset(spec, 0) == 0);
    CHECK(mlp_bias_offset(spec, 0) == 12);
    CHECK(mlp_weight_offset(spec, 1) == 16);
    CHECK(mlp_bias_offset(spec, 1) == 32);
    CHECK(mlp_weight_offset(spec, 2) == 36);
    CHECK(mlp_param_count(spec) == 46);
}

TEST_CASE("zero nets output zero") {
    const Mlp net = make_mlp({5, 2, 7, 3});
    MlpWorkspace ws;
    const std::vector<double> input{0.3, -1.0, 2.0, 0.0, 1.0};
    const std::vector<double>& out = mlp_forward(net, input.data(), ws);
    for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("single-unit net computes swish") {
    Mlp net = make_mlp({1, 1, 1, 1});
    net.params = {1.0, 0.0, 1.0, 0.0};  // identity weights, zero biases
    MlpWorkspace ws;
    double x = 0.0;
    CHECK(mlp_forward(net, &x, ws)[0] == 0.0);
    x = 1.0;
    CHECK(mlp_forward(net, &x, ws)[0] == doctest::Approx(0.7310585786300049).epsilon(1e-14));
}

TEST_CASE("backward agrees with finite differences") {
    Rng rng(451);
    for (int instance = 0; instance < 24; ++instance) {
        const MlpSpec spec{1 + static_cast<int>(rng.uniform_int(7)),
                           1 + static_cast<int>(rng.uniform_int(3)),
                           1 + static_cast<int>(rng.uniform_int(16)),
                           1 + static_cast<int>(rng.uniform_int(4))};
        Mlp net = make_mlp(spec);
        glorot_init(net, rng);
        std::vector<double> input(static_cast<std::size_t>(spec.input_dim));
        for (double& v : input) v = rng.uniform(-1.5, 1.5);
        std::vector<double> cotangent(static_cast<std::size_t>(spec.output_dim));
        for (double& v : cotangent) v = rng.uniform(-1.0, 1.0);

        MlpWorkspace ws;
        mlp_forward(net, input.data(), ws);
        std::vector<double> grad(net.params.size(), 0.0);
        std::vector<double> input_grad(input.size(), 0.0);
        mlp_backward(net, input.data(), cotangent.data(), ws, grad.data(), input_grad.data());

        const auto objective = [&](const std::vector<double>& params) {
            Mlp probe = net;
            probe.params = params;
            MlpWorkspace pws;
            const std::vector<double>& out = mlp_forward(probe, input.data(), pws);
            double v = 0.0;
            for (std::size_t i = 0; i < cotangent.size(); ++i) v += cotangent[i] * out[i];
            return v;
        };
        const std::vector<double> fd = test::finite_difference(objective, net.params, 1e-4);
        CHECK(test::max_rel_error(grad, fd) < 1e-5);

        const auto by_input = [&](const std::vector<double>& x) {
            MlpWorkspace pws;
            const std::vector<double>& out = mlp_forward(net, x.data(), pws);
            double v = 0.0;
            for (std::size_t i = 0; i < cotangent.size(); ++i) v += cotangent[i] * out[i];
            return v;
        };
        const std::vector<double> fd_input = test::finite_difference(by_input, input, 1e-4);
        CHECK(test::max_rel_error(input_grad, fd_input) < 1e-5);
    }
}

TEST_CASE("zero cotangent gives zero gradients") {
    Rng rng(9);
    Mlp net = make_mlp({4, 2, 6, 2});
    glorot_init(net, rng);
    const std::vector<double> input{1.0, -0.5, 0.25, 2.0};
    const std::vector<double> cotangent{0.0, 0.0};
    MlpWorkspace ws;
    mlp_forward(net, input.data(), ws);
    std::vector<double> grad(net.params.size(), 0.0);
    mlp_backward(net, input.data(), cotangent.data(), ws, grad.data());
    for (double g : grad) CHECK(g == 0.0);
}

TEST_CASE("output bias gradient is the cotangent") {
    Rng rng(10);
    Mlp net = make_mlp({3, 1, 5, 2});
    glorot_init(net, rng);
    const std::vector<double> input{0.5, -1.0, 0.75};
    const std::vector<double> cotangent{2.5, -1.25};
    MlpWorkspace ws;
    mlp_forward(net, input.data(), ws);
    std::vector<double> grad(net.params.size(), 0.0);
    mlp_backward(net, input.data(), cotangent.data(), ws, grad.data());
    const std::size_t bias = mlp_bias_offset(net.spec, 1);
    CHECK(grad[bias] == cotangent[0]);
    CHECK(grad[bias + 1] == cotangent[1]);
}

TEST_CASE("forward is pure and save/load reproduces outputs bit-exactly") {
    Rng rng(77);
    Mlp net = make_mlp({6, 2, 9, 2});
    glorot_init(net, rng);
    std::vector<double> input(6);
    for (double& v : input) v = rng.uniform(-1.0, 1.0);
    MlpWorkspace ws;
    const std::vector<double> first = mlp_forward(net, input.data(), ws);
    const std::vector<double> second = mlp_forward(net, input.data(), ws);
    CHECK(first == second);

    const auto dir = std::filesystem::temp_directory_path() / "neurise_mlp_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "net.json").string();
    write_mlp(net, path);
    const Mlp loaded = read_mlp(path);
    CHECK(loaded.params == net.params);
    MlpWorkspace ws2;
    CHECK(mlp_forward(loaded, input.data(), ws2) == first);
    std::filesystem::remove_all(dir);
}

TEST_CASE("glorot init is deterministic and zero-input-init clears layer 0") {
    Rng r1(123), r2(123);
    Mlp a = make_mlp({5, 2, 4, 1});
    Mlp b = make_mlp({5, 2, 4, 1});
    glorot_init(a, r1);
    glorot_init(b, r2);
    CHECK(a.params == b.params);

    zero_input_weights(a);
    const std::size_t first = mlp_weight_offset(a.spec, 0);
    for (std::size_t i = first; i < first + 20; ++i) CHECK(a.params[i] == 0.0);
    // deeper layers untouched
    CHECK(a.params[mlp_weight_offset(a.spec, 1)] == b.params[mlp_weight_offset(b.spec, 1)]);
}

TEST_CASE("sgd step") {
    Optimizer opt({OptimizerKind::sgd, 0.1}, 1);
    std::vector<double> params{1.0};
    opt.step(params, {0.5});
    CHECK(params[0] == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("adam first step moves by the learning rate against the gradient sign") {
    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::adam;
    cfg.learning_rate = 1e-3;
    Optimizer opt(cfg, 2);
    std::vector<double> params{1.0, -2.0};
    opt.step(params, {0.7, -0.3});
    CHECK(std::abs(params[0] - (1.0 - 1e-3)) < 1e-9);
    CHECK(std::abs(params[1] - (-2.0 + 1e-3)) < 1e-9);
}

TEST_CASE("zero gradients leave parameters unchanged") {
    OptimizerConfig cfg;
    Optimizer opt(cfg, 3);
    std::vector<double> params{0.5, -0.25, 3.0};
    const std::vector<double> before = params;
    for (int i = 0; i < 5; ++i) opt.step(params, {0.0, 0.0, 0.0});
    CHECK(params == before);
}

TEST_CASE("prox reaches exact zeros") {
    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::sgd;
    cfg.learning_rate = 0.1;
    Optimizer opt(cfg, 2);
    std::vector<double> params{0.5, 0.004};
    opt.step(params, {0.0, 0.0});
    opt.prox_l1(params, 0, 2, 0.05);  // threshold 0.1 * 0.05 = 0.005
    CHECK(params[0] == doctest::Approx(0.495).epsilon(1e-12));
    CHECK(params[1] == 0.0);
}
