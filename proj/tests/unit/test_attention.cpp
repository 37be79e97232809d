#include "attnboost/attention.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace attnboost;

namespace {

AttentionParams random_params(std::size_t d, std::size_t k, Rng& rng) {
    AttentionParams p(d, k);
    for (auto t : p.tensors()) {
        for (double& v : t) {
            v = rng.uniform(-1.0, 1.0);
        }
    }
    return p;
}

std::vector<double> flatten(const AttentionParams& g) {
    std::vector<double> out;
    for (auto t : g.tensors()) {
        out.insert(out.end(), t.begin(), t.end());
    }
    return out;
}

}  // namespace

TEST_SUITE("attention_net") {

TEST_CASE("init is seeded, shaped and bias-free") {
    const AttentionParams a = init_params(19, 128, 42);
    const AttentionParams b = init_params(19, 128, 42);
    CHECK(a == b);
    CHECK(!(a == init_params(19, 128, 43)));

    const AttentionParams p = init_params(2, 3, 7);
    CHECK(p.w1.size() == 3 * 2);
    CHECK(p.w_attn.size() == 3 * 3);
    CHECK(p.w2.size() == 3);
    for (double v : p.b1) CHECK(v == 0.0);
    for (double v : p.b_attn) CHECK(v == 0.0);
    CHECK(p.b2 == 0.0);

    const double l1 = std::sqrt(6.0 / (2 + 3));
    const double la = std::sqrt(6.0 / (3 + 3));
    const double l2 = std::sqrt(6.0 / (3 + 1));
    for (double v : p.w1) CHECK(std::abs(v) <= l1);
    for (double v : p.w_attn) CHECK(std::abs(v) <= la);
    for (double v : p.w2) CHECK(std::abs(v) <= l2);

    CHECK_THROWS(init_params(0, 3, 1));
    CHECK_THROWS(init_params(3, 0, 1));
}

TEST_CASE("forward with zero parameters") {
    const AttentionParams p(4, 3);
    const std::vector<double> x{1, -2, 3, 0.5};
    const ForwardTrace t = forward(p, x);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(t.h[i] == 0.0);
        CHECK(t.alpha[i] == 0.5);
        CHECK(t.h_tilde[i] == 0.0);
    }
    CHECK(t.y_hat == 0.5);
}

TEST_CASE("dead ReLU layer gives sigmoid of the output bias") {
    AttentionParams p(2, 3);
    for (double& v : p.b1) v = -10.0;
    for (double& v : p.w2) v = 3.0;
    p.b2 = 0.7;
    const std::vector<double> x{0.5, -0.25};
    const ForwardTrace t = forward(p, x);
    for (double v : t.h) CHECK(v == 0.0);
    CHECK(t.y_hat == doctest::Approx(oracle::logistic(0.7)).epsilon(1e-15));
}

TEST_CASE("hand-computed forward pass") {
    AttentionParams p(2, 2);
    p.w1 = {1, 0, 0, 1};
    p.w2 = {1, 1};
    const std::vector<double> x{1, 2};
    const ForwardTrace t = forward(p, x);
    CHECK(t.h == std::vector<double>{1, 2});
    CHECK(t.alpha == std::vector<double>{0.5, 0.5});
    CHECK(t.h_tilde == std::vector<double>{0.5, 1.0});
    CHECK(t.y_hat == doctest::Approx(0.817574).epsilon(1e-6));
    CHECK(t.y_hat == doctest::Approx(1.0 / (1.0 + std::exp(-1.5))).epsilon(1e-15));

    const std::vector<double> wrong{1, 2, 3};
    CHECK_THROWS(forward(p, wrong));
}

TEST_CASE("trace invariants on random inputs") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + rng.below(8);
        const std::size_t k = 1 + rng.below(8);
        const AttentionParams p = random_params(d, k, rng);
        std::vector<double> x(d);
        for (double& v : x) v = rng.uniform(-2, 2);
        const ForwardTrace t = forward(p, x);
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(t.h[i] >= 0.0);
            CHECK(t.alpha[i] > 0.0);
            CHECK(t.alpha[i] < 1.0);
            CHECK(t.h_tilde[i] == t.alpha[i] * t.h[i]);
        }
        CHECK(t.y_hat > 0.0);
        CHECK(t.y_hat < 1.0);
    }
}

TEST_CASE("BCE values") {
    CHECK(bce_loss(0.5, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(bce_loss(0.5, 1) == doctest::Approx(0.693147).epsilon(1e-6));
    const double perfect = bce_loss(1.0, 1, 1e-12);
    CHECK(perfect >= 0.0);
    CHECK(perfect <= 1e-11);
    CHECK(bce_loss(0.9, 0) == doctest::Approx(2.302585).epsilon(1e-6));
    CHECK(bce_loss(0.0, 1, 1e-12) == doctest::Approx(-std::log(1e-12)));
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        CHECK(bce_loss(rng.uniform(), static_cast<int>(rng.below(2))) >= 0.0);
    }
}

TEST_CASE("output-bias gradient is y_hat minus y") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const AttentionParams p = random_params(3, 4, rng);
        const std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform()};
        const ForwardTrace t = forward(p, x);
        const int y = trial % 2;
        CHECK(backward(p, t, y).b2 == t.y_hat - y);
    }
}

TEST_CASE("zero input with zero biases gives zero first-layer gradient") {
    Rng rng(9);
    AttentionParams p = random_params(4, 5, rng);
    std::fill(p.b1.begin(), p.b1.end(), 0.0);
    std::fill(p.b_attn.begin(), p.b_attn.end(), 0.0);
    const std::vector<double> x(4, 0.0);
    const AttentionGradients g = backward(p, forward(p, x), 1);
    for (double v : g.w1) CHECK(v == 0.0);
}

TEST_CASE("gradients match central finite differences") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 5;
        const std::size_t k = 7;
        const AttentionParams p = random_params(d, k, rng);
        std::vector<double> x(d);
        for (double& v : x) v = rng.uniform(-1.5, 1.5);
        const int y = static_cast<int>(rng.below(2));
        const auto analytic = flatten(backward(p, forward(p, x), y));
        const auto numeric = oracle::finite_difference_gradient(p, x, y);
        REQUIRE(analytic.size() == numeric.size());
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            const double err = std::abs(analytic[i] - numeric[i]);
            CHECK(err <= std::max(1e-4 * std::abs(numeric[i]), 1e-7));
        }
    }
}

TEST_CASE("zero epochs returns the initialization") {
    const auto [x, y] = fixture::threshold_data(50, 3, 1);
    TrainConfig cfg;
    cfg.hidden_dim = 8;
    cfg.epochs = 0;
    const auto result = train_attention(x, y, cfg);
    CHECK(result.params == init_params(3, 8, cfg.seed));
    CHECK(result.loss_history.empty());
}

TEST_CASE("training is deterministic") {
    const auto [x, y] = fixture::threshold_data(120, 4, 2);
    TrainConfig cfg;
    cfg.hidden_dim = 16;
    cfg.epochs = 5;
    const auto a = train_attention(x, y, cfg);
    const auto b = train_attention(x, y, cfg);
    CHECK(a.params == b.params);
    CHECK(a.loss_history == b.loss_history);
}

TEST_CASE("separable toy set is learned") {
    // Label is the sign of x0 + x1.
    FeatureMatrix x(200, {"a", "b"});
    TargetVector y(200);
    Rng rng(77);
    for (std::size_t r = 0; r < 200; ++r) {
        x.at(r, 0) = rng.uniform(-1, 1);
        x.at(r, 1) = rng.uniform(-1, 1);
        y[r] = x.at(r, 0) + x.at(r, 1) > 0 ? 1 : 0;
    }
    TrainConfig cfg;
    cfg.hidden_dim = 16;
    cfg.epochs = 50;
    cfg.batch_size = 16;
    cfg.learning_rate = 0.01;
    const auto result = train_attention(x, y, cfg);
    REQUIRE(result.loss_history.size() == 50);
    CHECK(result.loss_history.back() < 0.2);
    CHECK(result.loss_history.back() < result.loss_history.front());
}

TEST_CASE("plain SGD also descends") {
    const auto [x, y] = fixture::threshold_data(200, 2, 12);
    TrainConfig cfg;
    cfg.hidden_dim = 8;
    cfg.epochs = 30;
    cfg.optimizer = Optimizer::PlainSgd;
    cfg.learning_rate = 0.2;
    const auto result = train_attention(x, y, cfg);
    CHECK(result.loss_history.back() < result.loss_history.front());
}

TEST_CASE("training rejects bad input") {
    FeatureMatrix empty;
    TargetVector none;
    CHECK_THROWS(train_attention(empty, none, TrainConfig{}));
    auto [x, y] = fixture::threshold_data(10, 2, 1);
    y[0] = 2;
    CHECK_THROWS(train_attention(x, y, TrainConfig{}));
    TrainConfig bad;
    bad.prob_clamp = 0.5;
    CHECK_THROWS(bad.validate());
    bad = TrainConfig{};
    bad.learning_rate = 0.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("augment appends k named columns") {
    const auto [x, y] = fixture::threshold_data(5, 19, 1);
    const AttentionParams p = init_params(19, 128, 42);
    for (auto mode : {AttentionOutput::WeightedHidden, AttentionOutput::AttentionVector}) {
        const FeatureMatrix out = augment(p, x, mode);
        CHECK(out.cols == 147);
        CHECK(out.feature_names[19] == "attn_0");
        CHECK(out.feature_names[146] == "attn_127");
        for (std::size_t r = 0; r < x.rows; ++r) {
            for (std::size_t c = 0; c < 19; ++c) {
                CHECK(out.at(r, c) == x.at(r, c));
            }
        }
    }

    const AttentionParams zero(19, 4);
    const FeatureMatrix alpha = augment(zero, x, AttentionOutput::AttentionVector);
    const FeatureMatrix hidden = augment(zero, x, AttentionOutput::WeightedHidden);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 19; c < 23; ++c) {
            CHECK(alpha.at(r, c) == 0.5);
            CHECK(hidden.at(r, c) == 0.0);
        }
    }

    const FeatureMatrix narrow(3, {"a"});
    CHECK_THROWS(augment(zero, narrow, AttentionOutput::WeightedHidden));
}

TEST_CASE("augmented values equal per-row forward traces") {
    const auto [x, y] = fixture::threshold_data(30, 3, 6);
    const AttentionParams p = init_params(3, 5, 1);
    const FeatureMatrix out = augment(p, x, AttentionOutput::WeightedHidden);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const ForwardTrace t = forward(p, x.row(r));
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(out.at(r, 3 + i) == t.h_tilde[i]);
        }
    }
}

TEST_CASE("positive rescaling of the output layer keeps thresholded predictions") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        AttentionParams p = random_params(3, 4, rng);
        const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const bool before = forward(p, x).y_hat >= 0.5;
        const double c = 0.1 + 5.0 * rng.uniform();
        for (double& w : p.w2) w *= c;
        p.b2 *= c;
        CHECK((forward(p, x).y_hat >= 0.5) == before);
    }
}

}
