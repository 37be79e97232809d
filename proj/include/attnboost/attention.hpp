#pragma once

#include "attnboost/tabular.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace attnboost {

/// Trainable tensors of the gated two-layer network.
///
///   h       = ReLU(W1 x + b1)             W1: k x d
///   alpha   = sigmoid(W_attn h + b_attn)  W_attn: k x k
///   h_tilde = alpha (.) h
///   y_hat   = sigmoid(w2 . h_tilde + b2)
///
/// Matrices are row-major.
struct AttentionParams {
    std::size_t input_dim = 0;   // d
    std::size_t hidden_dim = 0;  // k
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w_attn;
    std::vector<double> b_attn;
    std::vector<double> w2;
    double b2 = 0.0;

    AttentionParams() = default;
    AttentionParams(std::size_t d, std::size_t k)
        : input_dim(d), hidden_dim(k), w1(k * d, 0.0), b1(k, 0.0), w_attn(k * k, 0.0),
          b_attn(k, 0.0), w2(k, 0.0) {}

    /// Every tensor as a flat view, in the order w1, b1, w_attn, b_attn, w2, b2.
    std::vector<std::span<double>> tensors();
    std::vector<std::span<const double>> tensors() const;

    bool operator==(const AttentionParams&) const = default;
};

/// Same shapes as AttentionParams; holds dL/dtheta.
struct AttentionGradients : AttentionParams {
    using AttentionParams::AttentionParams;
};

struct ForwardTrace {
    std::vector<double> x;
    std::vector<double> h;
    std::vector<double> alpha;
    std::vector<double> h_tilde;
    double y_hat = 0.5;
};

enum class Optimizer { PlainSgd, AdaptiveMoments };

struct TrainConfig {
    std::size_t hidden_dim = 128;
    std::size_t epochs = 30;
    std::size_t batch_size = 64;
    double learning_rate = 1e-3;
    std::uint64_t seed = 42;
    Optimizer optimizer = Optimizer::AdaptiveMoments;
    double prob_clamp = 1e-12;

    // Adaptive-moments constants.
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;

    void validate() const;
};

/// Uniform fan-based init in [-sqrt(6/(fan_in+fan_out)), +sqrt(...)], biases zero.
AttentionParams init_params(std::size_t d, std::size_t k, std::uint64_t seed);

ForwardTrace forward(const AttentionParams& params, std::span<const double> x);

double bce_loss(double y_hat, int y, double prob_clamp = 1e-12);

AttentionGradients backward(const AttentionParams& params, const ForwardTrace& trace, int y,
                            double prob_clamp = 1e-12);

struct AttentionTrainResult {
    AttentionParams params;
    std::vector<double> loss_history;  // mean per-sample loss of each epoch
};

AttentionTrainResult train_attention(const FeatureMatrix& x, const TargetVector& y,
                                     const TrainConfig& config);

enum class AttentionOutput { WeightedHidden, AttentionVector };

/// Appends h_tilde or alpha for every row; new columns are named attn_0..attn_{k-1}.
FeatureMatrix augment(const AttentionParams& params, const FeatureMatrix& x, AttentionOutput mode);

}  // namespace attnboost
