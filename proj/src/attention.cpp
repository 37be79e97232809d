#include "attnboost/attention.hpp"

#include "attnboost/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace attnboost {

std::vector<std::span<double>> AttentionParams::tensors() {
    return {std::span(w1), std::span(b1), std::span(w_attn), std::span(b_attn), std::span(w2),
            std::span(&b2, 1)};
}

std::vector<std::span<const double>> AttentionParams::tensors() const {
    return {std::span(w1), std::span(b1), std::span(w_attn), std::span(b_attn), std::span(w2),
            std::span(&b2, 1)};
}

void TrainConfig::validate() const {
    if (hidden_dim < 1) {
        throw std::invalid_argument("attention hidden width must be at least 1");
    }
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("attention learning rate must be positive");
    }
    if (batch_size < 1) {
        throw std::invalid_argument("attention batch size must be at least 1");
    }
    if (!(prob_clamp > 0.0 && prob_clamp < 0.5)) {
        throw std::invalid_argument("probability clamp must lie in (0, 0.5)");
    }
}

AttentionParams init_params(std::size_t d, std::size_t k, std::uint64_t seed) {
    if (d < 1 || k < 1) {
        throw std::invalid_argument("attention dimensions must be positive");
    }
    AttentionParams p(d, k);
    Rng rng(seed);
    auto fill = [&](std::vector<double>& w, std::size_t fan_in, std::size_t fan_out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (double& v : w) {
            v = rng.uniform(-limit, limit);
        }
    };
    fill(p.w1, d, k);
    fill(p.w_attn, k, k);
    fill(p.w2, k, 1);
    return p;
}

ForwardTrace forward(const AttentionParams& params, std::span<const double> x) {
    const std::size_t d = params.input_dim;
    const std::size_t k = params.hidden_dim;
    if (x.size() != d) {
        throw std::invalid_argument("forward: input has " + std::to_string(x.size()) +
                                    " features, network expects " + std::to_string(d));
    }
    ForwardTrace t;
    t.x.assign(x.begin(), x.end());
    t.h.resize(k);
    t.alpha.resize(k);
    t.h_tilde.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        double z = params.b1[i];
        const double* w = &params.w1[i * d];
        for (std::size_t j = 0; j < d; ++j) {
            z += w[j] * x[j];
        }
        t.h[i] = z > 0.0 ? z : 0.0;
    }
    double out = params.b2;
    for (std::size_t i = 0; i < k; ++i) {
        double z = params.b_attn[i];
        const double* w = &params.w_attn[i * k];
        for (std::size_t j = 0; j < k; ++j) {
            z += w[j] * t.h[j];
        }
        t.alpha[i] = sigmoid(z);
        t.h_tilde[i] = t.alpha[i] * t.h[i];
        out += params.w2[i] * t.h_tilde[i];
    }
    t.y_hat = sigmoid(out);
    return t;
}

double bce_loss(double y_hat, int y, double prob_clamp) {
    const double p = std::clamp(y_hat, prob_clamp, 1.0 - prob_clamp);
    return -(y * std::log(p) + (1 - y) * std::log(1.0 - p));
}

namespace {

/// Adds the per-sample gradient into `g`.
void accumulate_backward(const AttentionParams& params, const ForwardTrace& t, int y,
                         double prob_clamp, AttentionGradients& g, std::vector<double>& dh,
                         std::vector<double>& dz_attn) {
    const std::size_t d = params.input_dim;
    const std::size_t k = params.hidden_dim;
    // Sigmoid output with BCE: dL/dz_out = y_hat - y.
    const double dz_out = std::clamp(t.y_hat, prob_clamp, 1.0 - prob_clamp) - y;
    g.b2 += dz_out;

    dh.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        g.w2[i] += dz_out * t.h_tilde[i];
        const double dh_tilde = dz_out * params.w2[i];
        dh[i] = dh_tilde * t.alpha[i];
        dz_attn[i] = dh_tilde * t.h[i] * t.alpha[i] * (1.0 - t.alpha[i]);
    }
    for (std::size_t i = 0; i < k; ++i) {
        const double dz = dz_attn[i];
        g.b_attn[i] += dz;
        double* gw = &g.w_attn[i * k];
        const double* w = &params.w_attn[i * k];
        for (std::size_t j = 0; j < k; ++j) {
            gw[j] += dz * t.h[j];
            dh[j] += w[j] * dz;
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        // ReLU subgradient is 0 at 0; h > 0 exactly when the pre-activation is.
        if (!(t.h[i] > 0.0)) {
            continue;
        }
        const double dz = dh[i];
        g.b1[i] += dz;
        double* gw = &g.w1[i * d];
        for (std::size_t j = 0; j < d; ++j) {
            gw[j] += dz * t.x[j];
        }
    }
}

void check_binary(const TargetVector& y) {
    for (int v : y) {
        if (v != 0 && v != 1) {
            throw std::invalid_argument("labels must be 0 or 1");
        }
    }
}

}  // namespace

AttentionGradients backward(const AttentionParams& params, const ForwardTrace& trace, int y,
                            double prob_clamp) {
    AttentionGradients g(params.input_dim, params.hidden_dim);
    std::vector<double> dh;
    std::vector<double> dz_attn(params.hidden_dim);
    accumulate_backward(params, trace, y, prob_clamp, g, dh, dz_attn);
    return g;
}

AttentionTrainResult train_attention(const FeatureMatrix& x, const TargetVector& y,
                                     const TrainConfig& config) {
    config.validate();
    if (x.rows == 0 || x.cols == 0) {
        throw std::invalid_argument("attention training needs a non-empty dataset");
    }
    if (y.size() != x.rows) {
        throw std::invalid_argument("feature matrix and target lengths differ");
    }
    check_binary(y);

    AttentionTrainResult result;
    result.params = init_params(x.cols, config.hidden_dim, config.seed);
    AttentionParams& params = result.params;

    std::vector<std::size_t> order(x.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffler({config.seed, 0x5eedf00dULL});

    AttentionGradients grad(params.input_dim, params.hidden_dim);
    AttentionGradients first_moment(params.input_dim, params.hidden_dim);
    AttentionGradients second_moment(params.input_dim, params.hidden_dim);
    std::vector<double> dh;
    std::vector<double> dz_attn(params.hidden_dim);
    std::size_t step = 0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffler.shuffle(std::span(order));
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            for (auto t : grad.tensors()) {
                std::fill(t.begin(), t.end(), 0.0);
            }
            for (std::size_t b = start; b < stop; ++b) {
                const std::size_t row = order[b];
                const ForwardTrace trace = forward(params, x.row(row));
                epoch_loss += bce_loss(trace.y_hat, y[row], config.prob_clamp);
                accumulate_backward(params, trace, y[row], config.prob_clamp, grad, dh, dz_attn);
            }
            const double scale = 1.0 / static_cast<double>(stop - start);
            ++step;
            auto theta = params.tensors();
            auto g = grad.tensors();
            if (config.optimizer == Optimizer::PlainSgd) {
                for (std::size_t t = 0; t < theta.size(); ++t) {
                    for (std::size_t i = 0; i < theta[t].size(); ++i) {
                        theta[t][i] -= config.learning_rate * g[t][i] * scale;
                    }
                }
                continue;
            }
            auto m = first_moment.tensors();
            auto v = second_moment.tensors();
            const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
            for (std::size_t t = 0; t < theta.size(); ++t) {
                for (std::size_t i = 0; i < theta[t].size(); ++i) {
                    const double gi = g[t][i] * scale;
                    m[t][i] = config.beta1 * m[t][i] + (1.0 - config.beta1) * gi;
                    v[t][i] = config.beta2 * v[t][i] + (1.0 - config.beta2) * gi * gi;
                    const double m_hat = m[t][i] / c1;
                    const double v_hat = v[t][i] / c2;
                    theta[t][i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
                }
            }
        }
        result.loss_history.push_back(epoch_loss / static_cast<double>(x.rows));
    }
    return result;
}

FeatureMatrix augment(const AttentionParams& params, const FeatureMatrix& x, AttentionOutput mode) {
    if (x.cols != params.input_dim) {
        throw std::invalid_argument("augment: matrix has " + std::to_string(x.cols) +
                                    " columns, network expects " + std::to_string(params.input_dim));
    }
    std::vector<std::string> names = x.feature_names;
    for (std::size_t i = 0; i < params.hidden_dim; ++i) {
        names.push_back("attn_" + std::to_string(i));
    }
    FeatureMatrix out(x.rows, std::move(names));
    parallel_for(x.rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const auto src = x.row(r);
            auto dst = out.row(r);
            std::copy(src.begin(), src.end(), dst.begin());
            const ForwardTrace t = forward(params, src);
            const auto& block = mode == AttentionOutput::WeightedHidden ? t.h_tilde : t.alpha;
            std::copy(block.begin(), block.end(), dst.begin() + static_cast<std::ptrdiff_t>(x.cols));
        }
    });
    return out;
}

}  // namespace attnboost
