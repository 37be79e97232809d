#include "attnboost/fusion.hpp"

#include "attnboost/metrics.hpp"
#include "attnboost/numeric.hpp"

#include <stdexcept>
#include <string>

namespace attnboost {

std::string_view to_string(VariantKind kind) {
    switch (kind) {
        case VariantKind::Full: return "full";
        case VariantKind::NoAttention: return "no_attention";
        case VariantKind::ManualWeights: return "manual_weights";
        case VariantKind::RandomAttention: return "random_attention";
        case VariantKind::FrozenAttention: return "frozen_attention";
        case VariantKind::ShallowAttention: return "shallow_attention";
        case VariantKind::EqualWeight: return "equal_weight";
    }
    return "unknown";
}

VariantKind parse_variant(std::string_view name) {
    for (VariantKind kind : kAllVariants) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

std::string_view to_string(AugmentMode mode) {
    switch (mode) {
        case AugmentMode::None: return "none";
        case AugmentMode::WeightedHidden: return "weighted-hidden";
        case AugmentMode::AttentionVector: return "attention-vector";
        case AugmentMode::RandomUniform: return "random-uniform";
    }
    return "unknown";
}

AugmentMode parse_augment_mode(std::string_view name) {
    for (AugmentMode mode : {AugmentMode::None, AugmentMode::WeightedHidden,
                             AugmentMode::AttentionVector, AugmentMode::RandomUniform}) {
        if (to_string(mode) == name) {
            return mode;
        }
    }
    throw std::invalid_argument("unknown augment mode '" + std::string(name) + "'");
}

ManualWeights default_manual_weights(double factor) {
    return {{"Discount", factor}, {"Sales", factor}, {"Profit", factor},
            {"Ship Mode", factor}, {"Region", factor}};
}

std::size_t AttnBoostModel::input_width() const {
    if (preprocessor) {
        return preprocessor->feature_names.size();
    }
    if (attention) {
        return attention->input_dim;
    }
    return ensemble.feature_names.size() - random_width;
}

FeatureMatrix apply_manual_weights(const FeatureMatrix& x, const ManualWeights& weights) {
    FeatureMatrix out = x;
    for (const auto& [name, factor] : weights) {
        const auto col = x.column_index(name);
        if (!col) {
            throw std::invalid_argument("manual weight for unknown feature '" + name + "'");
        }
        if (!(factor > 0.0)) {
            throw std::invalid_argument("manual weight for '" + name + "' must be positive");
        }
        for (std::size_t r = 0; r < out.rows; ++r) {
            out.at(r, *col) *= factor;
        }
    }
    return out;
}

FeatureMatrix append_random_columns(const FeatureMatrix& x, std::size_t k, std::uint64_t seed) {
    std::vector<std::string> names = x.feature_names;
    for (std::size_t i = 0; i < k; ++i) {
        names.push_back(std::string("attn_") + std::to_string(i));
    }
    FeatureMatrix out(x.rows, std::move(names));
    Rng rng({seed, 0x7a4d0e11ULL});
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto src = x.row(r);
        auto dst = out.row(r);
        std::copy(src.begin(), src.end(), dst.begin());
        for (std::size_t i = 0; i < k; ++i) {
            dst[x.cols + i] = rng.uniform();
        }
    }
    return out;
}

namespace {

AttentionOutput attention_output(AugmentMode mode) {
    switch (mode) {
        case AugmentMode::WeightedHidden: return AttentionOutput::WeightedHidden;
        case AugmentMode::AttentionVector: return AttentionOutput::AttentionVector;
        default: throw std::invalid_argument("augment mode does not use the attention network");
    }
}

AttnBoostModel with_attention(AttentionParams params, const FeatureMatrix& x, const TargetVector& y,
                              const BoostConfig& boost, AugmentMode mode, std::uint64_t attention_seed) {
    AttnBoostModel model;
    model.augment_mode = mode;
    const FeatureMatrix augmented = augment(params, x, attention_output(mode));
    model.attention = std::move(params);
    model.ensemble = train_boosting(augmented, y, boost);
    model.attention_seed = attention_seed;
    model.boost_seed = boost.seed;
    return model;
}

}  // namespace

AttnBoostModel fit_attnboost(const FeatureMatrix& x, const TargetVector& y,
                             const TrainConfig& attention, const BoostConfig& boost,
                             AugmentMode mode) {
    attention_output(mode);  // rejects modes without a network
    auto trained = train_attention(x, y, attention);
    AttnBoostModel model = with_attention(std::move(trained.params), x, y, boost, mode, attention.seed);
    model.variant = VariantKind::Full;
    return model;
}

AttnBoostModel fit_variant(VariantKind kind, const FeatureMatrix& x, const TargetVector& y,
                           const FitOptions& options) {
    AttnBoostModel model;
    switch (kind) {
        case VariantKind::Full:
            model = fit_attnboost(x, y, options.attention, options.boost, options.augment_mode);
            break;
        case VariantKind::ShallowAttention: {
            TrainConfig shallow = options.attention;
            shallow.hidden_dim = options.shallow_k;
            model = fit_attnboost(x, y, shallow, options.boost, options.augment_mode);
            break;
        }
        case VariantKind::FrozenAttention: {
            options.attention.validate();
            attention_output(options.augment_mode);
            AttentionParams params = init_params(x.cols, options.attention.hidden_dim, options.attention.seed);
            model = with_attention(std::move(params), x, y, options.boost, options.augment_mode,
                                   options.attention.seed);
            break;
        }
        case VariantKind::RandomAttention: {
            const std::size_t k = options.attention.hidden_dim;
            model.augment_mode = AugmentMode::RandomUniform;
            model.random_width = k;
            model.ensemble = train_boosting(append_random_columns(x, k, options.attention.seed), y, options.boost);
            break;
        }
        case VariantKind::ManualWeights:
            if (!options.manual_weights) {
                throw std::invalid_argument("manual_weights variant needs a weight map");
            }
            model.manual_weights = *options.manual_weights;
            model.ensemble = train_boosting(apply_manual_weights(x, model.manual_weights), y, options.boost);
            break;
        case VariantKind::NoAttention:
        case VariantKind::EqualWeight:
            model.ensemble = train_boosting(x, y, options.boost);
            break;
    }
    model.variant = kind;
    model.attention_seed = options.attention.seed;
    model.boost_seed = options.boost.seed;
    return model;
}

FeatureMatrix model_inputs(const AttnBoostModel& model, const FeatureMatrix& x) {
    if (x.cols != model.input_width()) {
        throw std::invalid_argument("model expects " + std::to_string(model.input_width()) +
                                    " input features, got " + std::to_string(x.cols));
    }
    const FeatureMatrix weighted =
        model.manual_weights.empty() ? x : apply_manual_weights(x, model.manual_weights);
    switch (model.augment_mode) {
        case AugmentMode::None:
            return weighted;
        case AugmentMode::RandomUniform:
            return append_random_columns(weighted, model.random_width, model.attention_seed);
        case AugmentMode::WeightedHidden:
        case AugmentMode::AttentionVector:
            if (!model.attention) {
                throw std::invalid_argument("model has no attention parameters");
            }
            return augment(*model.attention, weighted, attention_output(model.augment_mode));
    }
    return weighted;
}

std::vector<double> predict_matrix(const AttnBoostModel& model, const FeatureMatrix& x) {
    return predict_proba(model.ensemble, model_inputs(model, x));
}

Prediction predict(const AttnBoostModel& model, const RawTable& rows) {
    if (!model.preprocessor) {
        throw std::invalid_argument("model has no fitted preprocessor");
    }
    Prediction out;
    out.probabilities = predict_matrix(model, transform_features(*model.preprocessor, rows));
    out.labels = threshold_labels(out.probabilities);
    return out;
}

}  // namespace attnboost
