#pragma once

#include "attnboost/attention.hpp"
#include "attnboost/gbdt.hpp"
#include "attnboost/tabular.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace attnboost {

enum class VariantKind {
    Full,
    NoAttention,
    ManualWeights,
    RandomAttention,
    FrozenAttention,
    ShallowAttention,
    EqualWeight,
};

inline constexpr VariantKind kAllVariants[] = {
    VariantKind::Full,           VariantKind::NoAttention,      VariantKind::ManualWeights,
    VariantKind::RandomAttention, VariantKind::FrozenAttention, VariantKind::ShallowAttention,
    VariantKind::EqualWeight,
};

std::string_view to_string(VariantKind kind);
VariantKind parse_variant(std::string_view name);

/// What gets appended to the original features before boosting.
enum class AugmentMode { None, WeightedHidden, AttentionVector, RandomUniform };

std::string_view to_string(AugmentMode mode);
AugmentMode parse_augment_mode(std::string_view name);

using ManualWeights = std::map<std::string, double>;

/// Factor 2.0 on Discount, Sales, Profit, Ship Mode and Region.
ManualWeights default_manual_weights(double factor = 2.0);

struct AttnBoostModel {
    std::optional<PreprocessorState> preprocessor;
    std::optional<AttentionParams> attention;
    AugmentMode augment_mode = AugmentMode::None;
    std::size_t random_width = 0;  // appended columns for AugmentMode::RandomUniform
    ManualWeights manual_weights;
    Ensemble ensemble;
    VariantKind variant = VariantKind::Full;
    std::uint64_t attention_seed = 42;
    std::uint64_t boost_seed = 42;

    /// Width of the original (pre-augmentation) feature space.
    std::size_t input_width() const;
    bool operator==(const AttnBoostModel&) const = default;
};

struct FitOptions {
    TrainConfig attention;
    BoostConfig boost;
    AugmentMode augment_mode = AugmentMode::WeightedHidden;
    std::optional<ManualWeights> manual_weights;  // required by ManualWeights
    std::size_t shallow_k = 16;
};

/// Scales the listed columns by their factors.
FeatureMatrix apply_manual_weights(const FeatureMatrix& x, const ManualWeights& weights);

/// k seeded uniform[0,1) columns named attn_*, drawn row by row.
FeatureMatrix append_random_columns(const FeatureMatrix& x, std::size_t k, std::uint64_t seed);

/// Trains the attention net on (x, y), freezes it, augments, then boosts.
AttnBoostModel fit_attnboost(const FeatureMatrix& x, const TargetVector& y,
                             const TrainConfig& attention, const BoostConfig& boost,
                             AugmentMode mode);

AttnBoostModel fit_variant(VariantKind kind, const FeatureMatrix& x, const TargetVector& y,
                           const FitOptions& options);

/// The matrix the ensemble sees: manual weights, then the augmentation block.
FeatureMatrix model_inputs(const AttnBoostModel& model, const FeatureMatrix& x);

std::vector<double> predict_matrix(const AttnBoostModel& model, const FeatureMatrix& x);

struct Prediction {
    std::vector<double> probabilities;
    std::vector<int> labels;
};

/// Raw rows through the stored preprocessor and augmentation path.
Prediction predict(const AttnBoostModel& model, const RawTable& rows);

}  // namespace attnboost
