#pragma once

#include "attnboost/tabular.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace attnboost {

inline constexpr double kHessianFloor = 1e-16;

/// Boosting hyperparameters. Defaults are the reference configuration
/// (3000 rounds of depth-10 histogram trees).
struct BoostConfig {
    std::size_t n_estimators = 3000;
    double learning_rate = 0.1;
    std::size_t max_depth = 10;
    double min_child_weight = 10.0;
    double gamma = 0.8;
    double subsample = 0.8;
    double colsample_bytree = 0.8;
    double reg_alpha = 0.1;
    double reg_lambda = 1.0;
    std::size_t max_bins = 256;
    std::uint64_t seed = 42;
    double base_score = 0.5;
    std::size_t eval_every = 0;  // 0 disables AUC logging

    void validate() const;
    double base_raw() const;
};

/// Desk-scale profile used by experiments and tests.
BoostConfig desk_scale_boost_config();

struct GradHess {
    std::vector<double> grad;
    std::vector<double> hess;
};

GradHess logistic_grad_hess(std::span<const double> raw, std::span<const int> y);

/// Quantized feature matrix. Row r, feature f lands in bin b iff
/// thresholds[f][b-1] <= x < thresholds[f][b].
struct BinnedMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint16_t> bins;  // row-major
    std::vector<std::vector<double>> thresholds;

    std::uint16_t at(std::size_t r, std::size_t f) const { return bins[r * cols + f]; }
    std::size_t bin_count(std::size_t f) const { return thresholds[f].size() + 1; }
};

/// Per-feature ascending cut points: one bin per distinct value when there are at
/// most max_bins of them, otherwise quantile cuts over the sorted values.
std::vector<std::vector<double>> compute_bin_thresholds(const FeatureMatrix& x, std::size_t max_bins);

BinnedMatrix bin_with_thresholds(const FeatureMatrix& x, std::vector<std::vector<double>> thresholds);

BinnedMatrix bin_features(const FeatureMatrix& x, std::size_t max_bins);

double soft_threshold(double g, double alpha);

double leaf_weight(double grad_sum, double hess_sum, double lambda, double alpha);

/// Structure-score improvement of a split before the gamma penalty.
double split_gain(double grad_left, double hess_left, double grad_right, double hess_right,
                  double lambda);

struct SplitDecision {
    std::size_t feature = 0;
    std::size_t bin = 0;  // rows with bin <= this go left
    double threshold = 0.0;
    double gain = 0.0;  // after subtracting gamma
    double grad_left = 0.0;
    double hess_left = 0.0;
    double grad_right = 0.0;
    double hess_right = 0.0;
};

struct SplitParams {
    double reg_lambda = 1.0;
    double gamma = 0.0;
    double min_child_weight = 0.0;
};

/// Best histogram split over `features` for the node holding `rows`, or nullopt when
/// no candidate has positive post-gamma gain with both children meeting
/// min_child_weight. Ties go to the lower feature index, then the lower bin.
std::optional<SplitDecision> find_best_split(std::span<const std::size_t> rows,
                                             const BinnedMatrix& binned, std::span<const double> grad,
                                             std::span<const double> hess,
                                             std::span<const std::size_t> features,
                                             const SplitParams& params);

struct TreeNode {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    bool default_left = true;
    double weight = 0.0;  // leaf contribution before shrinkage
    double gain = 0.0;    // realized split gain (post-gamma)
    double cover = 0.0;   // hessian mass

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

/// Nodes in preorder; node 0 is the root.
struct Tree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> x) const;
    std::size_t depth() const;
    bool operator==(const Tree&) const = default;
};

struct TreeParams {
    std::size_t max_depth = 6;
    double reg_lambda = 1.0;
    double reg_alpha = 0.0;
    double gamma = 0.0;
    double min_child_weight = 0.0;
};

/// Depth-first growth over `rows` (split bins are resolved to raw thresholds).
Tree grow_tree(const BinnedMatrix& binned, std::span<const double> grad, std::span<const double> hess,
               std::span<const std::size_t> rows, std::span<const std::size_t> features,
               const TreeParams& params);

struct Ensemble {
    std::vector<Tree> trees;
    double base_raw = 0.0;
    double learning_rate = 0.1;
    std::vector<std::string> feature_names;

    bool operator==(const Ensemble&) const = default;
};

struct BoostingLogEntry {
    std::size_t round = 0;
    double train_auc = 0.5;
    double valid_auc = 0.5;
};

struct BoostingLog {
    std::vector<BoostingLogEntry> entries;
    std::vector<double> train_loss;  // mean BCE after each round
};

struct ValidationSet {
    const FeatureMatrix* x = nullptr;
    const TargetVector* y = nullptr;
};

Ensemble train_boosting(const FeatureMatrix& x, const TargetVector& y, const BoostConfig& config,
                        BoostingLog* log = nullptr, ValidationSet validation = {});

std::vector<double> predict_raw(const Ensemble& model, const FeatureMatrix& x);
std::vector<double> predict_proba(const Ensemble& model, const FeatureMatrix& x);

}  // namespace attnboost
