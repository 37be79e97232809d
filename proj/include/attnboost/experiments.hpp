#pragma once

#include "attnboost/fusion.hpp"
#include "attnboost/gbdt.hpp"
#include "attnboost/metrics.hpp"
#include "attnboost/tabular.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace attnboost {

// Synthetic data -------------------------------------------------------------

/// Retail-shaped data whose label follows a known logistic rule.
///
/// Continuous drivers (Discount, Sales, Profit, Quantity) enter the logit through
/// their standardized value; categorical drivers (Region, Ship Mode, Segment,
/// Category) through a level score spread evenly over [-1, 1].
struct SyntheticSpec {
    std::size_t n_rows = 2000;
    std::uint64_t seed = 42;
    double noise_sd = 0.0;
    double intercept = 0.0;
    std::size_t region_levels = 4;
    std::map<std::string, double> coefficients;  // keyed by column name

    void validate() const;
    bool operator==(const SyntheticSpec&) const = default;
};

/// Column names that may carry a coefficient.
const std::vector<std::string>& synthetic_driver_columns();

/// Discount dominates, Sales/Profit/Region contribute, Quantity is irrelevant.
SyntheticSpec planted_spec(std::size_t n_rows = 2000, std::uint64_t seed = 42);

struct SyntheticData {
    RawTable table;
    std::vector<double> logits;  // ground-truth logit per row (before noise)
    std::string rule;            // human-readable form of the planted rule
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

// Configuration --------------------------------------------------------------

struct LogisticConfig {
    std::size_t iterations = 500;
    double learning_rate = 0.1;
    double l2 = 1e-3;

    bool operator==(const LogisticConfig&) const = default;
};

struct ExperimentConfig {
    std::vector<std::string> drop = default_identifier_columns();
    double train_fraction = 0.8;
    std::uint64_t split_seed = 42;
    TrainConfig attention;
    BoostConfig boost = desk_scale_boost_config();
    AugmentMode augment_mode = AugmentMode::WeightedHidden;
    ManualWeights manual_weights = default_manual_weights();
    std::size_t shallow_k = 16;
    LogisticConfig logistic;

    FitOptions fit_options() const;
};

using DataSource = std::variant<std::filesystem::path, SyntheticSpec>;

RawTable load_source(const DataSource& source);

/// Split computed on the full table's labels; the preprocessor is fit on the
/// training rows only.
struct PreparedData {
    RawTable train_table;
    RawTable test_table;
    PreprocessorState state;
    TrainTestSplit split;
};

PreparedData prepare_data(const RawTable& table, const ExperimentConfig& config);

// Results --------------------------------------------------------------------

struct ExperimentSeeds {
    std::uint64_t split = 42;
    std::uint64_t attention = 42;
    std::uint64_t boost = 42;

    bool operator==(const ExperimentSeeds&) const = default;
};

struct ExperimentResult {
    std::vector<NamedReport> rows;
    std::string fingerprint;
    std::string config_text;  // canonical key=value lines that reproduce the run
    ExperimentSeeds seeds;
};

/// Per-condition diagnostics that are not part of the results table.
struct ConditionDiagnostics {
    std::string condition;
    double attention_block_share = 0.0;
    std::vector<std::size_t> test_rows;
};

struct ExperimentRun {
    ExperimentResult result;
    std::vector<ConditionDiagnostics> diagnostics;
};

void write_experiment_csv(std::ostream& out, const ExperimentResult& result);
ExperimentResult read_experiment_csv(std::istream& in);

/// Aligned metrics table followed by fingerprint and seeds.
std::string format_experiment_summary(const ExperimentResult& result);

// Protocols ------------------------------------------------------------------

/// All seven variants on one shared stratified split.
ExperimentRun run_ablation(const DataSource& source, const ExperimentConfig& config);

/// Retrains the full pipeline once per removed column, plus the unmodified model.
ExperimentRun run_feature_removal(std::span<const std::string> features, const DataSource& source,
                                  const ExperimentConfig& config);

/// Baselines and boosted models under equal and manual feature weighting.
ExperimentRun run_comparison(const DataSource& source, const ExperimentConfig& config);

// Baselines ------------------------------------------------------------------

struct LogisticModel {
    std::vector<double> mean;
    std::vector<double> scale;
    std::vector<double> weights;
    double bias = 0.0;

    std::vector<double> predict_proba(const FeatureMatrix& x) const;
    bool operator==(const LogisticModel&) const = default;
};

/// L2-regularized logistic regression by full-batch gradient descent from zero
/// weights on internally standardized features.
LogisticModel fit_logistic(const FeatureMatrix& x, const TargetVector& y, const LogisticConfig& config);

MetricsReport baseline_logistic(const FeatureMatrix& train_x, const TargetVector& train_y,
                                const FeatureMatrix& test_x, const TargetVector& test_y,
                                const LogisticConfig& config);

/// Depth-3 tree from the first-round logistic gradients, no shrinkage.
Tree fit_stump(const FeatureMatrix& x, const TargetVector& y);

std::vector<double> stump_proba(const Tree& tree, const FeatureMatrix& x);

MetricsReport baseline_stump(const FeatureMatrix& train_x, const TargetVector& train_y,
                             const FeatureMatrix& test_x, const TargetVector& test_y);

}  // namespace attnboost
