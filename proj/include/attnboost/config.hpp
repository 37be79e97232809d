#pragma once

#include "attnboost/experiments.hpp"
#include "attnboost/fusion.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace attnboost {

/// Unknown key or unparseable value; the CLI maps it to a usage error.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything one CLI invocation needs. Boosting defaults are the full reference
/// configuration (3000 rounds, depth 10, ...); desk-scale runs override them.
struct RunConfig {
    std::optional<std::filesystem::path> data;
    std::optional<SyntheticSpec> synth;
    std::optional<std::filesystem::path> test_data;
    ExperimentConfig experiment = reference_experiment_config();
    VariantKind variant = VariantKind::Full;
    std::vector<std::string> remove_features{"Discount", "Sales", "Profit"};
    std::optional<std::filesystem::path> model_path;
    std::optional<std::filesystem::path> out_path;
    std::optional<std::filesystem::path> report_path;
    std::optional<std::filesystem::path> test_out_path;
    std::size_t top_n = 20;
    bool raw_importance = false;

    static ExperimentConfig reference_experiment_config();
    /// Throws ConfigError unless exactly one data source is configured.
    DataSource source() const;
};

/// Every recognized key, in canonical order.
const std::vector<std::string>& config_keys();

void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat `key=value` lines; `#` starts a comment line. Unknown keys are rejected.
void apply_config_text(RunConfig& config, std::string_view text);

void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Canonical text of every setting that influences results.
std::string experiment_config_text(const ExperimentConfig& config);
std::string synthetic_spec_text(const SyntheticSpec& spec);

/// 16 hex digits of FNV-1a over the text.
std::string fingerprint_of(std::string_view text);

}  // namespace attnboost
