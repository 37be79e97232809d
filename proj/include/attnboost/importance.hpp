#pragma once

#include "attnboost/gbdt.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace attnboost {

inline constexpr std::string_view kAttentionPrefix = "attn_";
inline constexpr std::string_view kAttentionBlockName = "attention_block";

struct ImportanceEntry {
    std::string feature;
    double gain = 0.0;
    std::size_t splits = 0;
    double share = 0.0;
};

struct ImportanceTable {
    std::vector<ImportanceEntry> entries;  // descending gain, ties alphabetical
    double attention_block_share = 0.0;
};

/// Total realized split gain per feature over every tree.
ImportanceTable gain_importance(const Ensemble& model);

/// Merges every attn_* row into one attention_block row.
ImportanceTable collapse_attention_block(const ImportanceTable& table);

struct RankReport {
    std::string text;
    std::string csv;  // rank,feature,gain,share,splits
};

RankReport rank_report(const ImportanceTable& table, std::size_t top_n);

}  // namespace attnboost
