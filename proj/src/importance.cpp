#include "attnboost/importance.hpp"

#include "attnboost/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace attnboost {

namespace {

bool is_attention_column(std::string_view name) { return name.starts_with(kAttentionPrefix); }

void sort_entries(std::vector<ImportanceEntry>& entries) {
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.gain != b.gain) {
            return a.gain > b.gain;
        }
        return a.feature < b.feature;
    });
}

void assign_shares(ImportanceTable& table) {
    double total = 0.0;
    for (const auto& e : table.entries) {
        total += e.gain;
    }
    table.attention_block_share = 0.0;
    for (auto& e : table.entries) {
        e.share = total > 0.0 ? e.gain / total : 0.0;
        if (is_attention_column(e.feature) || e.feature == kAttentionBlockName) {
            table.attention_block_share += e.share;
        }
    }
}

}  // namespace

ImportanceTable gain_importance(const Ensemble& model) {
    ImportanceTable table;
    table.entries.resize(model.feature_names.size());
    for (std::size_t f = 0; f < model.feature_names.size(); ++f) {
        table.entries[f].feature = model.feature_names[f];
    }
    for (const Tree& tree : model.trees) {
        for (const TreeNode& node : tree.nodes) {
            if (node.is_leaf()) {
                continue;
            }
            auto& e = table.entries.at(static_cast<std::size_t>(node.feature));
            e.gain += node.gain;
            ++e.splits;
        }
    }
    assign_shares(table);
    sort_entries(table.entries);
    return table;
}

ImportanceTable collapse_attention_block(const ImportanceTable& table) {
    ImportanceTable out;
    ImportanceEntry block{std::string(kAttentionBlockName), 0.0, 0, 0.0};
    bool any = false;
    for (const auto& e : table.entries) {
        if (is_attention_column(e.feature)) {
            block.gain += e.gain;
            block.splits += e.splits;
            block.share += e.share;
            any = true;
        } else {
            out.entries.push_back(e);
        }
    }
    if (!any) {
        return table;
    }
    out.entries.push_back(block);
    sort_entries(out.entries);
    out.attention_block_share = block.share;
    return out;
}

RankReport rank_report(const ImportanceTable& table, std::size_t top_n) {
    std::vector<ImportanceEntry> entries = table.entries;
    sort_entries(entries);
    if (entries.size() > top_n) {
        entries.resize(top_n);
    }
    std::size_t width = std::string("feature").size();
    for (const auto& e : entries) {
        width = std::max(width, e.feature.size());
    }

    RankReport report;
    std::ostringstream text;
    std::ostringstream csv;
    csv << "rank,feature,gain,share,splits\n";
    char buf[512];
    std::snprintf(buf, sizeof buf, "%4s  %-*s  %14s  %8s  %7s\n", "rank", static_cast<int>(width),
                  "feature", "gain", "share", "splits");
    text << buf;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        std::snprintf(buf, sizeof buf, "%4zu  %-*s  %14.4f  %8.4f  %7zu\n", i + 1,
                      static_cast<int>(width), e.feature.c_str(), e.gain, e.share, e.splits);
        text << buf;
        std::string name = e.feature;
        if (name.find_first_of(",\"") != std::string::npos) {
            std::string quoted = "\"";
            for (char c : name) {
                quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
            }
            name = quoted + "\"";
        }
        csv << i + 1 << ',' << name << ',' << format_double(e.gain) << ',' << format_double(e.share)
            << ',' << e.splits << '\n';
    }
    report.text = text.str();
    report.csv = csv.str();
    return report;
}

}  // namespace attnboost
