#include "attnboost/importance.hpp"

#include "attnboost/fusion.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace attnboost;

namespace {

Tree single_split(int feature, double gain) {
    Tree t;
    TreeNode root;
    root.feature = feature;
    root.left = 1;
    root.right = 2;
    root.gain = gain;
    t.nodes = {root, TreeNode{}, TreeNode{}};
    return t;
}

const ImportanceEntry& entry(const ImportanceTable& t, const std::string& name) {
    for (const auto& e : t.entries) {
        if (e.feature == name) return e;
    }
    throw std::runtime_error("no entry " + name);
}

double share_sum(const ImportanceTable& t) {
    double s = 0.0;
    for (const auto& e : t.entries) s += e.share;
    return s;
}

}  // namespace

TEST_SUITE("importance") {

TEST_CASE("single split owns the whole share") {
    Ensemble e;
    e.feature_names = {"a", "b", "c", "d", "e"};
    e.trees.push_back(single_split(3, 0.6667));
    const ImportanceTable t = gain_importance(e);
    REQUIRE(t.entries.size() == 5);
    CHECK(t.entries[0].feature == "d");
    CHECK(t.entries[0].share == 1.0);
    CHECK(t.entries[0].gain == 0.6667);
    CHECK(t.entries[0].splits == 1);
    for (std::size_t i = 1; i < 5; ++i) {
        CHECK(t.entries[i].share == 0.0);
        CHECK(t.entries[i].gain == 0.0);
    }
}

TEST_CASE("empty ensemble has zero shares") {
    Ensemble e;
    e.feature_names = {"a", "attn_0"};
    const ImportanceTable t = gain_importance(e);
    for (const auto& x : t.entries) CHECK(x.share == 0.0);
    CHECK(t.attention_block_share == 0.0);
}

TEST_CASE("attention columns collapse into one block") {
    Ensemble e;
    e.feature_names = {"Discount", "attn_0", "attn_1", "attn_5"};
    e.trees.push_back(single_split(0, 0.7));
    e.trees.push_back(single_split(1, 0.1));
    e.trees.push_back(single_split(3, 0.2));
    const ImportanceTable raw = gain_importance(e);
    CHECK(raw.attention_block_share == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::abs(share_sum(raw) - 1.0) < 1e-9);

    const ImportanceTable c = collapse_attention_block(raw);
    CHECK(c.entries.size() == 2);
    CHECK(entry(c, std::string(kAttentionBlockName)).share == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(entry(c, std::string(kAttentionBlockName)).splits == 2);
    CHECK(std::abs(share_sum(c) - 1.0) < 1e-9);
    CHECK(c.entries[0].feature == "Discount");
}

TEST_CASE("collapse without attention rows is the identity") {
    Ensemble e;
    e.feature_names = {"a", "b"};
    e.trees.push_back(single_split(1, 2.0));
    const ImportanceTable t = gain_importance(e);
    const ImportanceTable c = collapse_attention_block(t);
    REQUIRE(c.entries.size() == t.entries.size());
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        CHECK(c.entries[i].feature == t.entries[i].feature);
        CHECK(c.entries[i].share == t.entries[i].share);
    }
}

TEST_CASE("report ordering, ties and top_n") {
    Ensemble e;
    e.feature_names = {"zeta", "alpha", "mid"};
    e.trees.push_back(single_split(0, 1.0));
    e.trees.push_back(single_split(1, 1.0));
    e.trees.push_back(single_split(2, 0.5));
    const ImportanceTable t = gain_importance(e);
    CHECK(t.entries[0].feature == "alpha");
    CHECK(t.entries[1].feature == "zeta");
    CHECK(t.entries[2].feature == "mid");

    const RankReport one = rank_report(t, 1);
    CHECK(one.csv == "rank,feature,gain,share,splits\n1,alpha,1,0.4,1\n");
    CHECK(one.text.find("alpha") != std::string::npos);
    CHECK(one.text.find("zeta") == std::string::npos);
}

TEST_CASE("gain bookkeeping is conserved on a trained model") {
    const auto [x, y] = fixture::threshold_data(300, 4, 5);
    BoostConfig c = desk_scale_boost_config();
    c.n_estimators = 25;
    const Ensemble e = train_boosting(x, y, c);
    double total = 0.0;
    std::vector<bool> used(x.cols, false);
    for (const auto& tree : e.trees) {
        for (const auto& n : tree.nodes) {
            if (!n.is_leaf()) {
                total += n.gain;
                used[static_cast<std::size_t>(n.feature)] = true;
            }
        }
    }
    const ImportanceTable t = gain_importance(e);
    double sum = 0.0;
    for (const auto& en : t.entries) {
        sum += en.gain;
        const std::size_t col = *x.column_index(en.feature);
        if (!used[col]) CHECK(en.gain == 0.0);
    }
    CHECK(std::abs(sum - total) <= 1e-9 * std::max(1.0, total));
    CHECK(std::abs(share_sum(t) - 1.0) < 1e-9);
    CHECK(t.entries[0].feature == "f0");
}

TEST_CASE("planted dominant feature ranks first in a no-attention model") {
    const PreparedData data = prepare_data(fixture::retail_table(2000), ExperimentConfig{});
    FitOptions options = ExperimentConfig{}.fit_options();
    const AttnBoostModel m = fit_variant(VariantKind::NoAttention, data.split.train_x, data.split.train_y, options);
    const ImportanceTable t = collapse_attention_block(gain_importance(m.ensemble));
    CHECK(t.entries[0].feature == "Discount");
    const RankReport r = rank_report(t, 5);
    CHECK(r.csv.find("1,Discount,") != std::string::npos);
}

}
