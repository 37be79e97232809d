#include "attnboost/gbdt.hpp"

#include "attnboost/attention.hpp"
#include "attnboost/metrics.hpp"
#include "attnboost/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace attnboost {

void BoostConfig::validate() const {
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
        throw std::invalid_argument("boost learning rate must lie in (0, 1]");
    }
    if (!(subsample > 0.0 && subsample <= 1.0) || !(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) {
        throw std::invalid_argument("subsample fractions must lie in (0, 1]");
    }
    if (!(gamma >= 0.0) || !(reg_lambda >= 0.0) || !(reg_alpha >= 0.0) || !(min_child_weight >= 0.0)) {
        throw std::invalid_argument("gamma, reg_lambda, reg_alpha and min_child_weight must be >= 0");
    }
    if (max_bins < 2 || max_bins > 65536) {
        throw std::invalid_argument("max_bins must lie in [2, 65536]");
    }
    if (!(base_score > 0.0 && base_score < 1.0)) {
        throw std::invalid_argument("base_score must be a probability in (0, 1)");
    }
}

double BoostConfig::base_raw() const { return std::log(base_score / (1.0 - base_score)); }

BoostConfig desk_scale_boost_config() {
    BoostConfig c;
    c.n_estimators = 200;
    c.max_depth = 6;
    c.min_child_weight = 1.0;
    c.gamma = 0.0;
    return c;
}

GradHess logistic_grad_hess(std::span<const double> raw, std::span<const int> y) {
    if (raw.size() != y.size()) {
        throw std::invalid_argument("logistic_grad_hess: length mismatch");
    }
    GradHess out;
    out.grad.resize(raw.size());
    out.hess.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double p = sigmoid(raw[i]);
        out.grad[i] = p - y[i];
        out.hess[i] = std::max(p * (1.0 - p), kHessianFloor);
    }
    return out;
}

// Binning --------------------------------------------------------------------

namespace {

double cut_between(double lo, double hi) {
    const double mid = lo + (hi - lo) / 2.0;
    return mid > lo ? mid : hi;
}

}  // namespace

std::vector<std::vector<double>> compute_bin_thresholds(const FeatureMatrix& x, std::size_t max_bins) {
    if (max_bins < 2) {
        throw std::invalid_argument("max_bins must be at least 2");
    }
    std::vector<std::vector<double>> thresholds(x.cols);
    std::vector<double> column(x.rows);
    for (std::size_t f = 0; f < x.cols; ++f) {
        for (std::size_t r = 0; r < x.rows; ++r) {
            column[r] = x.at(r, f);
        }
        std::sort(column.begin(), column.end());
        std::vector<double> distinct;
        std::vector<std::size_t> counts;
        for (double v : column) {
            if (distinct.empty() || v != distinct.back()) {
                distinct.push_back(v);
                counts.push_back(0);
            }
            ++counts.back();
        }
        auto& cuts = thresholds[f];
        if (distinct.size() <= max_bins) {
            for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
                cuts.push_back(cut_between(distinct[i], distinct[i + 1]));
            }
            continue;
        }
        const double n = static_cast<double>(x.rows);
        const double per_bin = n / static_cast<double>(max_bins);
        std::size_t target = 1;
        double cumulative = 0.0;
        for (std::size_t i = 0; i + 1 < distinct.size() && cuts.size() + 1 < max_bins; ++i) {
            cumulative += static_cast<double>(counts[i]);
            if (cumulative >= per_bin * static_cast<double>(target)) {
                cuts.push_back(cut_between(distinct[i], distinct[i + 1]));
                while (per_bin * static_cast<double>(target) <= cumulative) {
                    ++target;
                }
            }
        }
    }
    return thresholds;
}

BinnedMatrix bin_with_thresholds(const FeatureMatrix& x, std::vector<std::vector<double>> thresholds) {
    if (thresholds.size() != x.cols) {
        throw std::invalid_argument("threshold table does not match matrix width");
    }
    BinnedMatrix b;
    b.rows = x.rows;
    b.cols = x.cols;
    b.thresholds = std::move(thresholds);
    b.bins.resize(x.rows * x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t f = 0; f < x.cols; ++f) {
            const auto& cuts = b.thresholds[f];
            const auto pos = std::upper_bound(cuts.begin(), cuts.end(), x.at(r, f)) - cuts.begin();
            b.bins[r * x.cols + f] = static_cast<std::uint16_t>(pos);
        }
    }
    return b;
}

BinnedMatrix bin_features(const FeatureMatrix& x, std::size_t max_bins) {
    return bin_with_thresholds(x, compute_bin_thresholds(x, max_bins));
}

// Split search ---------------------------------------------------------------

double soft_threshold(double g, double alpha) {
    if (g > alpha) {
        return g - alpha;
    }
    if (g < -alpha) {
        return g + alpha;
    }
    return 0.0;
}

double leaf_weight(double grad_sum, double hess_sum, double lambda, double alpha) {
    const double denom = hess_sum + lambda;
    if (!(denom > 0.0)) {
        return 0.0;
    }
    return -soft_threshold(grad_sum, alpha) / denom;
}

double split_gain(double grad_left, double hess_left, double grad_right, double hess_right,
                  double lambda) {
    const double g = grad_left + grad_right;
    const double h = hess_left + hess_right;
    return 0.5 * (grad_left * grad_left / (hess_left + lambda) +
                  grad_right * grad_right / (hess_right + lambda) - g * g / (h + lambda));
}

std::optional<SplitDecision> find_best_split(std::span<const std::size_t> rows,
                                             const BinnedMatrix& binned, std::span<const double> grad,
                                             std::span<const double> hess,
                                             std::span<const std::size_t> features,
                                             const SplitParams& params) {
    if (rows.size() < 2 || features.empty()) {
        return std::nullopt;
    }
    std::vector<std::size_t> offset(features.size() + 1, 0);
    for (std::size_t i = 0; i < features.size(); ++i) {
        offset[i + 1] = offset[i] + binned.bin_count(features[i]);
    }
    std::vector<double> hist_g(offset.back(), 0.0);
    std::vector<double> hist_h(offset.back(), 0.0);
    std::vector<std::size_t> hist_n(offset.back(), 0);

    double total_g = 0.0;
    double total_h = 0.0;
    for (std::size_t r : rows) {
        const double g = grad[r];
        const double h = hess[r];
        total_g += g;
        total_h += h;
        const std::uint16_t* row_bins = &binned.bins[r * binned.cols];
        for (std::size_t i = 0; i < features.size(); ++i) {
            const std::size_t slot = offset[i] + row_bins[features[i]];
            hist_g[slot] += g;
            hist_h[slot] += h;
            ++hist_n[slot];
        }
    }

    std::optional<SplitDecision> best;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const std::size_t f = features[i];
        const std::size_t n_bins = binned.bin_count(f);
        double gl = 0.0;
        double hl = 0.0;
        std::size_t nl = 0;
        for (std::size_t s = 0; s + 1 < n_bins; ++s) {
            gl += hist_g[offset[i] + s];
            hl += hist_h[offset[i] + s];
            nl += hist_n[offset[i] + s];
            if (nl == 0 || nl == rows.size()) {
                continue;  // one child would be empty
            }
            const double gr = total_g - gl;
            const double hr = total_h - hl;
            if (hl < params.min_child_weight || hr < params.min_child_weight) {
                continue;
            }
            const double gain = split_gain(gl, hl, gr, hr, params.reg_lambda) - params.gamma;
            if (!(gain > 0.0)) {
                continue;
            }
            const bool better =
                !best || gain > best->gain ||
                (gain == best->gain && (f < best->feature || (f == best->feature && s < best->bin)));
            if (better) {
                best = SplitDecision{f, s, binned.thresholds[f][s], gain, gl, hl, gr, hr};
            }
        }
    }
    return best;
}

// Trees ----------------------------------------------------------------------

double Tree::predict(std::span<const double> x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const TreeNode& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
    }
    return nodes[i].weight;
}

std::size_t Tree::depth() const {
    std::function<std::size_t(std::size_t)> walk = [&](std::size_t i) -> std::size_t {
        const TreeNode& n = nodes[i];
        if (n.is_leaf()) {
            return 0;
        }
        return 1 + std::max(walk(static_cast<std::size_t>(n.left)), walk(static_cast<std::size_t>(n.right)));
    };
    return nodes.empty() ? 0 : walk(0);
}

Tree grow_tree(const BinnedMatrix& binned, std::span<const double> grad, std::span<const double> hess,
               std::span<const std::size_t> rows, std::span<const std::size_t> features,
               const TreeParams& params) {
    Tree tree;
    const SplitParams split_params{params.reg_lambda, params.gamma, params.min_child_weight};

    std::function<int(std::vector<std::size_t>&&, std::size_t)> build =
        [&](std::vector<std::size_t>&& node_rows, std::size_t depth) -> int {
        double g = 0.0;
        double h = 0.0;
        for (std::size_t r : node_rows) {
            g += grad[r];
            h += hess[r];
        }
        const int index = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});
        tree.nodes.back().cover = h;

        std::optional<SplitDecision> split;
        if (depth < params.max_depth && node_rows.size() >= 2) {
            split = find_best_split(node_rows, binned, grad, hess, features, split_params);
        }
        if (!split) {
            tree.nodes[static_cast<std::size_t>(index)].weight =
                leaf_weight(g, h, params.reg_lambda, params.reg_alpha);
            return index;
        }
        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t r : node_rows) {
            (binned.at(r, split->feature) <= split->bin ? left : right).push_back(r);
        }
        node_rows.clear();
        node_rows.shrink_to_fit();
        {
            TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
            node.feature = static_cast<int>(split->feature);
            node.threshold = split->threshold;
            node.gain = split->gain;
        }
        const int l = build(std::move(left), depth + 1);
        const int r = build(std::move(right), depth + 1);
        tree.nodes[static_cast<std::size_t>(index)].left = l;
        tree.nodes[static_cast<std::size_t>(index)].right = r;
        return index;
    };
    build(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
    return tree;
}

// Boosting -------------------------------------------------------------------

namespace {

void check_labels(const FeatureMatrix& x, const TargetVector& y) {
    if (x.rows == 0 || x.cols == 0) {
        throw std::invalid_argument("boosting needs a non-empty feature matrix");
    }
    if (y.size() != x.rows) {
        throw std::invalid_argument("feature matrix and target lengths differ");
    }
    bool seen[2] = {false, false};
    for (int v : y) {
        if (v != 0 && v != 1) {
            throw std::invalid_argument("labels must be 0 or 1");
        }
        seen[v] = true;
    }
    if (!seen[0] || !seen[1]) {
        throw std::invalid_argument("boosting needs both classes in the target");
    }
}

std::size_t sample_count(double fraction, std::size_t n) {
    const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    return std::clamp<std::size_t>(k, 1, n);
}

double mean_bce(std::span<const double> raw, std::span<const int> y) {
    double total = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        total += bce_loss(sigmoid(raw[i]), y[i], 1e-12);
    }
    return total / static_cast<double>(raw.size());
}

}  // namespace

Ensemble train_boosting(const FeatureMatrix& x, const TargetVector& y, const BoostConfig& config,
                        BoostingLog* log, ValidationSet validation) {
    config.validate();
    check_labels(x, y);

    Ensemble model;
    model.base_raw = config.base_raw();
    model.learning_rate = config.learning_rate;
    model.feature_names = x.feature_names;

    const BinnedMatrix binned = bin_features(x, config.max_bins);
    const TreeParams tree_params{config.max_depth, config.reg_lambda, config.reg_alpha, config.gamma,
                                 config.min_child_weight};
    std::vector<double> raw(x.rows, model.base_raw);
    std::vector<double> valid_raw;
    if (validation.x) {
        valid_raw.assign(validation.x->rows, model.base_raw);
    }
    std::vector<std::size_t> all_rows(x.rows);
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
    std::vector<std::size_t> all_features(x.cols);
    std::iota(all_features.begin(), all_features.end(), std::size_t{0});

    for (std::size_t round = 0; round < config.n_estimators; ++round) {
        Rng rng({config.seed, static_cast<std::uint64_t>(round)});
        const auto rows = config.subsample < 1.0
                              ? sample_without_replacement(x.rows, sample_count(config.subsample, x.rows), rng)
                              : all_rows;
        const auto features =
            config.colsample_bytree < 1.0
                ? sample_without_replacement(x.cols, sample_count(config.colsample_bytree, x.cols), rng)
                : all_features;

        const GradHess gh = logistic_grad_hess(raw, y);
        model.trees.push_back(grow_tree(binned, gh.grad, gh.hess, rows, features, tree_params));
        const Tree& tree = model.trees.back();
        for (std::size_t i = 0; i < x.rows; ++i) {
            raw[i] += model.learning_rate * tree.predict(x.row(i));
        }

        if (!log) {
            continue;
        }
        log->train_loss.push_back(mean_bce(raw, y));
        if (validation.x) {
            for (std::size_t i = 0; i < validation.x->rows; ++i) {
                valid_raw[i] += model.learning_rate * tree.predict(validation.x->row(i));
            }
        }
        if (config.eval_every > 0 && (round + 1) % config.eval_every == 0) {
            BoostingLogEntry entry;
            entry.round = round + 1;
            entry.train_auc = auc(raw, y);
            if (validation.x && validation.y) {
                entry.valid_auc = auc(valid_raw, *validation.y);
            }
            log->entries.push_back(entry);
        }
    }
    return model;
}

std::vector<double> predict_raw(const Ensemble& model, const FeatureMatrix& x) {
    if (x.cols != model.feature_names.size()) {
        throw std::invalid_argument("predict: matrix has " + std::to_string(x.cols) +
                                    " columns, model expects " +
                                    std::to_string(model.feature_names.size()));
    }
    std::vector<double> raw(x.rows, model.base_raw);
    parallel_for(x.rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto row = x.row(i);
            for (const Tree& tree : model.trees) {
                raw[i] += model.learning_rate * tree.predict(row);
            }
        }
    });
    return raw;
}

std::vector<double> predict_proba(const Ensemble& model, const FeatureMatrix& x) {
    auto p = predict_raw(model, x);
    for (double& v : p) {
        v = sigmoid(v);
    }
    return p;
}

}  // namespace attnboost
