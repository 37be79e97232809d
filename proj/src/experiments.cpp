#include "attnboost/experiments.hpp"

#include "attnboost/config.hpp"
#include "attnboost/importance.hpp"
#include "attnboost/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace attnboost {

// Synthetic data -------------------------------------------------------------

namespace {

struct Place {
    const char* city;
    const char* state;
    std::int64_t postal;
};

constexpr Place kPlaces[] = {
    {"New York City", "New York", 10024}, {"Los Angeles", "California", 90036},
    {"San Francisco", "California", 94122}, {"Seattle", "Washington", 98103},
    {"Philadelphia", "Pennsylvania", 19140}, {"Houston", "Texas", 77095},
    {"Chicago", "Illinois", 60610},         {"Columbus", "Ohio", 43229},
};

constexpr const char* kRegions[] = {"Central", "East", "South", "West",
                                    "North", "Northeast", "Southwest", "Northwest"};
constexpr const char* kShipModes[] = {"First Class", "Same Day", "Second Class", "Standard Class"};
constexpr const char* kSegments[] = {"Consumer", "Corporate", "Home Office"};
constexpr const char* kCategories[] = {"Furniture", "Office Supplies", "Technology"};
const std::vector<std::vector<const char*>> kSubCategories = {
    {"Bookcases", "Chairs", "Furnishings", "Tables"},
    {"Art", "Binders", "Labels", "Paper", "Storage"},
    {"Accessories", "Copiers", "Machines", "Phones"},
};
constexpr const char* kSalesPeople[] = {"Anna Andreadi", "Chuck Magee", "Kelly Williams", "Cassandra Brandow"};

// Generating distributions; the planted rule uses the standardized draw.
constexpr double kDiscountMax = 0.8;
constexpr double kLogSalesMean = 3.5;
constexpr double kLogSalesSd = 1.2;
constexpr double kProfitMean = 20.0;
constexpr double kProfitSd = 50.0;
constexpr int kQuantityMax = 14;

double level_score(std::size_t level, std::size_t levels) {
    if (levels <= 1) {
        return 0.0;
    }
    return 2.0 * static_cast<double>(level) / static_cast<double>(levels - 1) - 1.0;
}

double coef(const SyntheticSpec& spec, const std::string& name) {
    const auto it = spec.coefficients.find(name);
    return it == spec.coefficients.end() ? 0.0 : it->second;
}

}  // namespace

const std::vector<std::string>& synthetic_driver_columns() {
    static const std::vector<std::string> names{"Discount", "Sales",     "Profit",  "Quantity",
                                                "Region",   "Ship Mode", "Segment", "Category"};
    return names;
}

void SyntheticSpec::validate() const {
    if (n_rows < 10) {
        throw std::invalid_argument("synthetic data needs at least 10 rows");
    }
    if (region_levels < 1 || region_levels > std::size(kRegions)) {
        throw std::invalid_argument("region levels must lie in [1, 8]");
    }
    if (!(noise_sd >= 0.0)) {
        throw std::invalid_argument("noise_sd must be non-negative");
    }
    const auto& allowed = synthetic_driver_columns();
    for (const auto& [name, value] : coefficients) {
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
            throw std::invalid_argument("no synthetic driver named '" + name + "'");
        }
        if (!std::isfinite(value)) {
            throw std::invalid_argument("coefficient for '" + name + "' is not finite");
        }
    }
}

SyntheticSpec planted_spec(std::size_t n_rows, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_rows = n_rows;
    spec.seed = seed;
    spec.coefficients = {{"Discount", 6.0}, {"Sales", 1.5}, {"Profit", 1.0}, {"Region", 0.75},
                         {"Quantity", 0.0}};
    return spec;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    SyntheticData data;
    data.table.schema = retail_schema();
    data.table.rows.reserve(spec.n_rows);
    data.logits.reserve(spec.n_rows);

    const std::int64_t first_day = days_from_civil({2014, 1, 1});
    const std::int64_t last_day = days_from_civil({2017, 12, 31});
    const double discount_sd = kDiscountMax / std::sqrt(12.0);
    const double quantity_mean = (1.0 + kQuantityMax) / 2.0;
    const double quantity_sd = std::sqrt((kQuantityMax * kQuantityMax - 1.0) / 12.0);

    const double c_discount = coef(spec, "Discount");
    const double c_sales = coef(spec, "Sales");
    const double c_profit = coef(spec, "Profit");
    const double c_quantity = coef(spec, "Quantity");
    const double c_region = coef(spec, "Region");
    const double c_ship = coef(spec, "Ship Mode");
    const double c_segment = coef(spec, "Segment");
    const double c_category = coef(spec, "Category");

    Rng rng(spec.seed);
    for (std::size_t i = 0; i < spec.n_rows; ++i) {
        const std::int64_t order_day =
            first_day + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(last_day - first_day + 1)));
        const std::int64_t ship_day = order_day + static_cast<std::int64_t>(rng.below(8));
        const std::size_t ship_mode = rng.below(std::size(kShipModes));
        const std::size_t segment = rng.below(std::size(kSegments));
        const Place& place = kPlaces[rng.below(std::size(kPlaces))];
        const std::size_t region = rng.below(spec.region_levels);
        const std::size_t category = rng.below(std::size(kCategories));
        const auto& subs = kSubCategories[category];
        const char* sub_category = subs[rng.below(subs.size())];
        const double sales_z = rng.normal();
        const int quantity = 1 + static_cast<int>(rng.below(kQuantityMax));
        const double discount = rng.uniform(0.0, kDiscountMax);
        const double profit_z = rng.normal();
        const std::uint64_t customer = rng.below(800);
        const std::uint64_t product = rng.below(1500);
        const std::size_t seller = rng.below(std::size(kSalesPeople));
        const double noise = rng.normal();
        const double draw = rng.uniform();

        const double logit =
            spec.intercept + c_discount * (discount - kDiscountMax / 2.0) / discount_sd +
            c_sales * sales_z + c_profit * profit_z +
            c_quantity * (quantity - quantity_mean) / quantity_sd +
            c_region * level_score(region, spec.region_levels) +
            c_ship * level_score(ship_mode, std::size(kShipModes)) +
            c_segment * level_score(segment, std::size(kSegments)) +
            c_category * level_score(category, std::size(kCategories));
        const bool returned = draw < sigmoid(logit + spec.noise_sd * noise);

        const Date order_date = civil_from_days(order_day);
        std::vector<Cell> row;
        row.reserve(data.table.schema.size());
        row.emplace_back(static_cast<std::int64_t>(i + 1));
        row.emplace_back("CA-" + std::to_string(order_date.year) + "-" + std::to_string(100000 + i));
        row.emplace_back(order_date);
        row.emplace_back(civil_from_days(ship_day));
        row.emplace_back(std::string(kShipModes[ship_mode]));
        row.emplace_back("CU-" + std::to_string(10000 + customer));
        row.emplace_back("Customer " + std::to_string(customer));
        row.emplace_back(std::string(kSegments[segment]));
        row.emplace_back(std::string("United States"));
        row.emplace_back(std::string(place.city));
        row.emplace_back(std::string(place.state));
        row.emplace_back(place.postal);
        row.emplace_back(std::string(kRegions[region]));
        row.emplace_back(std::string(kSalesPeople[seller]));
        row.emplace_back("PRD-" + std::to_string(10000000 + product));
        row.emplace_back(std::string(kCategories[category]));
        row.emplace_back(std::string(sub_category));
        row.emplace_back("Product " + std::to_string(product));
        row.emplace_back(std::string(returned ? "Yes" : kNegativeTarget));
        row.emplace_back(std::exp(kLogSalesMean + kLogSalesSd * sales_z));
        row.emplace_back(static_cast<std::int64_t>(quantity));
        row.emplace_back(discount);
        row.emplace_back(kProfitMean + kProfitSd * profit_z);
        data.table.rows.push_back(std::move(row));
        data.logits.push_back(logit);
    }

    std::ostringstream rule;
    rule << "logit = " << spec.intercept;
    for (const auto& [name, value] : spec.coefficients) {
        if (value != 0.0) {
            rule << " + " << value << "*z(" << name << ")";
        }
    }
    rule << " + " << spec.noise_sd << "*N(0,1); Returned ~ Bernoulli(sigmoid(logit))";
    data.rule = rule.str();
    return data;
}

// Configuration --------------------------------------------------------------

FitOptions ExperimentConfig::fit_options() const {
    FitOptions options;
    options.attention = attention;
    options.boost = boost;
    options.augment_mode = augment_mode;
    options.manual_weights = manual_weights;
    options.shallow_k = shallow_k;
    return options;
}

RawTable load_source(const DataSource& source) {
    if (const auto* path = std::get_if<std::filesystem::path>(&source)) {
        return load_csv(*path, retail_schema());
    }
    return generate_synthetic(std::get<SyntheticSpec>(source)).table;
}

PreparedData prepare_data(const RawTable& table, const ExperimentConfig& config) {
    const PreprocessorState full_state = fit_preprocessor(table, config.drop);
    const TargetVector y = encode_target(full_state, table);
    const SplitIndices indices = stratified_split_indices(y, config.train_fraction, config.split_seed);

    PreparedData out;
    out.train_table = select_rows(table, indices.train);
    out.test_table = select_rows(table, indices.test);
    out.state = fit_preprocessor(out.train_table, config.drop);
    std::tie(out.split.train_x, out.split.train_y) = apply_preprocessor(out.state, out.train_table);
    std::tie(out.split.test_x, out.split.test_y) = apply_preprocessor(out.state, out.test_table);
    out.split.indices = indices;
    return out;
}

// Results --------------------------------------------------------------------

namespace {

std::string source_text(const DataSource& source) {
    if (const auto* path = std::get_if<std::filesystem::path>(&source)) {
        return "data=" + path->string() + "\n";
    }
    return synthetic_spec_text(std::get<SyntheticSpec>(source));
}

ExperimentResult new_result(const DataSource& source, const ExperimentConfig& config,
                            const std::string& extra = {}) {
    ExperimentResult result;
    result.config_text = source_text(source) + experiment_config_text(config) + extra;
    result.fingerprint = fingerprint_of(result.config_text);
    result.seeds = {config.split_seed, config.attention.seed, config.boost.seed};
    return result;
}

}  // namespace

void write_experiment_csv(std::ostream& out, const ExperimentResult& result) {
    out << "# fingerprint=" << result.fingerprint << '\n';
    out << "# seeds split=" << result.seeds.split << " attention=" << result.seeds.attention
        << " boost=" << result.seeds.boost << '\n';
    std::istringstream lines(result.config_text);
    std::string line;
    while (std::getline(lines, line)) {
        out << "# config " << line << '\n';
    }
    write_metrics_csv(out, result.rows);
}

ExperimentResult read_experiment_csv(std::istream& in) {
    ExperimentResult result;
    std::stringstream body;
    std::string line;
    bool seeds_seen = false;
    while (std::getline(in, line)) {
        if (line.rfind("# fingerprint=", 0) == 0) {
            result.fingerprint = line.substr(14);
        } else if (line.rfind("# seeds ", 0) == 0) {
            unsigned long long split = 0;
            unsigned long long attention = 0;
            unsigned long long boost = 0;
            if (std::sscanf(line.c_str(), "# seeds split=%llu attention=%llu boost=%llu", &split,
                            &attention, &boost) != 3) {
                throw DataError("malformed seeds line in results file");
            }
            result.seeds = {split, attention, boost};
            seeds_seen = true;
        } else if (line.rfind("# config ", 0) == 0) {
            result.config_text += line.substr(9) + "\n";
        } else if (!line.empty() && line[0] == '#') {
            continue;
        } else {
            body << line << '\n';
        }
    }
    if (result.fingerprint.empty() || !seeds_seen) {
        throw DataError("results file lacks fingerprint or seeds");
    }
    result.rows = read_metrics_csv(body);
    return result;
}

std::string format_experiment_summary(const ExperimentResult& result) {
    std::ostringstream out;
    out << format_metrics_table(result.rows);
    out << "fingerprint " << result.fingerprint << "  seeds split=" << result.seeds.split
        << " attention=" << result.seeds.attention << " boost=" << result.seeds.boost << '\n';
    return out.str();
}

// Protocols ------------------------------------------------------------------

namespace {

double attention_share(const AttnBoostModel& model) {
    return collapse_attention_block(gain_importance(model.ensemble)).attention_block_share;
}

ConditionDiagnostics evaluate_model(const std::string& name, const AttnBoostModel& model,
                                    const PreparedData& data, MetricsReport& report) {
    const auto proba = predict_matrix(model, data.split.test_x);
    report = evaluate_scores(proba, data.split.test_y);
    return {name, attention_share(model), data.split.indices.test};
}

}  // namespace

ExperimentRun run_ablation(const DataSource& source, const ExperimentConfig& config) {
    const PreparedData data = prepare_data(load_source(source), config);
    const FitOptions options = config.fit_options();

    constexpr std::size_t n = std::size(kAllVariants);
    ExperimentRun run;
    run.result = new_result(source, config);
    run.result.rows.resize(n);
    run.diagnostics.resize(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const VariantKind kind = kAllVariants[i];
            const std::string name(to_string(kind));
            const AttnBoostModel model = fit_variant(kind, data.split.train_x, data.split.train_y, options);
            run.result.rows[i].condition = name;
            run.diagnostics[i] = evaluate_model(name, model, data, run.result.rows[i].report);
        }
    });
    return run;
}

ExperimentRun run_feature_removal(std::span<const std::string> features, const DataSource& source,
                                  const ExperimentConfig& config) {
    const RawTable table = load_source(source);
    const std::size_t target = target_column_index(table.schema);
    for (const auto& name : features) {
        const auto idx = table.column_index(name);
        if (!idx) {
            throw std::invalid_argument("cannot remove unknown feature '" + name + "'");
        }
        if (*idx == target) {
            throw std::invalid_argument("cannot remove the target column '" + name + "'");
        }
    }

    std::string removed = "remove=";
    for (std::size_t i = 0; i < features.size(); ++i) {
        removed += (i ? "," : "") + features[i];
    }
    ExperimentRun run;
    run.result = new_result(source, config, removed + "\n");
    const std::size_t n = features.size() + 1;
    run.result.rows.resize(n);
    run.diagnostics.resize(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            ExperimentConfig cfg = config;
            std::string name = "None (Full Model)";
            if (i < features.size()) {
                if (std::find(cfg.drop.begin(), cfg.drop.end(), features[i]) == cfg.drop.end()) {
                    cfg.drop.push_back(features[i]);
                }
                name = features[i] + " Removed";
            }
            const PreparedData data = prepare_data(table, cfg);
            const AttnBoostModel model = fit_attnboost(data.split.train_x, data.split.train_y,
                                                       cfg.attention, cfg.boost, cfg.augment_mode);
            run.result.rows[i].condition = name;
            run.diagnostics[i] = evaluate_model(name, model, data, run.result.rows[i].report);
        }
    });
    return run;
}

ExperimentRun run_comparison(const DataSource& source, const ExperimentConfig& config) {
    const PreparedData data = prepare_data(load_source(source), config);
    ExperimentRun run;
    run.result = new_result(source, config);

    struct Weighting {
        std::string name;
        FeatureMatrix train_x;
        FeatureMatrix test_x;
    };
    const std::vector<Weighting> weightings{
        {"equal_weight", data.split.train_x, data.split.test_x},
        {"manual_weights", apply_manual_weights(data.split.train_x, config.manual_weights),
         apply_manual_weights(data.split.test_x, config.manual_weights)},
    };
    const char* models[] = {"logistic_regression", "decision_tree", "xgboost", "attnboost"};
    const std::size_t n = weightings.size() * std::size(models);
    run.result.rows.resize(n);
    run.diagnostics.resize(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Weighting& w = weightings[i / std::size(models)];
            const std::size_t m = i % std::size(models);
            const auto& ty = data.split.train_y;
            const auto& vy = data.split.test_y;
            MetricsReport report;
            double share = 0.0;
            if (m == 0) {
                report = baseline_logistic(w.train_x, ty, w.test_x, vy, config.logistic);
            } else if (m == 1) {
                report = baseline_stump(w.train_x, ty, w.test_x, vy);
            } else {
                const AttnBoostModel model =
                    m == 2 ? fit_variant(VariantKind::NoAttention, w.train_x, ty, config.fit_options())
                           : fit_attnboost(w.train_x, ty, config.attention, config.boost, config.augment_mode);
                report = evaluate_scores(predict_matrix(model, w.test_x), vy);
                share = attention_share(model);
            }
            const std::string name = w.name + "/" + models[m];
            run.result.rows[i] = {name, report};
            run.diagnostics[i] = {name, share, data.split.indices.test};
        }
    });
    return run;
}

// Baselines ------------------------------------------------------------------

std::vector<double> LogisticModel::predict_proba(const FeatureMatrix& x) const {
    if (x.cols != weights.size()) {
        throw std::invalid_argument("logistic model width mismatch");
    }
    std::vector<double> p(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        double z = bias;
        for (std::size_t c = 0; c < x.cols; ++c) {
            z += weights[c] * (x.at(r, c) - mean[c]) / scale[c];
        }
        p[r] = sigmoid(z);
    }
    return p;
}

LogisticModel fit_logistic(const FeatureMatrix& x, const TargetVector& y, const LogisticConfig& config) {
    if (x.rows == 0 || y.size() != x.rows) {
        throw std::invalid_argument("logistic baseline needs matching non-empty inputs");
    }
    if (is_single_class(y)) {
        throw std::invalid_argument("logistic baseline needs both classes");
    }
    const std::size_t n = x.rows;
    const std::size_t d = x.cols;
    LogisticModel model;
    model.mean.assign(d, 0.0);
    model.scale.assign(d, 1.0);
    model.weights.assign(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            sum += x.at(r, c);
        }
        const double mean = sum / static_cast<double>(n);
        double sq = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            sq += (x.at(r, c) - mean) * (x.at(r, c) - mean);
        }
        const double sd = std::sqrt(sq / static_cast<double>(n));
        model.mean[c] = mean;
        model.scale[c] = sd > kEpsilonStd ? sd : 1.0;
    }
    std::vector<double> z(n * d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            z[r * d + c] = (x.at(r, c) - model.mean[c]) / model.scale[c];
        }
    }
    std::vector<double> grad(d);
    for (std::size_t it = 0; it < config.iterations; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double s = model.bias;
            for (std::size_t c = 0; c < d; ++c) {
                s += model.weights[c] * z[r * d + c];
            }
            const double err = sigmoid(s) - y[r];
            grad_bias += err;
            for (std::size_t c = 0; c < d; ++c) {
                grad[c] += err * z[r * d + c];
            }
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t c = 0; c < d; ++c) {
            model.weights[c] -= config.learning_rate * (grad[c] * inv_n + config.l2 * model.weights[c]);
        }
        model.bias -= config.learning_rate * grad_bias * inv_n;
    }
    return model;
}

MetricsReport baseline_logistic(const FeatureMatrix& train_x, const TargetVector& train_y,
                                const FeatureMatrix& test_x, const TargetVector& test_y,
                                const LogisticConfig& config) {
    const LogisticModel model = fit_logistic(train_x, train_y, config);
    return evaluate_scores(model.predict_proba(test_x), test_y);
}

Tree fit_stump(const FeatureMatrix& x, const TargetVector& y) {
    if (x.rows == 0 || y.size() != x.rows) {
        throw std::invalid_argument("tree baseline needs matching non-empty inputs");
    }
    if (is_single_class(y)) {
        throw std::invalid_argument("tree baseline needs both classes");
    }
    const BinnedMatrix binned = bin_features(x, 256);
    // First boosting round from raw score 0: p = 0.5, g = 0.5 - y, h = 0.25.
    std::vector<double> raw(x.rows, 0.0);
    const GradHess gh = logistic_grad_hess(raw, y);
    std::vector<std::size_t> rows(x.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::vector<std::size_t> features(x.cols);
    std::iota(features.begin(), features.end(), std::size_t{0});
    const TreeParams params{3, 1.0, 0.0, 0.0, 0.0};
    return grow_tree(binned, gh.grad, gh.hess, rows, features, params);
}

std::vector<double> stump_proba(const Tree& tree, const FeatureMatrix& x) {
    std::vector<double> p(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        p[r] = sigmoid(tree.predict(x.row(r)));
    }
    return p;
}

MetricsReport baseline_stump(const FeatureMatrix& train_x, const TargetVector& train_y,
                             const FeatureMatrix& test_x, const TargetVector& test_y) {
    return evaluate_scores(stump_proba(fit_stump(train_x, train_y), test_x), test_y);
}

}  // namespace attnboost
