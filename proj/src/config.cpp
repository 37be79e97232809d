#include "attnboost/config.hpp"

#include "attnboost/metrics.hpp"
#include "attnboost/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace attnboost {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                   : comma - start));
        if (!piece.empty()) {
            out.push_back(piece);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? "," : "") + items[i];
    }
    return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    const std::string v = trim(value);
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value) { return parse_number<double>(key, value); }
std::size_t parse_count(std::string_view key, std::string_view value) {
    return parse_number<std::size_t>(key, value);
}
std::uint64_t parse_seed(std::string_view key, std::string_view value) {
    return parse_number<std::uint64_t>(key, value);
}

bool parse_bool(std::string_view key, std::string_view value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw ConfigError("invalid boolean '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

ManualWeights parse_weights(std::string_view key, std::string_view value) {
    ManualWeights weights;
    for (const auto& item : split_list(value)) {
        const auto colon = item.rfind(':');
        if (colon == std::string::npos) {
            throw ConfigError("manual weight '" + item + "' is not name:factor (key '" + std::string(key) + "')");
        }
        weights[trim(item.substr(0, colon))] = parse_real(key, item.substr(colon + 1));
    }
    return weights;
}

std::string format_weights(const ManualWeights& weights) {
    std::string out;
    for (const auto& [name, factor] : weights) {
        out += (out.empty() ? "" : ",") + name + ":" + format_double(factor);
    }
    return out;
}

std::string_view optimizer_name(Optimizer o) {
    return o == Optimizer::PlainSgd ? "sgd" : "adam";
}

Optimizer parse_optimizer(std::string_view key, std::string_view value) {
    const std::string v = trim(value);
    if (v == "adam" || v == "adaptive-moments") {
        return Optimizer::AdaptiveMoments;
    }
    if (v == "sgd" || v == "plain-sgd") {
        return Optimizer::PlainSgd;
    }
    throw ConfigError("invalid optimizer '" + v + "' for key '" + std::string(key) + "'");
}

/// Synthetic coefficient keys use snake_case column names.
const std::vector<std::pair<std::string, std::string>>& coefficient_keys() {
    static const std::vector<std::pair<std::string, std::string>> keys = [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& column : synthetic_driver_columns()) {
            std::string snake;
            for (char c : column) {
                snake += c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            }
            out.emplace_back("synth.coef." + snake, column);
        }
        return out;
    }();
    return keys;
}

SyntheticSpec& synth(RunConfig& c) {
    if (!c.synth) {
        c.synth = planted_spec();
    }
    return *c.synth;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::vector<std::pair<std::string, Setter>>& registry() {
    static const std::vector<std::pair<std::string, Setter>> table = [] {
        std::vector<std::pair<std::string, Setter>> t;
        auto add = [&](std::string key, Setter setter) { t.emplace_back(std::move(key), std::move(setter)); };
        using SV = std::string_view;
        // run
        add("data", [](RunConfig& c, SV, SV v) { c.data = trim(v); });
        add("test", [](RunConfig& c, SV, SV v) { c.test_data = trim(v); });
        add("variant", [](RunConfig& c, SV k, SV v) {
            try {
                c.variant = parse_variant(trim(v));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string(e.what()) + " (key '" + std::string(k) + "')");
            }
        });
        add("remove", [](RunConfig& c, SV, SV v) { c.remove_features = split_list(v); });
        add("model", [](RunConfig& c, SV, SV v) { c.model_path = trim(v); });
        add("out", [](RunConfig& c, SV, SV v) { c.out_path = trim(v); });
        add("report", [](RunConfig& c, SV, SV v) { c.report_path = trim(v); });
        add("test_out", [](RunConfig& c, SV, SV v) { c.test_out_path = trim(v); });
        add("top_n", [](RunConfig& c, SV k, SV v) { c.top_n = parse_count(k, v); });
        add("raw", [](RunConfig& c, SV k, SV v) { c.raw_importance = parse_bool(k, v); });
        add("seed", [](RunConfig& c, SV k, SV v) {
            const auto s = parse_seed(k, v);
            c.experiment.split_seed = s;
            c.experiment.attention.seed = s;
            c.experiment.boost.seed = s;
            if (c.synth) {
                c.synth->seed = s;
            }
        });
        // experiment
        add("drop", [](RunConfig& c, SV, SV v) { c.experiment.drop = split_list(v); });
        add("split.train_fraction", [](RunConfig& c, SV k, SV v) { c.experiment.train_fraction = parse_real(k, v); });
        add("split.seed", [](RunConfig& c, SV k, SV v) { c.experiment.split_seed = parse_seed(k, v); });
        add("attention.k", [](RunConfig& c, SV k, SV v) { c.experiment.attention.hidden_dim = parse_count(k, v); });
        add("attention.epochs", [](RunConfig& c, SV k, SV v) { c.experiment.attention.epochs = parse_count(k, v); });
        add("attention.batch_size", [](RunConfig& c, SV k, SV v) { c.experiment.attention.batch_size = parse_count(k, v); });
        add("attention.learning_rate", [](RunConfig& c, SV k, SV v) { c.experiment.attention.learning_rate = parse_real(k, v); });
        add("attention.seed", [](RunConfig& c, SV k, SV v) { c.experiment.attention.seed = parse_seed(k, v); });
        add("attention.optimizer", [](RunConfig& c, SV k, SV v) { c.experiment.attention.optimizer = parse_optimizer(k, v); });
        add("attention.prob_clamp", [](RunConfig& c, SV k, SV v) { c.experiment.attention.prob_clamp = parse_real(k, v); });
        add("boost.n_estimators", [](RunConfig& c, SV k, SV v) { c.experiment.boost.n_estimators = parse_count(k, v); });
        add("boost.learning_rate", [](RunConfig& c, SV k, SV v) { c.experiment.boost.learning_rate = parse_real(k, v); });
        add("boost.max_depth", [](RunConfig& c, SV k, SV v) { c.experiment.boost.max_depth = parse_count(k, v); });
        add("boost.min_child_weight", [](RunConfig& c, SV k, SV v) { c.experiment.boost.min_child_weight = parse_real(k, v); });
        add("boost.gamma", [](RunConfig& c, SV k, SV v) { c.experiment.boost.gamma = parse_real(k, v); });
        add("boost.subsample", [](RunConfig& c, SV k, SV v) { c.experiment.boost.subsample = parse_real(k, v); });
        add("boost.colsample_bytree", [](RunConfig& c, SV k, SV v) { c.experiment.boost.colsample_bytree = parse_real(k, v); });
        add("boost.reg_alpha", [](RunConfig& c, SV k, SV v) { c.experiment.boost.reg_alpha = parse_real(k, v); });
        add("boost.reg_lambda", [](RunConfig& c, SV k, SV v) { c.experiment.boost.reg_lambda = parse_real(k, v); });
        add("boost.max_bins", [](RunConfig& c, SV k, SV v) { c.experiment.boost.max_bins = parse_count(k, v); });
        add("boost.seed", [](RunConfig& c, SV k, SV v) { c.experiment.boost.seed = parse_seed(k, v); });
        add("boost.base_score", [](RunConfig& c, SV k, SV v) { c.experiment.boost.base_score = parse_real(k, v); });
        add("boost.eval_every", [](RunConfig& c, SV k, SV v) { c.experiment.boost.eval_every = parse_count(k, v); });
        add("augment", [](RunConfig& c, SV k, SV v) {
            try {
                c.experiment.augment_mode = parse_augment_mode(trim(v));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string(e.what()) + " (key '" + std::string(k) + "')");
            }
        });
        add("manual.weights", [](RunConfig& c, SV k, SV v) { c.experiment.manual_weights = parse_weights(k, v); });
        add("shallow_k", [](RunConfig& c, SV k, SV v) { c.experiment.shallow_k = parse_count(k, v); });
        add("logistic.iterations", [](RunConfig& c, SV k, SV v) { c.experiment.logistic.iterations = parse_count(k, v); });
        add("logistic.learning_rate", [](RunConfig& c, SV k, SV v) { c.experiment.logistic.learning_rate = parse_real(k, v); });
        add("logistic.l2", [](RunConfig& c, SV k, SV v) { c.experiment.logistic.l2 = parse_real(k, v); });
        // synthetic source
        add("synth.rows", [](RunConfig& c, SV k, SV v) { synth(c).n_rows = parse_count(k, v); });
        add("synth.seed", [](RunConfig& c, SV k, SV v) { synth(c).seed = parse_seed(k, v); });
        add("synth.noise_sd", [](RunConfig& c, SV k, SV v) { synth(c).noise_sd = parse_real(k, v); });
        add("synth.intercept", [](RunConfig& c, SV k, SV v) { synth(c).intercept = parse_real(k, v); });
        add("synth.region_levels", [](RunConfig& c, SV k, SV v) { synth(c).region_levels = parse_count(k, v); });
        for (const auto& [key, column] : coefficient_keys()) {
            add(key, [column = column](RunConfig& c, SV k, SV v) { synth(c).coefficients[column] = parse_real(k, v); });
        }
        return t;
    }();
    return table;
}

}  // namespace

ExperimentConfig RunConfig::reference_experiment_config() {
    ExperimentConfig c;
    c.boost = BoostConfig{};
    return c;
}

DataSource RunConfig::source() const {
    if (data && synth) {
        throw ConfigError("configure either a data file or a synthetic source, not both");
    }
    if (data) {
        return *data;
    }
    if (synth) {
        return *synth;
    }
    throw ConfigError("no data source: set data=<csv> or synth.rows=<n>");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [key, setter] : registry()) {
            out.push_back(key);
        }
        return out;
    }();
    return keys;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    for (const auto& [name, setter] : registry()) {
        if (name == key) {
            setter(config, key, value);
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void apply_config_text(RunConfig& config, std::string_view text) {
    std::vector<std::pair<std::string, std::string>> settings;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + " is not key=value");
        }
        settings.emplace_back(trim(t.substr(0, eq)), t.substr(eq + 1));
    }
    // `seed` fans out to every seed, so it lands after the specific keys.
    std::stable_partition(settings.begin(), settings.end(), [](const auto& kv) { return kv.first != "seed"; });
    for (const auto& [key, value] : settings) {
        apply_setting(config, key, value);
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    apply_config_text(config, text.str());
}

std::string experiment_config_text(const ExperimentConfig& c) {
    std::ostringstream out;
    const auto& a = c.attention;
    const auto& b = c.boost;
    out << "drop=" << join_list(c.drop) << '\n'
        << "split.train_fraction=" << format_double(c.train_fraction) << '\n'
        << "split.seed=" << c.split_seed << '\n'
        << "attention.k=" << a.hidden_dim << '\n'
        << "attention.epochs=" << a.epochs << '\n'
        << "attention.batch_size=" << a.batch_size << '\n'
        << "attention.learning_rate=" << format_double(a.learning_rate) << '\n'
        << "attention.seed=" << a.seed << '\n'
        << "attention.optimizer=" << optimizer_name(a.optimizer) << '\n'
        << "attention.prob_clamp=" << format_double(a.prob_clamp) << '\n'
        << "boost.n_estimators=" << b.n_estimators << '\n'
        << "boost.learning_rate=" << format_double(b.learning_rate) << '\n'
        << "boost.max_depth=" << b.max_depth << '\n'
        << "boost.min_child_weight=" << format_double(b.min_child_weight) << '\n'
        << "boost.gamma=" << format_double(b.gamma) << '\n'
        << "boost.subsample=" << format_double(b.subsample) << '\n'
        << "boost.colsample_bytree=" << format_double(b.colsample_bytree) << '\n'
        << "boost.reg_alpha=" << format_double(b.reg_alpha) << '\n'
        << "boost.reg_lambda=" << format_double(b.reg_lambda) << '\n'
        << "boost.max_bins=" << b.max_bins << '\n'
        << "boost.seed=" << b.seed << '\n'
        << "boost.base_score=" << format_double(b.base_score) << '\n'
        << "boost.eval_every=" << b.eval_every << '\n'
        << "augment=" << to_string(c.augment_mode) << '\n'
        << "manual.weights=" << format_weights(c.manual_weights) << '\n'
        << "shallow_k=" << c.shallow_k << '\n'
        << "logistic.iterations=" << c.logistic.iterations << '\n'
        << "logistic.learning_rate=" << format_double(c.logistic.learning_rate) << '\n'
        << "logistic.l2=" << format_double(c.logistic.l2) << '\n';
    return out.str();
}

std::string synthetic_spec_text(const SyntheticSpec& spec) {
    std::ostringstream out;
    out << "synth.rows=" << spec.n_rows << '\n'
        << "synth.seed=" << spec.seed << '\n'
        << "synth.noise_sd=" << format_double(spec.noise_sd) << '\n'
        << "synth.intercept=" << format_double(spec.intercept) << '\n'
        << "synth.region_levels=" << spec.region_levels << '\n';
    for (const auto& [key, column] : coefficient_keys()) {
        const auto it = spec.coefficients.find(column);
        out << key << '=' << format_double(it == spec.coefficients.end() ? 0.0 : it->second) << '\n';
    }
    return out.str();
}

std::string fingerprint_of(std::string_view text) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
    return buf;
}

}  // namespace attnboost
