#include "attnboost/cli.hpp"

#include "attnboost/config.hpp"
#include "attnboost/experiments.hpp"
#include "attnboost/importance.hpp"
#include "attnboost/metrics.hpp"
#include "attnboost/model_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace attnboost {

namespace {

struct Invocation {
    std::optional<std::string> config_file;
    std::vector<std::pair<std::string, std::string>> settings;
};

const std::map<std::string, std::string>& key_help() {
    static const std::map<std::string, std::string> help{
        {"data", "input CSV in the retail layout"},
        {"test", "separate labeled test CSV (skips the internal split)"},
        {"variant", "full|no_attention|manual_weights|random_attention|frozen_attention|shallow_attention|equal_weight"},
        {"remove", "comma-separated columns for remove-features"},
        {"model", "model file path"},
        {"out", "output file"},
        {"report", "metrics CSV path"},
        {"test_out", "write the held-out raw rows to this CSV"},
        {"top_n", "rows in the importance report"},
        {"seed", "sets every seed (split, attention, boosting, synthetic)"},
        {"augment", "weighted-hidden|attention-vector"},
        {"manual.weights", "Name:factor,... for the manual_weights variant"},
    };
    return help;
}

void add_config_options(CLI::App& sub, Invocation& inv) {
    sub.add_option("--config", inv.config_file, "key=value config file; flags override it");
    for (const auto& key : config_keys()) {
        if (key == "raw") {
            sub.add_flag_callback("--raw", [&inv] { inv.settings.emplace_back("raw", "true"); },
                                  "report attention columns individually");
            continue;
        }
        const auto help = key_help().find(key);
        sub.add_option_function<std::string>(
            "--" + key, [&inv, key](const std::string& v) { inv.settings.emplace_back(key, v); },
            help == key_help().end() ? std::string{} : help->second);
    }
    sub.add_option_function<std::string>(
        "--rows", [&inv](const std::string& v) { inv.settings.emplace_back("synth.rows", v); },
        "synthetic row count (alias of --synth.rows)");
}

RunConfig build_config(const Invocation& inv) {
    RunConfig config;
    if (inv.config_file) {
        apply_config_file(config, *inv.config_file);
    }
    auto settings = inv.settings;
    std::stable_partition(settings.begin(), settings.end(), [](const auto& kv) { return kv.first != "seed"; });
    for (const auto& [key, value] : settings) {
        apply_setting(config, key, value);
    }
    try {
        config.experiment.attention.validate();
        config.experiment.boost.validate();
        if (config.synth) {
            config.synth->validate();
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(config.experiment.train_fraction > 0.0 && config.experiment.train_fraction < 1.0)) {
        throw ConfigError("split.train_fraction must lie in (0, 1)");
    }
    return config;
}

std::string source_text(const DataSource& source) {
    if (const auto* path = std::get_if<std::filesystem::path>(&source)) {
        return "data=" + path->string() + "\n";
    }
    return synthetic_spec_text(std::get<SyntheticSpec>(source));
}

const std::filesystem::path& require_path(const std::optional<std::filesystem::path>& path, const char* flag) {
    if (!path) {
        throw ConfigError(std::string("missing required --") + flag);
    }
    return *path;
}

std::string metrics_csv(std::span<const NamedReport> rows) {
    std::ostringstream csv;
    write_metrics_csv(csv, rows);
    return csv.str();
}

/// Prediction input may omit the target column.
RawTable load_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::string header;
    std::getline(in, header);
    std::istringstream header_stream(header);
    const auto records = read_csv_records(header_stream);
    const Schema schema = retail_schema();
    const std::string& target = schema[target_column_index(schema)].name;
    const bool labeled = !records.empty() && std::find(records[0].begin(), records[0].end(), target) != records[0].end();
    return load_csv(path, labeled ? schema : without_target(schema));
}

// Subcommands ----------------------------------------------------------------

int cmd_train(const RunConfig& c, std::ostream& out) {
    const DataSource source = c.source();
    const ExperimentConfig& cfg = c.experiment;
    const RawTable table = load_source(source);

    PreparedData data;
    if (c.test_data) {
        data.train_table = table;
        data.test_table = load_csv(*c.test_data, retail_schema());
        data.state = fit_preprocessor(data.train_table, cfg.drop);
        std::tie(data.split.train_x, data.split.train_y) = apply_preprocessor(data.state, data.train_table);
        data.split.test_y = encode_target(data.state, data.test_table);
    } else {
        data = prepare_data(table, cfg);
    }

    AttnBoostModel model = fit_variant(c.variant, data.split.train_x, data.split.train_y, cfg.fit_options());
    model.preprocessor = data.state;

    const Prediction pred = predict(model, data.test_table);
    const std::vector<NamedReport> rows{{std::string(to_string(c.variant)), evaluate_scores(pred.probabilities, data.split.test_y)}};

    std::string text = source_text(source) + experiment_config_text(cfg) + "variant=" + std::string(to_string(c.variant)) + "\n";
    if (c.test_data) {
        text += "test=" + c.test_data->string() + "\n";
    }
    const std::string fingerprint = fingerprint_of(text);
    const std::filesystem::path model_path = c.model_path.value_or("model.atnb");
    save_model(model, model_path, fingerprint);
    if (c.report_path) {
        write_file_atomically(*c.report_path, metrics_csv(rows));
    }
    if (c.test_out_path) {
        std::ostringstream csv;
        write_csv(csv, data.test_table);
        write_file_atomically(*c.test_out_path, csv.str());
    }

    out << format_metrics_table(rows);
    out << "train rows " << data.split.train_y.size() << ", test rows " << data.split.test_y.size() << '\n';
    out << "model " << model_path.string() << " fingerprint " << fingerprint << '\n';
    return 0;
}

int cmd_predict(const RunConfig& c, std::ostream& out) {
    const LoadedModel loaded = load_model(require_path(c.model_path, "model"));
    const RawTable rows = load_rows(require_path(c.data, "data"));
    const Prediction pred = predict(loaded.model, rows);

    std::ostringstream csv;
    csv << "row_index,probability,label\n";
    for (std::size_t i = 0; i < pred.probabilities.size(); ++i) {
        csv << i << ',' << format_double(pred.probabilities[i]) << ',' << pred.labels[i] << '\n';
    }
    if (c.out_path) {
        write_file_atomically(*c.out_path, csv.str());
        out << "wrote " << pred.probabilities.size() << " predictions to " << c.out_path->string() << '\n';
    } else {
        out << csv.str();
    }
    return 0;
}

int cmd_evaluate(const RunConfig& c, std::ostream& out) {
    const LoadedModel loaded = load_model(require_path(c.model_path, "model"));
    const RawTable table = load_csv(require_path(c.data, "data"), retail_schema());
    const Prediction pred = predict(loaded.model, table);
    const TargetVector y = encode_target(*loaded.model.preprocessor, table);
    const std::vector<NamedReport> rows{{std::string(to_string(loaded.model.variant)), evaluate_scores(pred.probabilities, y)}};
    if (c.report_path) {
        write_file_atomically(*c.report_path, metrics_csv(rows));
    }
    out << format_metrics_table(rows);
    return 0;
}

int cmd_importance(const RunConfig& c, std::ostream& out) {
    const LoadedModel loaded = load_model(require_path(c.model_path, "model"));
    ImportanceTable table = gain_importance(loaded.model.ensemble);
    if (!c.raw_importance) {
        table = collapse_attention_block(table);
    }
    const RankReport report = rank_report(table, c.top_n);
    if (c.out_path) {
        write_file_atomically(*c.out_path, report.csv);
    }
    out << report.text;
    return 0;
}

int write_run(const RunConfig& c, const ExperimentRun& run, std::ostream& out) {
    std::ostringstream csv;
    write_experiment_csv(csv, run.result);
    const std::filesystem::path path = c.out_path.value_or("results.csv");
    write_file_atomically(path, csv.str());
    out << format_experiment_summary(run.result);
    out << "results " << path.string() << '\n';
    return 0;
}

int cmd_ablate(const RunConfig& c, std::ostream& out) {
    return write_run(c, run_ablation(c.source(), c.experiment), out);
}

int cmd_remove(const RunConfig& c, std::ostream& out) {
    return write_run(c, run_feature_removal(c.remove_features, c.source(), c.experiment), out);
}

int cmd_compare(const RunConfig& c, std::ostream& out) {
    return write_run(c, run_comparison(c.source(), c.experiment), out);
}

int cmd_synth(const RunConfig& c, std::ostream& out) {
    if (c.data) {
        throw ConfigError("synth does not read a data file");
    }
    const SyntheticSpec spec = c.synth.value_or(planted_spec());
    const SyntheticData synth = generate_synthetic(spec);
    std::ostringstream csv;
    write_csv(csv, synth.table);
    if (c.out_path) {
        write_file_atomically(*c.out_path, csv.str());
        out << "wrote " << synth.table.row_count() << " rows to " << c.out_path->string() << '\n'
            << "rule: " << synth.rule << '\n';
    } else {
        out << csv.str();
    }
    return 0;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Attention-augmented gradient boosting for return prediction", "attnboost"};
    app.require_subcommand(1);

    using Handler = std::function<int(const RunConfig&, std::ostream&)>;
    struct Entry {
        const char* name;
        const char* help;
        Handler handler;
    };
    const std::vector<Entry> entries{
        {"train", "fit a model, save it and print held-out metrics", cmd_train},
        {"predict", "score a CSV with a saved model", cmd_predict},
        {"evaluate", "metrics of a saved model on a labeled CSV", cmd_evaluate},
        {"importance", "gain importance ranking of a saved model", cmd_importance},
        {"ablate", "all model variants on one split", cmd_ablate},
        {"remove-features", "retrain with each listed column removed", cmd_remove},
        {"compare", "baselines and boosted models under equal and manual weights", cmd_compare},
        {"synth", "write planted-signal synthetic data", cmd_synth},
    };

    Invocation inv;
    std::vector<CLI::App*> subs;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_config_options(*sub, inv);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!subs[i]->parsed()) {
            continue;
        }
        try {
            return entries[i].handler(build_config(inv), out);
        } catch (const ConfigError& e) {
            err << "error: " << e.what() << "\n\n" << subs[i]->help();
            return 2;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return 1;
        }
    }
    err << app.help();
    return 2;
}

}  // namespace attnboost
