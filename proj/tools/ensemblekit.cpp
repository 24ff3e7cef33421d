// ensemblekit: split / train / evaluate / compare / predict.
//
// Exit codes: 0 success, 2 configuration or validation error, 3 data error,
// 4 internal invariant violation.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "ensemblekit/commands.hpp"
#include "ensemblekit/errors.hpp"

namespace {

using namespace ensemblekit;

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> dataset;
    std::optional<std::string> format;
    std::optional<std::string> features;
    std::optional<std::size_t> balance_per_class;
    std::optional<double> train_fraction;
    std::optional<double> val_fraction;
    std::optional<double> test_fraction;
    std::optional<std::string> method;
    std::optional<std::string> train;
    std::optional<std::string> test;
    std::optional<std::string> archive;
    std::optional<std::string> input;
    std::optional<int> m;
    std::optional<int> rounds;
    std::optional<std::string> mode;
    std::optional<int> folds;
    bool meta_leakage_mode = false;
};

void add_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON run configuration");
    cmd->add_option("--seed", o.seed, "Seed for every randomized step");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--dataset", o.dataset, "Feature CSV or image directory");
    cmd->add_option("--format", o.format, "Dataset format: csv or images");
    cmd->add_option("--features", o.features, "Image features: histogram24 or downsample192");
    cmd->add_option("--balance-per-class", o.balance_per_class, "Resample every class to this size");
    cmd->add_option("--train-fraction", o.train_fraction, "Training share of each class");
    cmd->add_option("--val-fraction", o.val_fraction, "Validation share of each class");
    cmd->add_option("--test-fraction", o.test_fraction, "Test share of each class");
    cmd->add_option("--method", o.method, "bagging, boosting or stacking");
    cmd->add_option("--train", o.train, "Training feature CSV");
    cmd->add_option("--test", o.test, "Evaluation feature CSV");
    cmd->add_option("--archive", o.archive, "Model archive (model.json)");
    cmd->add_option("--input", o.input, "Feature CSV to predict");
    cmd->add_option("--m", o.m, "Bagging ensemble size");
    cmd->add_option("--T", o.rounds, "Boosting rounds");
    cmd->add_option("--mode", o.mode, "Boosting mode: binary or samme");
    cmd->add_option("--folds", o.folds, "Stacking folds");
    cmd->add_flag("--meta-leakage-mode", o.meta_leakage_mode,
                  "Train the stacking meta-model on in-sample base predictions");
}

RunConfig resolve_config(const Overrides& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.out_dir = *o.out;
    if (o.dataset) cfg.dataset.path = *o.dataset;
    if (o.format) cfg.dataset.format = *o.format;
    if (o.features) cfg.dataset.features = parse_feature_method(*o.features);
    if (o.balance_per_class) cfg.dataset.balance_per_class = *o.balance_per_class;
    if (o.train_fraction) cfg.split.train_fraction = *o.train_fraction;
    if (o.val_fraction) cfg.split.val_fraction = *o.val_fraction;
    if (o.test_fraction) cfg.split.test_fraction = *o.test_fraction;
    if (o.method) cfg.method = parse_method(*o.method);
    if (o.train) cfg.train_path = *o.train;
    if (o.test) cfg.test_path = *o.test;
    if (o.archive) cfg.archive_path = *o.archive;
    if (o.input) cfg.input_path = *o.input;
    if (o.m) cfg.bagging_m = *o.m;
    if (o.rounds) cfg.boosting_rounds = *o.rounds;
    if (o.mode) cfg.boosting_mode = parse_boost_mode(*o.mode);
    if (o.folds) cfg.stacking_folds = *o.folds;
    if (o.meta_leakage_mode) cfg.meta_leakage_mode = true;
    return cfg;
}

int run(const std::string& command, const Overrides& o) {
    const RunConfig cfg = resolve_config(o);
    if (command == "split") {
        const auto manifest = cmd_split(cfg);
        std::cout << "train " << manifest["totals"]["train"] << ", val " << manifest["totals"]["val"] << ", test "
                  << manifest["totals"]["test"] << " -> " << cfg.out_dir.string() << "\n";
    } else if (command == "train") {
        const ModelArchive archive = cmd_train(cfg);
        std::cout << "trained " << to_string(method_of(archive.model)) << " -> " << (cfg.out_dir / "model.json").string()
                  << "\n";
    } else if (command == "evaluate") {
        std::cout << format_report_text(cmd_evaluate(cfg).report);
    } else if (command == "compare") {
        std::cout << comparison_text(cmd_compare(cfg));
    } else if (command == "predict") {
        const auto names = cmd_predict(cfg);
        std::cout << names.size() << " predictions -> " << (cfg.out_dir / "predictions.csv").string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bagging, boosting and stacking ensembles with evaluation reports", "ensemblekit"};
    app.require_subcommand(1);
    Overrides overrides;
    std::string chosen;
    const std::pair<const char*, const char*> commands[] = {
        {"split", "Balance, stratify and write train/val/test feature CSVs"},
        {"train", "Fit one ensemble and write model.json plus a training log"},
        {"evaluate", "Score an archived model and write report files"},
        {"compare", "Train and evaluate bagging, boosting and stacking side by side"},
        {"predict", "Predict class names for a feature CSV"},
    };
    for (const auto& [name, description] : commands) {
        CLI::App* cmd = app.add_subcommand(name, description);
        add_options(cmd, overrides);
        cmd->callback([&chosen, name] { chosen = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run(chosen, overrides);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
