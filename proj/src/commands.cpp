#include "ensemblekit/commands.hpp"

#include <chrono>
#include <fstream>
#include <set>

#include "ensemblekit/errors.hpp"
#include "ensemblekit/image.hpp"
#include "ensemblekit/rng.hpp"

namespace ensemblekit {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw DataError("cannot write '" + path.string() + "'");
}

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw DataError("cannot create output directory '" + dir.string() + "'");
}

void require_path(const fs::path& p, const std::string& what) {
    if (p.empty()) throw ConfigError(what + " path is required");
}

double label_accuracy(std::span<const Label> pred, std::span<const Label> truth) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += pred[i] == truth[i];
    return truth.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::string bagging_log(const BaggingModel& model, const Dataset& train) {
    std::string out = "member,seed,unique_fraction,train_accuracy\n";
    for (std::size_t i = 0; i < model.members.size(); ++i) {
        const auto idx = bootstrap_indices(train.size(), model.seeds[i]);
        const std::set<std::size_t> unique(idx.begin(), idx.end());
        const double unique_fraction = static_cast<double>(unique.size()) / static_cast<double>(train.size());
        const double acc = label_accuracy(predict_labels(model.members[i], train.features()), train.labels());
        out += std::to_string(i) + "," + std::to_string(model.seeds[i]) + "," + format_real(unique_fraction) + "," +
               format_real(acc) + "\n";
    }
    return out;
}

std::string stacking_log(const StackingFit& fit, const Dataset& train, const std::vector<LearnerSpec>& bases) {
    const auto k = static_cast<Eigen::Index>(train.num_classes());
    std::string out = "stage,fold,base,kind,rows,accuracy\n";
    const auto block_accuracy = [&](std::size_t b, const std::vector<std::size_t>& rows) {
        std::size_t hits = 0;
        for (std::size_t i : rows)
            hits += argmax(fit.meta.features.row(static_cast<Eigen::Index>(i)).segment(static_cast<Eigen::Index>(b) * k, k).transpose()) ==
                    train.labels()[i];
        return rows.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(rows.size());
    };
    if (fit.model.meta_leakage_mode) {
        std::vector<std::size_t> all(train.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        for (std::size_t b = 0; b < bases.size(); ++b)
            out += "leak,-1," + std::to_string(b) + "," + to_string(bases[b].kind) + "," + std::to_string(all.size()) + "," +
                   format_real(block_accuracy(b, all)) + "\n";
    } else {
        for (int j = 0; j < fit.model.folds; ++j) {
            std::vector<std::size_t> held_out;
            for (std::size_t i = 0; i < train.size(); ++i)
                if (fit.meta.fold_of_row[i] == j) held_out.push_back(i);
            for (std::size_t b = 0; b < bases.size(); ++b)
                out += "fold," + std::to_string(j) + "," + std::to_string(b) + "," + to_string(bases[b].kind) + "," +
                       std::to_string(held_out.size()) + "," + format_real(block_accuracy(b, held_out)) + "\n";
        }
    }
    std::vector<Label> meta_pred(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        meta_pred[i] = predict_label(fit.model.meta_model, fit.meta.features.row(static_cast<Eigen::Index>(i)).transpose());
    out += "meta,-1,-1,logreg," + std::to_string(train.size()) + "," + format_real(label_accuracy(meta_pred, train.labels())) + "\n";
    return out;
}

Dataset load_labelled(const fs::path& path, const std::string& what) {
    require_path(path, what);
    return load_feature_csv(path);
}

}  // namespace

Dataset align_labels(const Dataset& ds, const ClassRegistry& target) {
    if (ds.registry() == target) return ds;
    std::vector<Label> mapped(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::string& name = ds.registry().name(ds.labels()[i]);
        const auto idx = target.find(name);
        if (!idx) throw DataError("class '" + name + "' is not known to the model");
        mapped[i] = *idx;
    }
    return Dataset(ds.features(), std::move(mapped), target);
}

TrainResult train_ensemble(const Dataset& train, const RunConfig& cfg, Method method) {
    switch (method) {
        case Method::bagging: {
            BaggingModel model = fit_bagging(train, cfg.bagging_m, cfg.bagging_learner, cfg.seed);
            std::string log = bagging_log(model, train);
            return {std::move(model), std::move(log), std::nullopt};
        }
        case Method::boosting: {
            BoostModel model = fit_boosting(train, cfg.boosting_rounds, cfg.boosting_learner, cfg.boosting_mode, cfg.seed);
            std::string log = boost_history_csv(model);
            return {std::move(model), std::move(log), std::nullopt};
        }
        case Method::stacking: {
            StackingOptions options{cfg.stacking_folds, cfg.meta_leakage_mode};
            StackingFit fit = fit_stacking_detailed(train, cfg.stacking_bases, cfg.stacking_meta, options, cfg.seed);
            std::string log = stacking_log(fit, train, cfg.stacking_bases);
            std::string meta = meta_features_csv(fit.meta, train, cfg.stacking_bases.size());
            return {std::move(fit.model), std::move(log), std::move(meta)};
        }
    }
    throw InvariantError("unknown method");
}

Evaluation evaluate_model(const EnsembleModel& model, const Dataset& data) {
    if (data.empty()) throw DataError("evaluate: empty dataset");
    const Dataset aligned = align_labels(data, registry_of(model));
    const std::vector<Label> pred = predict_rows(model, aligned.features());
    ConfusionMatrix cm = confusion_matrix(aligned.labels(), pred, aligned.registry());
    ClassificationReport report = classification_report(cm);
    return {std::move(cm), std::move(report)};
}

void write_evaluation(const Evaluation& eval, const fs::path& dir, const std::string& title) {
    ensure_dir(dir);
    write_text_file(dir / "report.txt", format_report_text(eval.report));
    write_text_file(dir / "report.json", report_to_json(eval.report, eval.cm).dump(2) + "\n");
    write_text_file(dir / "confusion_matrix.csv", confusion_matrix_csv(eval.cm));
    write_text_file(dir / "confusion_matrix.svg", confusion_matrix_svg(eval.cm, title));
}

ojson cmd_split(const RunConfig& cfg) {
    cfg.validate();
    require_path(cfg.dataset.path, "dataset");
    const std::uint64_t balance_seed = derive_seed(cfg.seed, 0);
    SplitSpec spec = cfg.split;
    spec.seed = derive_seed(cfg.seed, 1);

    DatasetSplit split;
    if (cfg.dataset.format == "csv") {
        Dataset ds = load_feature_csv(cfg.dataset.path);
        if (cfg.dataset.balance_per_class) ds = balance_classes(ds, *cfg.dataset.balance_per_class, balance_seed);
        split = stratified_split(ds, spec);
    } else {
        LabeledImages raw = load_image_dir(cfg.dataset.path);
        for (auto& img : raw.images) img = resize(img, cfg.dataset.resize, cfg.dataset.resize);
        std::vector<std::size_t> pool(raw.images.size());
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
        if (cfg.dataset.balance_per_class)
            pool = balance_indices(raw.labels, raw.registry.size(), *cfg.dataset.balance_per_class, balance_seed);
        std::vector<Label> pool_labels(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) pool_labels[i] = raw.labels[pool[i]];
        const SplitIndices parts = stratified_split_indices(pool_labels, raw.registry.size(), spec);

        SplitMix64 augment_rng(derive_seed(cfg.seed, 2));
        const auto build = [&](const std::vector<std::size_t>& part, bool augment) {
            std::vector<Eigen::VectorXd> rows;
            std::vector<Label> labels;
            for (std::size_t p : part) {
                const Image& img = raw.images[pool[p]];
                const Label y = pool_labels[p];
                rows.push_back(extract_features(img, cfg.dataset.features));
                labels.push_back(y);
                if (augment) {
                    static constexpr Augmentation rotations[] = {Augmentation::rot90, Augmentation::rot180, Augmentation::rot270};
                    rows.push_back(extract_features(ensemblekit::augment(img, Augmentation::hflip), cfg.dataset.features));
                    labels.push_back(y);
                    rows.push_back(extract_features(ensemblekit::augment(img, rotations[augment_rng.uniform_index(3)]),
                                                    cfg.dataset.features));
                    labels.push_back(y);
                }
            }
            Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : rows.front().size());
            for (std::size_t i = 0; i < rows.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
            return Dataset(std::move(x), std::move(labels), raw.registry);
        };
        split = {build(parts.train, cfg.dataset.augment), build(parts.val, false), build(parts.test, false)};
    }

    ensure_dir(cfg.out_dir);
    write_feature_csv(split.train, cfg.out_dir / "train.csv");
    write_feature_csv(split.val, cfg.out_dir / "val.csv");
    write_feature_csv(split.test, cfg.out_dir / "test.csv");

    ojson manifest;
    manifest["seed"] = cfg.seed;
    manifest["fractions"] = {{"train", cfg.split.train_fraction}, {"val", cfg.split.val_fraction}, {"test", cfg.split.test_fraction}};
    manifest["classes"] = split.train.registry().names();
    manifest["counts"] = {{"train", split.train.class_counts()}, {"val", split.val.class_counts()}, {"test", split.test.class_counts()}};
    manifest["totals"] = {{"train", split.train.size()}, {"val", split.val.size()}, {"test", split.test.size()}};
    ojson source;
    source["path"] = cfg.dataset.path.string();
    source["format"] = cfg.dataset.format;
    if (cfg.dataset.format == "images") {
        source["features"] = to_string(cfg.dataset.features);
        source["resize"] = cfg.dataset.resize;
        source["augment"] = cfg.dataset.augment;
    }
    source["balance_per_class"] = cfg.dataset.balance_per_class ? ojson(*cfg.dataset.balance_per_class) : ojson(nullptr);
    manifest["source"] = std::move(source);
    write_text_file(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

ModelArchive cmd_train(const RunConfig& cfg) {
    cfg.validate();
    const Dataset train = load_labelled(cfg.train_path, "training set");
    TrainResult result = train_ensemble(train, cfg, cfg.method);
    ModelArchive archive{std::move(result.model), {cfg.hash(), cfg.seed, kArtifactVersion}};
    ensure_dir(cfg.out_dir);
    save_archive(archive, cfg.out_dir / "model.json");
    write_text_file(cfg.out_dir / "train_log.csv", result.log_csv);
    if (result.meta_features_csv) write_text_file(cfg.out_dir / "meta_features.csv", *result.meta_features_csv);
    return archive;
}

Evaluation cmd_evaluate(const RunConfig& cfg) {
    require_path(cfg.archive_path, "archive");
    const ModelArchive archive = load_archive(cfg.archive_path);
    const Dataset data = load_labelled(cfg.test_path, "evaluation set");
    Evaluation eval = evaluate_model(archive.model, data);
    write_evaluation(eval, cfg.out_dir, "Confusion matrix - " + to_string(method_of(archive.model)));
    return eval;
}

std::vector<ComparisonRow> cmd_compare(const RunConfig& cfg) {
    cfg.validate();
    const Dataset train = load_labelled(cfg.train_path, "training set");
    const Dataset test = load_labelled(cfg.test_path, "test set");
    ensure_dir(cfg.out_dir);

    std::vector<ComparisonRow> rows;
    for (Method method : {Method::bagging, Method::boosting, Method::stacking}) {
        const std::string name = to_string(method);
        const auto start = std::chrono::steady_clock::now();
        Evaluation eval;
        TrainResult result;
        try {
            result = train_ensemble(train, cfg, method);
            eval = evaluate_model(result.model, test);
        } catch (const ConfigError& e) {
            throw ConfigError("compare: " + name + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError("compare: " + name + ": " + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const fs::path dir = cfg.out_dir / name;
        RunConfig method_cfg = cfg;
        method_cfg.method = method;
        write_evaluation(eval, dir, "Confusion matrix - " + name);
        save_archive({std::move(result.model), {method_cfg.hash(), cfg.seed, kArtifactVersion}}, dir / "model.json");
        write_text_file(dir / "train_log.csv", result.log_csv);
        rows.push_back({name, eval.report.accuracy, eval.report.macro_avg.f1, seconds});
    }
    write_text_file(cfg.out_dir / "comparison.txt", comparison_text(rows));
    write_text_file(cfg.out_dir / "comparison.csv", comparison_csv(rows));
    write_text_file(cfg.out_dir / "comparison.svg", comparison_svg(rows, "Test accuracy by ensemble method"));
    return rows;
}

std::vector<std::string> cmd_predict(const RunConfig& cfg) {
    require_path(cfg.archive_path, "archive");
    require_path(cfg.input_path, "input");
    const ModelArchive archive = load_archive(cfg.archive_path);
    const Eigen::MatrixXd x = load_feature_matrix_csv(cfg.input_path);
    const Eigen::Index d = input_dim(archive.model);
    if (x.cols() != d)
        throw DataError("predict: model expects d=" + std::to_string(d) + " feature columns, input has " +
                        std::to_string(x.cols()));
    const ClassRegistry& registry = registry_of(archive.model);
    std::vector<std::string> names;
    std::string out = "prediction\n";
    for (Label y : predict_rows(archive.model, x)) {
        names.push_back(registry.name(y));
        out += names.back() + "\n";
    }
    ensure_dir(cfg.out_dir);
    write_text_file(cfg.out_dir / "predictions.csv", out);
    return names;
}

}  // namespace ensemblekit
