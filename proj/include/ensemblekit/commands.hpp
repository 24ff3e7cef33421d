#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ensemblekit/archive.hpp"
#include "ensemblekit/config.hpp"
#include "ensemblekit/metrics.hpp"
#include "ensemblekit/report.hpp"

namespace ensemblekit {

struct TrainResult {
    EnsembleModel model;
    std::string log_csv;
    std::optional<std::string> meta_features_csv;  // stacking only
};

struct Evaluation {
    ConfusionMatrix cm;
    ClassificationReport report;
};

/// Relabels `ds` onto `target` by class name. Throws DataError for unknown names.
Dataset align_labels(const Dataset& ds, const ClassRegistry& target);

TrainResult train_ensemble(const Dataset& train, const RunConfig& cfg, Method method);
Evaluation evaluate_model(const EnsembleModel& model, const Dataset& data);

/// report.txt, report.json, confusion_matrix.csv, confusion_matrix.svg under `dir`.
void write_evaluation(const Evaluation& eval, const std::filesystem::path& dir, const std::string& title);

/// train.csv, val.csv, test.csv and manifest.json under cfg.out_dir. Returns the manifest.
nlohmann::ordered_json cmd_split(const RunConfig& cfg);

/// model.json and train_log.csv (plus meta_features.csv for stacking) under cfg.out_dir.
ModelArchive cmd_train(const RunConfig& cfg);

Evaluation cmd_evaluate(const RunConfig& cfg);

/// Trains and evaluates all three methods on cfg.train_path / cfg.test_path. Writes
/// comparison.{txt,csv,svg} plus one subdirectory per method.
std::vector<ComparisonRow> cmd_compare(const RunConfig& cfg);

/// predictions.csv with a `prediction` header and one class name per input row.
std::vector<std::string> cmd_predict(const RunConfig& cfg);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ensemblekit
