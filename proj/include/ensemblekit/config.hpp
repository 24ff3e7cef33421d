#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ensemblekit/boosting.hpp"
#include "ensemblekit/data.hpp"
#include "ensemblekit/ensemble.hpp"
#include "ensemblekit/learners.hpp"

namespace ensemblekit {

struct DatasetConfig {
    std::filesystem::path path;
    std::string format = "csv";  // csv | images
    FeatureMethod features = FeatureMethod::histogram24;
    int resize = 240;
    std::optional<std::size_t> balance_per_class;
    bool augment = true;
};

struct RunConfig {
    DatasetConfig dataset;
    SplitSpec split;
    Method method = Method::bagging;

    int bagging_m = 6;
    LearnerSpec bagging_learner{LearnerKind::logreg, 0.1, 300, 0.0};

    int boosting_rounds = 20;
    BoostMode boosting_mode = BoostMode::samme;
    LearnerSpec boosting_learner{LearnerKind::stump, 0.1, 300, 0.0};

    int stacking_folds = 5;
    bool meta_leakage_mode = false;
    std::vector<LearnerSpec> stacking_bases = default_stacking_bases();
    LearnerSpec stacking_meta{LearnerKind::logreg, 0.5, 300, 0.0};

    std::filesystem::path train_path;
    std::filesystem::path test_path;
    std::filesystem::path archive_path;
    std::filesystem::path input_path;

    std::uint64_t seed = 42;
    std::filesystem::path out_dir = "out";

    /// Six bases: five logistic regressions with different step sizes, budgets and
    /// penalties, plus one stump.
    static std::vector<LearnerSpec> default_stacking_bases();

    /// Throws ConfigError on any out-of-range hyperparameter.
    void validate() const;

    /// Canonical JSON form (sorted keys) of every field; hashed into archive provenance.
    nlohmann::json to_json() const;
    std::string hash() const;
};

/// Fills `cfg` from a JSON document. Unknown keys are rejected. Relative paths are
/// resolved against `base_dir`.
void apply_config_json(RunConfig& cfg, const nlohmann::json& doc, const std::filesystem::path& base_dir);

RunConfig load_config(const std::filesystem::path& path);

LearnerSpec learner_from_json(const nlohmann::json& j);
nlohmann::json learner_to_json(const LearnerSpec& spec);

}  // namespace ensemblekit
