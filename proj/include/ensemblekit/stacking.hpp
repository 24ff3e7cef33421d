#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ensemblekit/learners.hpp"

namespace ensemblekit {

struct StackingOptions {
    int folds = 5;
    /// Fit the meta-model on base models trained on all of train (labels leak into
    /// the meta-features). Off by default; kept for fidelity experiments.
    bool meta_leakage_mode = false;
};

struct StackingModel {
    std::vector<BaseModel> base_models;
    LogRegModel meta_model;  // input dimension = k * K
    int folds = 5;
    bool meta_leakage_mode = false;
    ClassRegistry registry;
};

/// Meta-training matrix with the bookkeeping needed to audit out-of-fold discipline.
struct MetaFeatureSet {
    Eigen::MatrixXd features;                            // n x (k * K)
    std::vector<int> fold_of_row;                        // -1 in leakage mode
    std::vector<std::vector<std::size_t>> fold_training_rows;  // rows seen by fold j's base models
};

struct StackingFit {
    StackingModel model;
    MetaFeatureSet meta;
};

/// Concatenated predict_proba outputs, one K-block per base model, in list order.
Eigen::VectorXd build_meta_features(std::span<const BaseModel> base_models,
                                    const Eigen::Ref<const Eigen::VectorXd>& x);

/// fold_of[i] for each sample: per class, shuffled with derive_seed(seed, c) and dealt
/// round-robin. Throws DataError if a class has fewer samples than folds.
std::vector<int> stratified_folds(std::span<const Label> labels, std::size_t num_classes, int folds,
                                  std::uint64_t seed);

StackingFit fit_stacking_detailed(const Dataset& train, std::span<const LearnerSpec> base_specs,
                                  const LearnerSpec& meta_spec, const StackingOptions& options,
                                  std::uint64_t seed);

StackingModel fit_stacking(const Dataset& train, std::span<const LearnerSpec> base_specs,
                           const LearnerSpec& meta_spec, const StackingOptions& options, std::uint64_t seed);

Label predict_stacking(const StackingModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
std::vector<Label> predict_stacking_rows(const StackingModel& model, const Eigen::MatrixXd& x);

/// Columns `base<b>_<class>` for every block, then `fold`, then `label`.
std::string meta_features_csv(const MetaFeatureSet& meta, const Dataset& train, std::size_t num_bases);

}  // namespace ensemblekit
