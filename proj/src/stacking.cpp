#include "ensemblekit/stacking.hpp"

#include <future>

#include "ensemblekit/errors.hpp"
#include "ensemblekit/rng.hpp"

namespace ensemblekit {

Eigen::VectorXd build_meta_features(std::span<const BaseModel> base_models,
                                    const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (base_models.empty()) throw InvariantError("stacking: no base models");
    const auto k = static_cast<Eigen::Index>(registry_of(base_models.front()).size());
    Eigen::VectorXd z(k * static_cast<Eigen::Index>(base_models.size()));
    for (std::size_t b = 0; b < base_models.size(); ++b)
        z.segment(static_cast<Eigen::Index>(b) * k, k) = predict_proba(base_models[b], x);
    return z;
}

std::vector<int> stratified_folds(std::span<const Label> labels, std::size_t num_classes, int folds,
                                  std::uint64_t seed) {
    if (folds < 2) throw ConfigError("stacking: folds must be at least 2");
    auto groups = indices_by_class(labels, num_classes);
    std::vector<int> fold_of(labels.size(), -1);
    for (std::size_t c = 0; c < num_classes; ++c) {
        auto& members = groups[c];
        if (members.size() < static_cast<std::size_t>(folds))
            throw DataError("stacking: class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                            " samples, fewer than " + std::to_string(folds) + " folds");
        SplitMix64 rng(derive_seed(seed, c));
        shuffle(std::span(members), rng);
        for (std::size_t j = 0; j < members.size(); ++j) fold_of[members[j]] = static_cast<int>(j % static_cast<std::size_t>(folds));
    }
    return fold_of;
}

namespace {

std::uint64_t base_seed(std::uint64_t seed, std::size_t slot) { return derive_seed(seed, 1 + slot); }

std::vector<BaseModel> fit_bases(const Dataset& ds, std::span<const LearnerSpec> specs, std::uint64_t seed,
                                 std::size_t first_slot) {
    std::vector<std::future<BaseModel>> pending;
    for (std::size_t b = 0; b < specs.size(); ++b) {
        const std::uint64_t s = base_seed(seed, first_slot + b);
        const LearnerSpec& spec = specs[b];
        pending.push_back(std::async(std::launch::async, [&ds, &spec, s] {
            return fit_learner(ds, uniform_weights(ds.size()), spec, s);
        }));
    }
    std::vector<BaseModel> out;
    for (auto& f : pending) out.push_back(f.get());
    return out;
}

}  // namespace

StackingFit fit_stacking_detailed(const Dataset& train, std::span<const LearnerSpec> base_specs,
                                  const LearnerSpec& meta_spec, const StackingOptions& options,
                                  std::uint64_t seed) {
    if (base_specs.empty()) throw ConfigError("stacking: at least one base learner is required");
    if (meta_spec.kind != LearnerKind::logreg) throw ConfigError("stacking: the meta-model must be logreg");
    if (train.empty()) throw DataError("stacking: empty training set");
    for (const auto& s : base_specs) s.validate();
    meta_spec.validate();

    const std::size_t n = train.size();
    const std::size_t k_bases = base_specs.size();
    const auto width = static_cast<Eigen::Index>(k_bases * train.num_classes());
    const auto folds = static_cast<std::size_t>(options.folds);

    StackingFit fit;
    fit.meta.features.resize(static_cast<Eigen::Index>(n), width);
    fit.meta.fold_of_row = stratified_folds(train.labels(), train.num_classes(), options.folds, derive_seed(seed, 0));

    // Final bases use the slots after every fold's slots.
    std::vector<BaseModel> final_bases = fit_bases(train, base_specs, seed, folds * k_bases);

    if (options.meta_leakage_mode) {
        std::fill(fit.meta.fold_of_row.begin(), fit.meta.fold_of_row.end(), -1);
        for (std::size_t i = 0; i < n; ++i)
            fit.meta.features.row(static_cast<Eigen::Index>(i)) =
                build_meta_features(final_bases, train.features().row(static_cast<Eigen::Index>(i)).transpose()).transpose();
    } else {
        fit.meta.fold_training_rows.resize(folds);
        for (std::size_t j = 0; j < folds; ++j) {
            std::vector<std::size_t> held_out;
            auto& training_rows = fit.meta.fold_training_rows[j];
            for (std::size_t i = 0; i < n; ++i)
                (static_cast<std::size_t>(fit.meta.fold_of_row[i]) == j ? held_out : training_rows).push_back(i);
            const std::vector<BaseModel> fold_bases = fit_bases(train.subset(training_rows), base_specs, seed, j * k_bases);
            for (std::size_t i : held_out)
                fit.meta.features.row(static_cast<Eigen::Index>(i)) =
                    build_meta_features(fold_bases, train.features().row(static_cast<Eigen::Index>(i)).transpose()).transpose();
        }
    }

    const Dataset meta_train(fit.meta.features, train.labels(), train.registry());
    fit.model.meta_model = fit_logreg(meta_train, uniform_weights(n), meta_spec, base_seed(seed, (folds + 1) * k_bases));
    fit.model.base_models = std::move(final_bases);
    fit.model.folds = options.folds;
    fit.model.meta_leakage_mode = options.meta_leakage_mode;
    fit.model.registry = train.registry();
    return fit;
}

StackingModel fit_stacking(const Dataset& train, std::span<const LearnerSpec> base_specs,
                           const LearnerSpec& meta_spec, const StackingOptions& options, std::uint64_t seed) {
    return fit_stacking_detailed(train, base_specs, meta_spec, options, seed).model;
}

Label predict_stacking(const StackingModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    return predict_label(model.meta_model, build_meta_features(model.base_models, x));
}

std::vector<Label> predict_stacking_rows(const StackingModel& model, const Eigen::MatrixXd& x) {
    std::vector<Label> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = predict_stacking(model, x.row(i).transpose());
    return out;
}

std::string meta_features_csv(const MetaFeatureSet& meta, const Dataset& train, std::size_t num_bases) {
    std::string out;
    for (std::size_t b = 0; b < num_bases; ++b)
        for (const auto& name : train.registry().names()) out += "base" + std::to_string(b) + "_" + name + ",";
    out += "fold,label\n";
    for (Eigen::Index i = 0; i < meta.features.rows(); ++i) {
        for (Eigen::Index c = 0; c < meta.features.cols(); ++c) out += format_real(meta.features(i, c)) + ",";
        out += std::to_string(meta.fold_of_row[static_cast<std::size_t>(i)]) + "," +
               train.registry().name(train.labels()[static_cast<std::size_t>(i)]) + "\n";
    }
    return out;
}

}  // namespace ensemblekit
