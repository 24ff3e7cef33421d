#include "ensemblekit/boosting.hpp"

#include <algorithm>
#include <cmath>

#include "ensemblekit/errors.hpp"
#include "ensemblekit/rng.hpp"

namespace ensemblekit {

std::string to_string(BoostMode mode) { return mode == BoostMode::binary ? "binary" : "samme"; }

BoostMode parse_boost_mode(const std::string& text) {
    if (text == "binary") return BoostMode::binary;
    if (text == "samme") return BoostMode::samme;
    throw ConfigError("unknown boosting mode '" + text + "' (expected binary or samme)");
}

SampleWeights init_weights(std::size_t n) { return uniform_weights(n); }

double weighted_error(std::span<const Label> preds, std::span<const Label> labels, const SampleWeights& w) {
    if (preds.size() != labels.size() || static_cast<std::size_t>(w.size()) != labels.size())
        throw DataError("weighted_error: predictions, labels and weights differ in length");
    double eps = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (preds[i] != labels[i]) eps += w(static_cast<Eigen::Index>(i));
    return std::clamp(eps, 0.0, 1.0);
}

double model_weight(double eps, BoostMode mode, std::size_t num_classes) {
    const double e = std::clamp(eps, kEpsClamp, 1.0 - kEpsClamp);
    const double log_odds = std::log((1.0 - e) / e);
    if (mode == BoostMode::binary) return 0.5 * log_odds;
    return log_odds + std::log(static_cast<double>(num_classes) - 1.0);
}

double stopping_threshold(BoostMode mode, std::size_t num_classes) {
    if (mode == BoostMode::binary) return 0.5;
    const auto k = static_cast<double>(num_classes);
    return (k - 1.0) / k;
}

SampleWeights update_weights(const SampleWeights& w, double alpha, std::span<const Label> preds,
                             std::span<const Label> labels, BoostMode mode) {
    if (preds.size() != labels.size() || static_cast<std::size_t>(w.size()) != labels.size())
        throw DataError("update_weights: predictions, labels and weights differ in length");
    SampleWeights out = w;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        if (mode == BoostMode::binary) {
            const double y = labels[i] == 1 ? 1.0 : -1.0;
            const double h = preds[i] == 1 ? 1.0 : -1.0;
            out(r) *= std::exp(-alpha * y * h);
        } else if (preds[i] != labels[i]) {
            out(r) *= std::exp(alpha);
        }
    }
    const double total = out.sum();
    if (!(total > 0.0) || !std::isfinite(total))
        throw InvariantError("update_weights: weights cannot be renormalized (alpha " + format_real(alpha) + ")");
    return out / total;
}

BoostModel fit_boosting(const Dataset& train, int rounds, const LearnerSpec& spec, BoostMode mode,
                        std::uint64_t seed,
                        const std::function<void(const RoundRecord&, const SampleWeights&)>& on_round) {
    if (rounds < 1) throw ConfigError("boosting: T must be at least 1");
    if (train.empty()) throw DataError("boosting: empty training set");
    const std::size_t k = train.num_classes();
    if (mode == BoostMode::binary && k != 2)
        throw ConfigError("boosting: binary mode needs exactly 2 classes, dataset has " + std::to_string(k));
    if (mode == BoostMode::samme && k < 2) throw DataError("boosting: samme mode needs at least 2 classes");
    spec.validate();

    BoostModel model;
    model.mode = mode;
    model.registry = train.registry();
    const double threshold = stopping_threshold(mode, k);

    SampleWeights w = init_weights(train.size());
    for (int t = 1; t <= rounds; ++t) {
        BaseModel learner = fit_learner(train, w, spec, derive_seed(seed, static_cast<std::uint64_t>(t)));
        const std::vector<Label> preds = predict_labels(learner, train.features());
        const double eps = weighted_error(preds, train.labels(), w);
        if (eps >= threshold) {
            if (model.rounds.empty())
                throw DataError("boosting: first round error " + format_real(eps) +
                                " is at or above chance level " + format_real(threshold));
            break;
        }
        const double alpha = model_weight(eps, mode, k);
        w = update_weights(w, alpha, preds, train.labels(), mode);
        if (std::abs(w.sum() - 1.0) > 1e-9) throw InvariantError("boosting: weights drifted from unit sum");

        const RoundRecord record{t, eps, alpha};
        model.rounds.push_back({std::move(learner), alpha});
        model.history.push_back(record);
        if (on_round) on_round(record, w);
    }
    return model;
}

Label predict_boosting(const BoostModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (model.mode == BoostMode::binary) {
        double score = 0.0;
        for (const auto& r : model.rounds) score += r.alpha * (predict_label(r.model, x) == 1 ? 1.0 : -1.0);
        return score > 0.0 ? 1 : 0;
    }
    Eigen::VectorXd votes = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.registry.size()));
    for (const auto& r : model.rounds) votes(predict_label(r.model, x)) += r.alpha;
    return argmax(votes);
}

std::vector<Label> predict_boosting_rows(const BoostModel& model, const Eigen::MatrixXd& x) {
    std::vector<Label> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = predict_boosting(model, x.row(i).transpose());
    return out;
}

std::string boost_history_csv(const BoostModel& model) {
    std::string out = "round,eps,alpha\n";
    for (const auto& r : model.history)
        out += std::to_string(r.round) + "," + format_real(r.eps) + "," + format_real(r.alpha) + "\n";
    return out;
}

}  // namespace ensemblekit
