#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "ensemblekit/data.hpp"
#include "ensemblekit/image.hpp"

namespace ensemblekit {

/// Nonnegative per-sample weights summing to 1.
using SampleWeights = Eigen::VectorXd;

/// Per-class probabilities summing to 1.
using ProbabilityDistribution = Eigen::VectorXd;

enum class LearnerKind { logreg, stump };
enum class FeatureMethod { histogram24, downsample192 };

struct LearnerSpec {
    LearnerKind kind = LearnerKind::logreg;
    double learning_rate = 0.5;
    int epochs = 200;
    double l2 = 0.0;

    void validate() const;
    friend bool operator==(const LearnerSpec&, const LearnerSpec&) = default;
};

/// Multinomial logistic regression: p(y | x) = softmax(W x + b).
struct LogRegModel {
    Eigen::MatrixXd weights;  // K x d
    Eigen::VectorXd biases;   // K
    ClassRegistry registry;

    Eigen::Index dim() const noexcept { return weights.cols(); }
};

/// x[feature] <= threshold -> left, otherwise right.
struct StumpModel {
    Eigen::Index feature = 0;
    double threshold = 0.0;
    Label left = 0;
    Label right = 0;
    Eigen::Index input_dim = 1;
    ClassRegistry registry;

    Eigen::Index dim() const noexcept { return input_dim; }
};

using BaseModel = std::variant<LogRegModel, StumpModel>;

std::string to_string(LearnerKind kind);
LearnerKind parse_learner_kind(const std::string& text);
std::string to_string(FeatureMethod method);
FeatureMethod parse_feature_method(const std::string& text);

/// histogram24: 8 bins of width 32 per channel, each channel normalized to sum 1,
/// laid out R bins then G then B. downsample192: nearest-neighbour 8x8, values / 255,
/// row-major with channels interleaved.
Eigen::VectorXd extract_features(const Image& img, FeatureMethod method);

SampleWeights uniform_weights(std::size_t n);

/// Throws DataError on length mismatch, negative entries, or |sum - 1| > tolerance.
void check_weights(const SampleWeights& w, std::size_t n, double tolerance = 1e-6);

/// Index of the largest entry; the lowest index wins ties.
Label argmax(const Eigen::Ref<const Eigen::VectorXd>& scores);

/// -sum_i w_i log p(y_i | x_i) + (l2 / 2) ||W||^2. Biases are not penalized.
double logreg_loss(const LogRegModel& model, const Dataset& ds, const SampleWeights& w, double l2);

struct LogRegGradient {
    Eigen::MatrixXd weights;
    Eigen::VectorXd biases;
};

LogRegGradient logreg_gradient(const LogRegModel& model, const Dataset& ds, const SampleWeights& w,
                               double l2);

/// 1 / L where L = lambda_max(sum_i w_i x~_i x~_i^T) / 2 + l2 bounds the loss curvature
/// (x~ is x with a trailing 1 for the bias). Gradient descent at or below this step never
/// increases the loss.
double logreg_stable_learning_rate(const Dataset& ds, const SampleWeights& w, double l2);

/// Full-batch gradient descent from zero parameters for spec.epochs steps.
/// `on_epoch(e, loss)` is called with e = 0 for the initial loss and e = 1..epochs after
/// each step. The seed is accepted for interface stability; the optimizer is deterministic.
LogRegModel fit_logreg(const Dataset& ds, const SampleWeights& w, const LearnerSpec& spec,
                       std::uint64_t seed,
                       const std::function<void(int, double)>& on_epoch = {});

/// Exhaustive weighted-error minimization over (feature, midpoint) candidates.
StumpModel fit_stump(const Dataset& ds, const SampleWeights& w);

BaseModel fit_learner(const Dataset& ds, const SampleWeights& w, const LearnerSpec& spec,
                      std::uint64_t seed);

/// Softmax with max subtraction.
ProbabilityDistribution predict_proba(const LogRegModel& model,
                                      const Eigen::Ref<const Eigen::VectorXd>& x);
/// Stumps emit the one-hot distribution of their label.
ProbabilityDistribution predict_proba(const BaseModel& model,
                                      const Eigen::Ref<const Eigen::VectorXd>& x);

Label predict_label(const LogRegModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Label predict_label(const StumpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Label predict_label(const BaseModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Row-wise versions: one output row / entry per row of `x`.
Eigen::MatrixXd predict_proba_rows(const LogRegModel& model, const Eigen::MatrixXd& x);
Eigen::MatrixXd predict_proba_rows(const BaseModel& model, const Eigen::MatrixXd& x);
std::vector<Label> predict_labels(const BaseModel& model, const Eigen::MatrixXd& x);

Eigen::Index input_dim(const BaseModel& model);
const ClassRegistry& registry_of(const BaseModel& model);

}  // namespace ensemblekit
