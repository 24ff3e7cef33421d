#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ensemblekit/learners.hpp"

namespace ensemblekit {

/// binary: AdaBoost on labels {0 -> -1, 1 -> +1}. samme: multiclass AdaBoost with
/// alpha = ln((1 - eps) / eps) + ln(K - 1) and indicator-based reweighting.
enum class BoostMode { binary, samme };

std::string to_string(BoostMode mode);
BoostMode parse_boost_mode(const std::string& text);

struct BoostRound {
    BaseModel model;
    double alpha = 0.0;
};

struct RoundRecord {
    int round = 0;  // 1-based
    double eps = 0.0;
    double alpha = 0.0;
};

struct BoostModel {
    std::vector<BoostRound> rounds;
    BoostMode mode = BoostMode::samme;
    ClassRegistry registry;
    std::vector<RoundRecord> history;
};

inline constexpr double kEpsClamp = 1e-10;

SampleWeights init_weights(std::size_t n);

double weighted_error(std::span<const Label> preds, std::span<const Label> labels, const SampleWeights& w);

/// eps is clamped to [1e-10, 1 - 1e-10] first.
double model_weight(double eps, BoostMode mode, std::size_t num_classes);

/// Error rate at or above which a round is rejected: 1/2 (binary) or (K-1)/K (samme).
double stopping_threshold(BoostMode mode, std::size_t num_classes);

/// Reweights and renormalizes. Throws InvariantError if the result cannot be normalized.
SampleWeights update_weights(const SampleWeights& w, double alpha, std::span<const Label> preds,
                             std::span<const Label> labels, BoostMode mode);

/// Round t fits the learner with seed derive_seed(seed, t). A round whose error reaches the
/// stopping threshold is discarded and ends training. `on_round` sees each accepted round
/// with the weights produced by its update.
BoostModel fit_boosting(const Dataset& train, int rounds, const LearnerSpec& spec, BoostMode mode,
                        std::uint64_t seed,
                        const std::function<void(const RoundRecord&, const SampleWeights&)>& on_round = {});

/// binary: sign of sum alpha_t h_t with h in {-1, +1}, a zero sum maps to class 0.
/// samme: argmax_c sum alpha_t [h_t = c], lowest index on ties.
Label predict_boosting(const BoostModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
std::vector<Label> predict_boosting_rows(const BoostModel& model, const Eigen::MatrixXd& x);

/// `round,eps,alpha` header plus one line per accepted round.
std::string boost_history_csv(const BoostModel& model);

}  // namespace ensemblekit
