#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ensemblekit/learners.hpp"

namespace ensemblekit {

struct BaggingModel {
    std::vector<BaseModel> members;
    std::vector<std::uint64_t> seeds;  // bootstrap seed of each member
    ClassRegistry registry;
};

/// Member i is fit with uniform weights on bootstrap_sample(train, derive_seed(seed, i)),
/// using the same derived seed for the learner.
BaggingModel fit_bagging(const Dataset& train, int m, const LearnerSpec& spec, std::uint64_t seed);

/// Retrains one member in isolation; identical to fit_bagging's member i.
BaseModel fit_bagging_member(const Dataset& train, const LearnerSpec& spec, std::uint64_t member_seed);

/// Most frequent class; the lowest index wins ties.
Label majority_vote(std::span<const Label> votes, std::size_t num_classes);

Label predict_bagging(const BaggingModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
std::vector<Label> predict_bagging_rows(const BaggingModel& model, const Eigen::MatrixXd& x);

}  // namespace ensemblekit
