#include "ensemblekit/bagging.hpp"

#include <future>

#include "ensemblekit/errors.hpp"
#include "ensemblekit/rng.hpp"

namespace ensemblekit {

BaseModel fit_bagging_member(const Dataset& train, const LearnerSpec& spec, std::uint64_t member_seed) {
    const Dataset sample = bootstrap_sample(train, member_seed);
    return fit_learner(sample, uniform_weights(sample.size()), spec, member_seed);
}

BaggingModel fit_bagging(const Dataset& train, int m, const LearnerSpec& spec, std::uint64_t seed) {
    if (m < 1) throw ConfigError("bagging: m must be at least 1");
    if (train.empty()) throw DataError("bagging: empty training set");
    spec.validate();

    BaggingModel model;
    model.registry = train.registry();
    std::vector<std::future<BaseModel>> pending;
    for (int i = 0; i < m; ++i) {
        const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
        model.seeds.push_back(s);
        pending.push_back(std::async(std::launch::async, [&train, &spec, s] { return fit_bagging_member(train, spec, s); }));
    }
    for (auto& f : pending) model.members.push_back(f.get());
    return model;
}

Label majority_vote(std::span<const Label> votes, std::size_t num_classes) {
    if (votes.empty()) throw InvariantError("majority_vote: no votes");
    std::vector<std::size_t> counts(num_classes, 0);
    for (Label v : votes) {
        if (v < 0 || static_cast<std::size_t>(v) >= num_classes) throw InvariantError("majority_vote: vote out of range");
        ++counts[static_cast<std::size_t>(v)];
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < num_classes; ++c)
        if (counts[c] > counts[best]) best = c;
    return static_cast<Label>(best);
}

Label predict_bagging(const BaggingModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    std::vector<Label> votes;
    votes.reserve(model.members.size());
    for (const auto& member : model.members) votes.push_back(predict_label(member, x));
    return majority_vote(votes, model.registry.size());
}

std::vector<Label> predict_bagging_rows(const BaggingModel& model, const Eigen::MatrixXd& x) {
    std::vector<Label> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = predict_bagging(model, x.row(i).transpose());
    return out;
}

}  // namespace ensemblekit
