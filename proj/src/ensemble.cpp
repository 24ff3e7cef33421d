#include "ensemblekit/ensemble.hpp"

#include "ensemblekit/errors.hpp"

namespace ensemblekit {

std::string to_string(Method method) {
    switch (method) {
        case Method::bagging: return "bagging";
        case Method::boosting: return "boosting";
        case Method::stacking: return "stacking";
    }
    throw InvariantError("unknown method");
}

Method parse_method(const std::string& text) {
    if (text == "bagging") return Method::bagging;
    if (text == "boosting") return Method::boosting;
    if (text == "stacking") return Method::stacking;
    throw ConfigError("unknown method '" + text + "' (expected bagging, boosting or stacking)");
}

Method method_of(const EnsembleModel& model) { return static_cast<Method>(model.index()); }

const ClassRegistry& registry_of(const EnsembleModel& model) {
    return std::visit([](const auto& m) -> const ClassRegistry& { return m.registry; }, model);
}

Eigen::Index input_dim(const EnsembleModel& model) {
    if (const auto* bag = std::get_if<BaggingModel>(&model)) return input_dim(bag->members.front());
    if (const auto* boost = std::get_if<BoostModel>(&model)) return input_dim(boost->rounds.front().model);
    return input_dim(std::get<StackingModel>(model).base_models.front());
}

Label predict(const EnsembleModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != input_dim(model))
        throw DataError("feature dimensionality mismatch: model expects " + std::to_string(input_dim(model)) +
                        ", input has " + std::to_string(x.size()));
    if (const auto* bag = std::get_if<BaggingModel>(&model)) return predict_bagging(*bag, x);
    if (const auto* boost = std::get_if<BoostModel>(&model)) return predict_boosting(*boost, x);
    return predict_stacking(std::get<StackingModel>(model), x);
}

std::vector<Label> predict_rows(const EnsembleModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != input_dim(model))
        throw DataError("feature dimensionality mismatch: model expects " + std::to_string(input_dim(model)) +
                        ", input has " + std::to_string(x.cols()));
    std::vector<Label> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = predict(model, x.row(i).transpose());
    return out;
}

}  // namespace ensemblekit
