#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ensemblekit/bagging.hpp"
#include "ensemblekit/boosting.hpp"
#include "ensemblekit/stacking.hpp"

namespace ensemblekit {

enum class Method { bagging, boosting, stacking };

std::string to_string(Method method);
Method parse_method(const std::string& text);

using EnsembleModel = std::variant<BaggingModel, BoostModel, StackingModel>;

Method method_of(const EnsembleModel& model);
const ClassRegistry& registry_of(const EnsembleModel& model);
Eigen::Index input_dim(const EnsembleModel& model);

Label predict(const EnsembleModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
std::vector<Label> predict_rows(const EnsembleModel& model, const Eigen::MatrixXd& x);

}  // namespace ensemblekit
