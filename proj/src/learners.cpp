#include "ensemblekit/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ensemblekit/errors.hpp"

namespace ensemblekit {

void LearnerSpec::validate() const {
    if (kind == LearnerKind::stump) return;
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw ConfigError("learner: learning_rate must be > 0");
    if (epochs < 1) throw ConfigError("learner: epochs must be >= 1");
    if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ConfigError("learner: l2 must be >= 0");
}

std::string to_string(LearnerKind kind) { return kind == LearnerKind::logreg ? "logreg" : "stump"; }

LearnerKind parse_learner_kind(const std::string& text) {
    if (text == "logreg") return LearnerKind::logreg;
    if (text == "stump") return LearnerKind::stump;
    throw ConfigError("unknown learner kind '" + text + "' (expected logreg or stump)");
}

std::string to_string(FeatureMethod method) {
    return method == FeatureMethod::histogram24 ? "histogram24" : "downsample192";
}

FeatureMethod parse_feature_method(const std::string& text) {
    if (text == "histogram24") return FeatureMethod::histogram24;
    if (text == "downsample192") return FeatureMethod::downsample192;
    throw ConfigError("unknown feature method '" + text + "' (expected histogram24 or downsample192)");
}

Eigen::VectorXd extract_features(const Image& img, FeatureMethod method) {
    if (method == FeatureMethod::histogram24) {
        Eigen::VectorXd hist = Eigen::VectorXd::Zero(24);
        for (int r = 0; r < img.height; ++r)
            for (int c = 0; c < img.width; ++c)
                for (int ch = 0; ch < 3; ++ch) hist(ch * 8 + (img.at(r, c, ch) >> 5)) += 1.0;
        return hist / (static_cast<double>(img.width) * static_cast<double>(img.height));
    }
    const Image small = resize(img, 8, 8);
    Eigen::VectorXd out(192);
    for (std::size_t i = 0; i < small.pixels.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = small.pixels[i] / 255.0;
    return out;
}

SampleWeights uniform_weights(std::size_t n) {
    if (n == 0) throw DataError("weights: n must be at least 1");
    return SampleWeights::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
}

void check_weights(const SampleWeights& w, std::size_t n, double tolerance) {
    if (static_cast<std::size_t>(w.size()) != n)
        throw DataError("sample weights have length " + std::to_string(w.size()) + ", dataset has " +
                        std::to_string(n) + " samples");
    if (!w.allFinite() || (w.array() < 0.0).any()) throw DataError("sample weights must be finite and nonnegative");
    if (std::abs(w.sum() - 1.0) > tolerance)
        throw DataError("sample weights are not normalized (sum " + format_real(w.sum()) + ")");
}

Label argmax(const Eigen::Ref<const Eigen::VectorXd>& scores) {
    if (scores.size() == 0) throw InvariantError("argmax of empty vector");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < scores.size(); ++i)
        if (scores(i) > scores(best)) best = i;
    return static_cast<Label>(best);
}

namespace {

void check_dim(Eigen::Index expected, Eigen::Index found) {
    if (expected != found)
        throw DataError("feature dimensionality mismatch: model expects " + std::to_string(expected) +
                        ", input has " + std::to_string(found));
}

Eigen::MatrixXd logits(const LogRegModel& model, const Eigen::MatrixXd& x) {
    check_dim(model.dim(), x.cols());
    Eigen::MatrixXd z = x * model.weights.transpose();
    z.rowwise() += model.biases.transpose();
    return z;
}

Eigen::MatrixXd softmax_rows(Eigen::MatrixXd z) {
    const Eigen::VectorXd row_max = z.rowwise().maxCoeff();
    z.colwise() -= row_max;
    z = z.array().exp().matrix();
    const Eigen::VectorXd norm = z.rowwise().sum();
    z.array().colwise() /= norm.array();
    return z;
}

}  // namespace

double logreg_loss(const LogRegModel& model, const Dataset& ds, const SampleWeights& w, double l2) {
    Eigen::MatrixXd z = logits(model, ds.features());
    const Eigen::VectorXd row_max = z.rowwise().maxCoeff();
    z.colwise() -= row_max;
    const Eigen::VectorXd log_norm = z.array().exp().rowwise().sum().log().matrix();
    double loss = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        loss -= w(r) * (z(r, ds.labels()[i]) - log_norm(r));
    }
    return loss + 0.5 * l2 * model.weights.squaredNorm();
}

LogRegGradient logreg_gradient(const LogRegModel& model, const Dataset& ds, const SampleWeights& w,
                               double l2) {
    Eigen::MatrixXd residual = softmax_rows(logits(model, ds.features()));
    for (std::size_t i = 0; i < ds.size(); ++i) residual(static_cast<Eigen::Index>(i), ds.labels()[i]) -= 1.0;
    residual.array().colwise() *= w.array();
    return {residual.transpose() * ds.features() + l2 * model.weights, residual.colwise().sum().transpose()};
}

double logreg_stable_learning_rate(const Dataset& ds, const SampleWeights& w, double l2) {
    check_weights(w, ds.size());
    Eigen::MatrixXd augmented(ds.features().rows(), ds.dim() + 1);
    augmented << ds.features(), Eigen::VectorXd::Ones(ds.features().rows());
    const Eigen::MatrixXd second_moment = augmented.transpose() * w.asDiagonal() * augmented;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(second_moment, Eigen::EigenvaluesOnly);
    return 1.0 / (0.5 * solver.eigenvalues().maxCoeff() + l2);
}

LogRegModel fit_logreg(const Dataset& ds, const SampleWeights& w, const LearnerSpec& spec,
                       std::uint64_t /*seed*/, const std::function<void(int, double)>& on_epoch) {
    spec.validate();
    if (spec.kind != LearnerKind::logreg) throw ConfigError("fit_logreg: learner kind must be logreg");
    if (ds.empty()) throw DataError("fit_logreg: empty dataset");
    check_weights(w, ds.size());

    const auto k = static_cast<Eigen::Index>(ds.num_classes());
    LogRegModel model{Eigen::MatrixXd::Zero(k, ds.dim()), Eigen::VectorXd::Zero(k), ds.registry()};
    if (on_epoch) on_epoch(0, logreg_loss(model, ds, w, spec.l2));
    for (int epoch = 1; epoch <= spec.epochs; ++epoch) {
        const LogRegGradient g = logreg_gradient(model, ds, w, spec.l2);
        model.weights -= spec.learning_rate * g.weights;
        model.biases -= spec.learning_rate * g.biases;
        if (on_epoch) on_epoch(epoch, logreg_loss(model, ds, w, spec.l2));
    }
    if (!model.weights.allFinite() || !model.biases.allFinite())
        throw InvariantError("fit_logreg: parameters diverged; lower the learning rate");
    return model;
}

StumpModel fit_stump(const Dataset& ds, const SampleWeights& w) {
    if (ds.empty()) throw DataError("fit_stump: empty dataset");
    check_weights(w, ds.size());

    const std::size_t n = ds.size();
    const std::size_t k = ds.num_classes();
    const auto& x = ds.features();
    const auto& y = ds.labels();

    Eigen::VectorXd class_total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) class_total(y[i]) += w(static_cast<Eigen::Index>(i));
    const double total = class_total.sum();

    // Errors closer than this count as ties; the earlier (feature, threshold) candidate is kept.
    constexpr double tie_tolerance = 1e-12;

    StumpModel best;
    best.input_dim = ds.dim();
    best.registry = ds.registry();
    double best_error = 0.0;
    bool found = false;

    std::vector<std::size_t> order(n);
    Eigen::VectorXd left(static_cast<Eigen::Index>(k));
    for (Eigen::Index f = 0; f < ds.dim(); ++f) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return x(static_cast<Eigen::Index>(a), f) < x(static_cast<Eigen::Index>(b), f);
        });
        left.setZero();
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const auto row = static_cast<Eigen::Index>(order[j]);
            left(y[order[j]]) += w(row);
            const double lo = x(row, f);
            const double hi = x(static_cast<Eigen::Index>(order[j + 1]), f);
            if (!(lo < hi)) continue;
            const Eigen::VectorXd right = class_total - left;
            const Label left_label = argmax(left);
            const Label right_label = argmax(right);
            const double error = total - left(left_label) - right(right_label);
            if (!found || error < best_error - tie_tolerance) {
                double t = std::midpoint(lo, hi);
                if (t >= hi) t = lo;  // adjacent doubles
                best.feature = f;
                best.threshold = t;
                best.left = left_label;
                best.right = right_label;
                best_error = error;
                found = true;
            }
        }
    }
    if (!found) {
        // Every feature is constant: predict the weighted majority everywhere.
        best.feature = 0;
        best.threshold = x(0, 0);
        best.left = best.right = argmax(class_total);
    }
    return best;
}

BaseModel fit_learner(const Dataset& ds, const SampleWeights& w, const LearnerSpec& spec,
                      std::uint64_t seed) {
    if (spec.kind == LearnerKind::stump) return fit_stump(ds, w);
    return fit_logreg(ds, w, spec, seed);
}

ProbabilityDistribution predict_proba(const LogRegModel& model,
                                      const Eigen::Ref<const Eigen::VectorXd>& x) {
    check_dim(model.dim(), x.size());
    Eigen::VectorXd z = model.weights * x + model.biases;
    z.array() -= z.maxCoeff();
    z = z.array().exp().matrix();
    return z / z.sum();
}

ProbabilityDistribution predict_proba(const BaseModel& model,
                                      const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (const auto* lr = std::get_if<LogRegModel>(&model)) return predict_proba(*lr, x);
    const auto& stump = std::get<StumpModel>(model);
    ProbabilityDistribution p = ProbabilityDistribution::Zero(static_cast<Eigen::Index>(stump.registry.size()));
    p(predict_label(stump, x)) = 1.0;
    return p;
}

Label predict_label(const LogRegModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    return argmax(predict_proba(model, x));
}

Label predict_label(const StumpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    check_dim(model.input_dim, x.size());
    return x(model.feature) <= model.threshold ? model.left : model.right;
}

Label predict_label(const BaseModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    return std::visit([&](const auto& m) { return predict_label(m, x); }, model);
}

Eigen::MatrixXd predict_proba_rows(const LogRegModel& model, const Eigen::MatrixXd& x) {
    return softmax_rows(logits(model, x));
}

Eigen::MatrixXd predict_proba_rows(const BaseModel& model, const Eigen::MatrixXd& x) {
    if (const auto* lr = std::get_if<LogRegModel>(&model)) return predict_proba_rows(*lr, x);
    const auto& stump = std::get<StumpModel>(model);
    check_dim(stump.input_dim, x.cols());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(x.rows(), static_cast<Eigen::Index>(stump.registry.size()));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        p(i, x(i, stump.feature) <= stump.threshold ? stump.left : stump.right) = 1.0;
    return p;
}

std::vector<Label> predict_labels(const BaseModel& model, const Eigen::MatrixXd& x) {
    check_dim(input_dim(model), x.cols());
    std::vector<Label> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        out[static_cast<std::size_t>(i)] = predict_label(model, x.row(i).transpose());
    return out;
}

Eigen::Index input_dim(const BaseModel& model) {
    return std::visit([](const auto& m) { return m.dim(); }, model);
}

const ClassRegistry& registry_of(const BaseModel& model) {
    return std::visit([](const auto& m) -> const ClassRegistry& { return m.registry; }, model);
}

}  // namespace ensemblekit
