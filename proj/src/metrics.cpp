#include "ensemblekit/metrics.hpp"

#include "ensemblekit/errors.hpp"

namespace ensemblekit {

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const Label> y_true, std::span<const Label> y_pred,
                                 const ClassRegistry& registry) {
    if (y_true.size() != y_pred.size())
        throw DataError("confusion_matrix: " + std::to_string(y_true.size()) + " true labels vs " +
                        std::to_string(y_pred.size()) + " predictions");
    if (y_true.empty()) throw DataError("confusion_matrix: no samples");
    const auto k = static_cast<Eigen::Index>(registry.size());
    CountMatrix counts = CountMatrix::Zero(k, k);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const Label t = y_true[i];
        const Label p = y_pred[i];
        if (t < 0 || t >= k || p < 0 || p >= k)
            throw DataError("confusion_matrix: class index out of range at sample " + std::to_string(i));
        ++counts(t, p);
    }
    return {std::move(counts), registry};
}

ConfusionMatrix make_confusion_matrix(CountMatrix counts, ClassRegistry registry) {
    if (counts.rows() != counts.cols() || static_cast<std::size_t>(counts.rows()) != registry.size())
        throw DataError("confusion matrix must be K x K with K = number of classes");
    if ((counts.array() < 0).any()) throw DataError("confusion matrix counts must be nonnegative");
    return {std::move(counts), std::move(registry)};
}

PrfScores per_class_prf(const ConfusionMatrix& cm, Label c) {
    const auto tp = static_cast<double>(cm.counts(c, c));
    const auto predicted = static_cast<double>(cm.counts.col(c).sum());
    const auto actual = static_cast<double>(cm.counts.row(c).sum());
    PrfScores s;
    s.precision = ratio(tp, predicted);
    s.recall = ratio(tp, actual);
    s.f1 = ratio(2.0 * s.precision * s.recall, s.precision + s.recall);
    return s;
}

double accuracy(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total <= 0) throw DataError("accuracy: empty confusion matrix");
    return static_cast<double>(cm.counts.trace()) / static_cast<double>(total);
}

ClassificationReport classification_report(const ConfusionMatrix& cm) {
    ClassificationReport report;
    report.total = cm.total();
    report.accuracy = report.total > 0 ? accuracy(cm) : 0.0;
    const auto k = static_cast<Label>(cm.num_classes());
    for (Label c = 0; c < k; ++c) {
        ClassMetrics m{cm.registry.name(c), per_class_prf(cm, c), cm.counts.row(c).sum()};
        const double n = static_cast<double>(k);
        report.macro_avg.precision += m.scores.precision / n;
        report.macro_avg.recall += m.scores.recall / n;
        report.macro_avg.f1 += m.scores.f1 / n;
        if (report.total > 0) {
            const double share = static_cast<double>(m.support) / static_cast<double>(report.total);
            report.weighted_avg.precision += share * m.scores.precision;
            report.weighted_avg.recall += share * m.scores.recall;
            report.weighted_avg.f1 += share * m.scores.f1;
        }
        report.per_class.push_back(std::move(m));
    }
    return report;
}

}  // namespace ensemblekit
