#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ensemblekit/data.hpp"

namespace ensemblekit {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// counts(t, p): samples of true class t predicted as p.
struct ConfusionMatrix {
    CountMatrix counts;
    ClassRegistry registry;

    std::size_t num_classes() const noexcept { return static_cast<std::size_t>(counts.rows()); }
    std::int64_t total() const { return counts.sum(); }
};

struct PrfScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct ClassMetrics {
    std::string label;
    PrfScores scores;
    std::int64_t support = 0;
};

struct ClassificationReport {
    std::vector<ClassMetrics> per_class;
    double accuracy = 0.0;
    PrfScores macro_avg;
    PrfScores weighted_avg;
    std::int64_t total = 0;
};

ConfusionMatrix confusion_matrix(std::span<const Label> y_true, std::span<const Label> y_pred,
                                 const ClassRegistry& registry);

/// Wraps an existing count matrix (rows = true, columns = predicted).
ConfusionMatrix make_confusion_matrix(CountMatrix counts, ClassRegistry registry);

/// One-vs-rest scores for class c. Any 0/0 ratio is reported as 0.
PrfScores per_class_prf(const ConfusionMatrix& cm, Label c);

/// trace / total; throws DataError for an empty matrix.
double accuracy(const ConfusionMatrix& cm);

ClassificationReport classification_report(const ConfusionMatrix& cm);

}  // namespace ensemblekit
