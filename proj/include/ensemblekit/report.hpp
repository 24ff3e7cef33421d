#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ensemblekit/metrics.hpp"

namespace ensemblekit {

/// Aligned table with 4 decimals, in the familiar precision/recall/f1-score/support layout.
std::string format_report_text(const ClassificationReport& report);

/// Key order: accuracy, total, classes[], macro_avg, weighted_avg, confusion_matrix.
/// Reals keep full round-trip precision.
nlohmann::ordered_json report_to_json(const ClassificationReport& report, const ConfusionMatrix& cm);

/// Header `true\predicted,<class>...`, then one row per true class.
std::string confusion_matrix_csv(const ConfusionMatrix& cm);

/// Standalone SVG heatmap; cell shade follows the row-normalized count.
std::string confusion_matrix_svg(const ConfusionMatrix& cm, const std::string& title);

struct ComparisonRow {
    std::string method;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double wall_time_s = 0.0;
};

std::string comparison_text(const std::vector<ComparisonRow>& rows);
/// `method,test_accuracy,macro_f1,wall_time_s`; wall time is the last column.
std::string comparison_csv(const std::vector<ComparisonRow>& rows);
/// Bar chart of test accuracy per method. Timing is not drawn.
std::string comparison_svg(const std::vector<ComparisonRow>& rows, const std::string& title);

}  // namespace ensemblekit
