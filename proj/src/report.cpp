#include "ensemblekit/report.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>

#include "ensemblekit/data.hpp"

namespace ensemblekit {

namespace {

std::string printf_string(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    const int n = std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return std::string(buf, static_cast<std::size_t>(std::clamp(n, 0, static_cast<int>(sizeof(buf) - 1))));
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

nlohmann::ordered_json prf_json(const PrfScores& s) {
    nlohmann::ordered_json j;
    j["precision"] = s.precision;
    j["recall"] = s.recall;
    j["f1"] = s.f1;
    return j;
}

}  // namespace

std::string format_report_text(const ClassificationReport& report) {
    int width = 12;
    for (const auto& m : report.per_class) width = std::max(width, static_cast<int>(m.label.size()));
    const auto total = static_cast<long long>(report.total);

    std::string out = printf_string("%*s %10s %10s %10s %10s\n\n", width, "", "precision", "recall", "f1-score", "support");
    for (const auto& m : report.per_class)
        out += printf_string("%*s %10.4f %10.4f %10.4f %10lld\n", width, m.label.c_str(), m.scores.precision,
                             m.scores.recall, m.scores.f1, static_cast<long long>(m.support));
    out += "\n";
    out += printf_string("%*s %10s %10s %10.4f %10lld\n", width, "accuracy", "", "", report.accuracy, total);
    out += printf_string("%*s %10.4f %10.4f %10.4f %10lld\n", width, "macro avg", report.macro_avg.precision,
                         report.macro_avg.recall, report.macro_avg.f1, total);
    out += printf_string("%*s %10.4f %10.4f %10.4f %10lld\n", width, "weighted avg", report.weighted_avg.precision,
                         report.weighted_avg.recall, report.weighted_avg.f1, total);
    return out;
}

nlohmann::ordered_json report_to_json(const ClassificationReport& report, const ConfusionMatrix& cm) {
    nlohmann::ordered_json j;
    j["accuracy"] = report.accuracy;
    j["total"] = report.total;
    j["classes"] = nlohmann::ordered_json::array();
    for (const auto& m : report.per_class) {
        nlohmann::ordered_json c;
        c["label"] = m.label;
        c["precision"] = m.scores.precision;
        c["recall"] = m.scores.recall;
        c["f1"] = m.scores.f1;
        c["support"] = m.support;
        j["classes"].push_back(std::move(c));
    }
    j["macro_avg"] = prf_json(report.macro_avg);
    j["weighted_avg"] = prf_json(report.weighted_avg);
    nlohmann::ordered_json matrix;
    matrix["labels"] = cm.registry.names();
    matrix["counts"] = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < cm.counts.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < cm.counts.cols(); ++c) row.push_back(cm.counts(r, c));
        matrix["counts"].push_back(std::move(row));
    }
    j["confusion_matrix"] = std::move(matrix);
    return j;
}

std::string confusion_matrix_csv(const ConfusionMatrix& cm) {
    std::string out = "true\\predicted";
    for (const auto& name : cm.registry.names()) out += "," + name;
    out += "\n";
    for (Eigen::Index r = 0; r < cm.counts.rows(); ++r) {
        out += cm.registry.names()[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < cm.counts.cols(); ++c) out += "," + std::to_string(cm.counts(r, c));
        out += "\n";
    }
    return out;
}

std::string confusion_matrix_svg(const ConfusionMatrix& cm, const std::string& title) {
    const int k = static_cast<int>(cm.num_classes());
    constexpr int cell = 90;
    constexpr int left = 150;
    constexpr int top = 70;
    const int width = left + k * cell + 30;
    const int height = top + k * cell + 70;

    std::string out = printf_string(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n", width, height,
        width, height);
    out += printf_string("<rect x=\"0\" y=\"0\" width=\"%d\" height=\"%d\" fill=\"#ffffff\"/>\n", width, height);
    out += printf_string("<text x=\"%d\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">%s</text>\n",
                         width / 2, xml_escape(title).c_str());
    for (int r = 0; r < k; ++r) {
        const auto row_total = static_cast<double>(cm.counts.row(r).sum());
        for (int c = 0; c < k; ++c) {
            const auto count = cm.counts(r, c);
            const double share = row_total > 0.0 ? static_cast<double>(count) / row_total : 0.0;
            const int red = static_cast<int>(247.0 - share * (247.0 - 8.0));
            const int green = static_cast<int>(251.0 - share * (251.0 - 48.0));
            const int blue = static_cast<int>(255.0 - share * (255.0 - 107.0));
            const int x = left + c * cell;
            const int y = top + r * cell;
            out += printf_string(
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"#%02x%02x%02x\" stroke=\"#333333\"/>\n", x, y,
                cell, cell, red, green, blue);
            out += printf_string(
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\" fill=\"%s\">%lld</text>\n",
                x + cell / 2, y + cell / 2 + 6, share > 0.5 ? "#ffffff" : "#000000", static_cast<long long>(count));
        }
        out += printf_string(
            "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">%s</text>\n", left - 8,
            top + r * cell + cell / 2 + 4, xml_escape(cm.registry.names()[static_cast<std::size_t>(r)]).c_str());
    }
    for (int c = 0; c < k; ++c)
        out += printf_string(
            "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">%s</text>\n",
            left + c * cell + cell / 2, top + k * cell + 20,
            xml_escape(cm.registry.names()[static_cast<std::size_t>(c)]).c_str());
    out += printf_string(
        "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">Predicted label</text>\n",
        left + k * cell / 2, top + k * cell + 48);
    out += printf_string(
        "<text x=\"18\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 %d)\">True label</text>\n",
        top + k * cell / 2, top + k * cell / 2);
    out += "</svg>\n";
    return out;
}

std::string comparison_text(const std::vector<ComparisonRow>& rows) {
    std::string out = printf_string("%-10s %14s %10s %12s\n", "method", "test_accuracy", "macro_f1", "wall_time_s");
    for (const auto& r : rows)
        out += printf_string("%-10s %14.4f %10.4f %12.3f\n", r.method.c_str(), r.accuracy, r.macro_f1, r.wall_time_s);
    return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::string out = "method,test_accuracy,macro_f1,wall_time_s\n";
    for (const auto& r : rows)
        out += r.method + "," + format_real(r.accuracy) + "," + format_real(r.macro_f1) + "," +
               printf_string("%.3f", r.wall_time_s) + "\n";
    return out;
}

std::string comparison_svg(const std::vector<ComparisonRow>& rows, const std::string& title) {
    constexpr int bar = 90;
    constexpr int gap = 40;
    constexpr int left = 60;
    constexpr int top = 60;
    constexpr int plot_height = 300;
    const int n = static_cast<int>(rows.size());
    const int width = left + n * (bar + gap) + gap;
    const int height = top + plot_height + 60;
    static constexpr const char* palette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52"};

    std::string out = printf_string(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n", width, height,
        width, height);
    out += printf_string("<rect x=\"0\" y=\"0\" width=\"%d\" height=\"%d\" fill=\"#ffffff\"/>\n", width, height);
    out += printf_string("<text x=\"%d\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">%s</text>\n",
                         width / 2, xml_escape(title).c_str());
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = tick * 0.25;
        const double y = top + plot_height * (1.0 - v);
        out += printf_string("<line x1=\"%d\" y1=\"%.2f\" x2=\"%d\" y2=\"%.2f\" stroke=\"#dddddd\"/>\n", left, y, width - gap / 2, y);
        out += printf_string(
            "<text x=\"%d\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">%.2f</text>\n", left - 6,
            y + 4, v);
    }
    for (int i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        const double h = plot_height * std::clamp(r.accuracy, 0.0, 1.0);
        const int x = left + gap + i * (bar + gap);
        out += printf_string("<rect x=\"%d\" y=\"%.2f\" width=\"%d\" height=\"%.2f\" fill=\"%s\"/>\n", x, top + plot_height - h,
                             bar, h, palette[i % 4]);
        out += printf_string(
            "<text x=\"%d\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">%.4f</text>\n",
            x + bar / 2, top + plot_height - h - 6, r.accuracy);
        out += printf_string(
            "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n", x + bar / 2,
            top + plot_height + 22, xml_escape(r.method).c_str());
    }
    out += printf_string("<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"#000000\"/>\n", left, top + plot_height,
                         width - gap / 2, top + plot_height);
    out += "</svg>\n";
    return out;
}

}  // namespace ensemblekit
