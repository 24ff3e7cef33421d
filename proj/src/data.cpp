#include "ensemblekit/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ensemblekit/errors.hpp"
#include "ensemblekit/rng.hpp"

namespace ensemblekit {

ClassRegistry::ClassRegistry(std::vector<std::string> names) : names_(std::move(names)) {
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw DataError("class names must be nonempty");
        if (!seen.insert(n).second) throw DataError("duplicate class name '" + n + "'");
    }
}

const std::string& ClassRegistry::name(Label index) const {
    if (index < 0 || static_cast<std::size_t>(index) >= names_.size())
        throw DataError("class index " + std::to_string(index) + " out of range");
    return names_[static_cast<std::size_t>(index)];
}

std::optional<Label> ClassRegistry::find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<Label>(i);
    return std::nullopt;
}

Dataset::Dataset(Eigen::MatrixXd features, std::vector<Label> labels, ClassRegistry registry)
    : features_(std::move(features)), labels_(std::move(labels)), registry_(std::move(registry)) {
    if (static_cast<std::size_t>(features_.rows()) != labels_.size())
        throw DataError("dataset has " + std::to_string(features_.rows()) + " feature rows but " +
                        std::to_string(labels_.size()) + " labels");
    if (!labels_.empty() && features_.cols() < 1)
        throw DataError("dataset feature dimensionality must be at least 1");
    for (Label y : labels_)
        if (y < 0 || static_cast<std::size_t>(y) >= registry_.size())
            throw DataError("label index " + std::to_string(y) + " not in class registry");
    if (!features_.allFinite()) throw DataError("dataset contains non-finite feature values");
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(indices.size()), features_.cols());
    std::vector<Label> y(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= labels_.size()) throw InvariantError("subset index out of range");
        x.row(static_cast<Eigen::Index>(i)) = features_.row(static_cast<Eigen::Index>(indices[i]));
        y[i] = labels_[indices[i]];
    }
    return Dataset(std::move(x), std::move(y), registry_);
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(registry_.size(), 0);
    for (Label y : labels_) ++counts[static_cast<std::size_t>(y)];
    return counts;
}

void SplitSpec::validate() const {
    for (double f : {train_fraction, val_fraction, test_fraction})
        if (!(f > 0.0 && f < 1.0))
            throw ConfigError("split fractions must lie in (0,1), got " + format_real(f));
    const double sum = train_fraction + val_fraction + test_fraction;
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("split fractions must sum to 1, got " + format_real(sum));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // rows[i] is file row i + 2
};

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    CsvTable table;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size())
            throw DataError(path.string() + ": row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " columns, header has " +
                            std::to_string(table.header.size()));
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) throw DataError(path.string() + ": empty file");
    return table;
}

double parse_cell(const std::string& cell, const std::filesystem::path& path, std::size_t row,
                  std::size_t col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first != last && *first == ' ') ++first;
    while (last != first && *(last - 1) == ' ') --last;
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value))
        throw DataError(path.string() + ": row " + std::to_string(row) + ", column " +
                        std::to_string(col) + ": '" + cell + "' is not a finite number");
    return value;
}

}  // namespace

Dataset load_feature_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    if (table.header.size() < 2 || table.header.back() != "label")
        throw DataError(path.string() + ": header must name at least one feature and end with 'label'");
    if (table.rows.empty()) throw DataError(path.string() + ": no data rows");

    const auto d = static_cast<Eigen::Index>(table.header.size() - 1);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(table.rows.size()), d);
    std::vector<Label> y;
    std::vector<std::string> names;
    std::unordered_map<std::string, Label> lookup;
    y.reserve(table.rows.size());

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& cells = table.rows[r];
        for (Eigen::Index c = 0; c < d; ++c)
            x(static_cast<Eigen::Index>(r), c) =
                parse_cell(cells[static_cast<std::size_t>(c)], path, r + 2, static_cast<std::size_t>(c) + 1);
        const std::string& name = cells.back();
        if (name.empty())
            throw DataError(path.string() + ": row " + std::to_string(r + 2) + ": empty label");
        auto [it, inserted] = lookup.try_emplace(name, static_cast<Label>(names.size()));
        if (inserted) names.push_back(name);
        y.push_back(it->second);
    }
    return Dataset(std::move(x), std::move(y), ClassRegistry(std::move(names)));
}

Eigen::MatrixXd load_feature_matrix_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    std::size_t d = table.header.size();
    if (d > 0 && table.header.back() == "label") --d;
    if (d == 0) throw DataError(path.string() + ": no feature columns");
    Eigen::MatrixXd x(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        for (std::size_t c = 0; c < d; ++c)
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_cell(table.rows[r][c], path, r + 2, c + 1);
    return x;
}

std::string format_real(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw InvariantError("format_real: conversion failed");
    return std::string(buf, ptr);
}

void write_feature_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    for (Eigen::Index c = 0; c < ds.dim(); ++c) out << 'f' << c << ',';
    out << "label\n";
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (Eigen::Index c = 0; c < ds.dim(); ++c)
            out << format_real(ds.features()(static_cast<Eigen::Index>(r), c)) << ',';
        out << ds.registry().name(ds.labels()[r]) << '\n';
    }
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

std::vector<std::vector<std::size_t>> indices_by_class(std::span<const Label> labels,
                                                       std::size_t num_classes) {
    std::vector<std::vector<std::size_t>> groups(num_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto y = static_cast<std::size_t>(labels[i]);
        if (labels[i] < 0 || y >= num_classes) throw InvariantError("label out of range");
        groups[y].push_back(i);
    }
    return groups;
}

std::vector<std::size_t> balance_indices(std::span<const Label> labels, std::size_t num_classes,
                                         std::size_t n_per_class, std::uint64_t seed) {
    if (n_per_class < 1) throw ConfigError("balance: n_per_class must be at least 1");
    auto groups = indices_by_class(labels, num_classes);
    std::vector<std::size_t> out;
    out.reserve(n_per_class * num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        auto& members = groups[c];
        if (members.empty())
            throw DataError("balance: class " + std::to_string(c) + " has no samples");
        SplitMix64 rng(derive_seed(seed, c));
        if (members.size() >= n_per_class) {
            shuffle(std::span(members), rng);
            out.insert(out.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_per_class));
        } else {
            out.insert(out.end(), members.begin(), members.end());
            for (std::size_t k = members.size(); k < n_per_class; ++k)
                out.push_back(members[rng.uniform_index(members.size())]);
        }
    }
    return out;
}

SplitIndices stratified_split_indices(std::span<const Label> labels, std::size_t num_classes,
                                      const SplitSpec& spec) {
    spec.validate();
    auto groups = indices_by_class(labels, num_classes);
    SplitIndices out;
    // Guards floor() against products like 2000 * 0.7 landing a hair below an integer.
    constexpr double slack = 1e-9;
    for (std::size_t c = 0; c < num_classes; ++c) {
        auto& members = groups[c];
        if (members.size() < 3)
            throw DataError("split: class " + std::to_string(c) + " has " +
                            std::to_string(members.size()) + " samples, need at least 3");
        SplitMix64 rng(derive_seed(spec.seed, c));
        shuffle(std::span(members), rng);
        const double n = static_cast<double>(members.size());
        const auto n_train = static_cast<std::size_t>(std::floor(n * spec.train_fraction + slack));
        const auto n_val = static_cast<std::size_t>(std::floor(n * spec.val_fraction + slack));
        if (n_train == 0 || n_val == 0 || n_train + n_val >= members.size())
            throw DataError("split: class " + std::to_string(c) + " (" + std::to_string(members.size()) +
                            " samples) leaves a split empty");
        auto first = members.begin();
        out.train.insert(out.train.end(), first, first + static_cast<std::ptrdiff_t>(n_train));
        out.val.insert(out.val.end(), first + static_cast<std::ptrdiff_t>(n_train),
                       first + static_cast<std::ptrdiff_t>(n_train + n_val));
        out.test.insert(out.test.end(), first + static_cast<std::ptrdiff_t>(n_train + n_val), members.end());
    }
    return out;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DataError("bootstrap: empty dataset");
    SplitMix64 rng(seed);
    std::vector<std::size_t> out(n);
    for (auto& i : out) i = static_cast<std::size_t>(rng.uniform_index(n));
    return out;
}

Dataset balance_classes(const Dataset& ds, std::size_t n_per_class, std::uint64_t seed) {
    const auto idx = balance_indices(ds.labels(), ds.num_classes(), n_per_class, seed);
    return ds.subset(idx);
}

DatasetSplit stratified_split(const Dataset& ds, const SplitSpec& spec) {
    const auto idx = stratified_split_indices(ds.labels(), ds.num_classes(), spec);
    return {ds.subset(idx.train), ds.subset(idx.val), ds.subset(idx.test)};
}

Dataset bootstrap_sample(const Dataset& ds, std::uint64_t seed) {
    return ds.subset(bootstrap_indices(ds.size(), seed));
}

}  // namespace ensemblekit
