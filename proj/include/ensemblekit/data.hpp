#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ensemblekit {

/// Class index in [0, K).
using Label = int;

/// Ordered set of class names; position is the class index.
class ClassRegistry {
public:
    ClassRegistry() = default;
    explicit ClassRegistry(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(Label index) const;
    std::optional<Label> find(const std::string& name) const;
    const std::vector<std::string>& names() const noexcept { return names_; }

    friend bool operator==(const ClassRegistry&, const ClassRegistry&) = default;

private:
    std::vector<std::string> names_;
};

/// Samples stored row-wise: features().row(i) is sample i with label labels()[i].
class Dataset {
public:
    Dataset() = default;
    Dataset(Eigen::MatrixXd features, std::vector<Label> labels, ClassRegistry registry);

    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    Eigen::Index dim() const noexcept { return features_.cols(); }
    std::size_t num_classes() const noexcept { return registry_.size(); }

    const Eigen::MatrixXd& features() const noexcept { return features_; }
    const std::vector<Label>& labels() const noexcept { return labels_; }
    const ClassRegistry& registry() const noexcept { return registry_; }

    /// Rows in the given order; indices may repeat.
    Dataset subset(std::span<const std::size_t> indices) const;

    /// Per-class sample counts, indexed by class.
    std::vector<std::size_t> class_counts() const;

private:
    Eigen::MatrixXd features_;
    std::vector<Label> labels_;
    ClassRegistry registry_;
};

struct SplitSpec {
    double train_fraction = 0.70;
    double val_fraction = 0.15;
    double test_fraction = 0.15;
    std::uint64_t seed = 0;

    /// Throws ConfigError unless every fraction is in (0,1) and they sum to 1 within 1e-9.
    void validate() const;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

struct DatasetSplit {
    Dataset train;
    Dataset val;
    Dataset test;
};

/// Reads a header + rows CSV whose final column is `label`. Classes are
/// registered in first-appearance order.
Dataset load_feature_csv(const std::filesystem::path& path);

/// Feature matrix from a CSV without labels. A trailing `label` column, if
/// the header names one, is ignored.
Eigen::MatrixXd load_feature_matrix_csv(const std::filesystem::path& path);

/// Writes header `f0,...,f{d-1},label`; reals use the shortest round-trip form.
void write_feature_csv(const Dataset& ds, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_real(double value);

std::vector<std::vector<std::size_t>> indices_by_class(std::span<const Label> labels,
                                                       std::size_t num_classes);

/// Exactly `n_per_class` indices per class, grouped by class. Surplus classes are
/// shuffled and truncated; deficit classes keep every sample and are topped up by
/// draws with replacement. Class c uses the stream derive_seed(seed, c).
std::vector<std::size_t> balance_indices(std::span<const Label> labels, std::size_t num_classes,
                                         std::size_t n_per_class, std::uint64_t seed);

/// Per-class shuffle (stream derive_seed(spec.seed, c)) then partition:
/// train = floor(n_c * f_train), val = floor(n_c * f_val), test = remainder.
SplitIndices stratified_split_indices(std::span<const Label> labels, std::size_t num_classes,
                                      const SplitSpec& spec);

/// n uniform draws with replacement from [0, n).
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed);

Dataset balance_classes(const Dataset& ds, std::size_t n_per_class, std::uint64_t seed);
DatasetSplit stratified_split(const Dataset& ds, const SplitSpec& spec);
Dataset bootstrap_sample(const Dataset& ds, std::uint64_t seed);

}  // namespace ensemblekit
