#include "ensemblekit/synthetic.hpp"

#include "ensemblekit/rng.hpp"

namespace ensemblekit {

Dataset make_binary_gaussians(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 1);
    std::vector<Label> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<Label>(i % 2);
        x(static_cast<Eigen::Index>(i), 0) = (y[i] == 0 ? -1.0 : 1.0) + rng.normal();
    }
    return Dataset(std::move(x), std::move(y), ClassRegistry({"neg", "pos"}));
}

Dataset make_blobs(std::size_t per_class, std::uint64_t seed) {
    // Equilateral triangle with side 5.
    static constexpr double centres[3][2] = {{0.0, 0.0}, {5.0, 0.0}, {2.5, 4.330127018922193}};
    SplitMix64 rng(seed);
    const std::size_t n = per_class * 3;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 2);
    std::vector<Label> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<Label>(i % 3);
        y[i] = c;
        x(static_cast<Eigen::Index>(i), 0) = centres[c][0] + rng.normal();
        x(static_cast<Eigen::Index>(i), 1) = centres[c][1] + rng.normal();
    }
    return Dataset(std::move(x), std::move(y), ClassRegistry({"blob0", "blob1", "blob2"}));
}

BlobsBenchmark make_blobs_benchmark(std::uint64_t seed) {
    return {make_blobs(200, derive_seed(seed, 0)), make_blobs(100, derive_seed(seed, 1))};
}

}  // namespace ensemblekit
