#pragma once

#include <cstdint>

#include "ensemblekit/data.hpp"

namespace ensemblekit {

/// Two overlapping 1-D Gaussians: class "neg" ~ N(-1, 1), class "pos" ~ N(+1, 1).
/// Sample i has class i % 2; values drawn from SplitMix64(seed) in order.
Dataset make_binary_gaussians(std::size_t n, std::uint64_t seed);

/// Three isotropic 2-D Gaussian blobs (sigma 1) centred at (0, 0), (5, 0) and (2.5, 5 sqrt(3) / 2),
/// classes "blob0".."blob2". Sample i has class i % 3.
Dataset make_blobs(std::size_t per_class, std::uint64_t seed);

struct BlobsBenchmark {
    Dataset train;  // 200 per class
    Dataset test;   // 100 per class
};

/// train = make_blobs(200, derive_seed(seed, 0)), test = make_blobs(100, derive_seed(seed, 1)).
BlobsBenchmark make_blobs_benchmark(std::uint64_t seed);

}  // namespace ensemblekit
