#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lifmap/network.hpp"

namespace lifmap::cli {

struct FixturePaths {
    std::string spec_path;
    std::string weights_path;
    std::string dataset_dir;
};

/// Fabricates a synthetic fixture under out_dir: an ANN spec JSON, a weight
/// manifest plus blob, and a dataset directory of flat f32 tensors with a
/// labels.csv. Kinds: "mlp" (64 -> hidden -> 10), "convnet" (8x8 single
/// channel, 4@3x3 conv, 2x2 max-pool, dense 10), "blobs" (two-class 16-dim
/// blobs through a 16 -> hidden -> 2 net).
FixturePaths generate_fixture(const std::string& kind, const std::string& out_dir,
                              std::uint64_t seed, std::size_t n_samples,
                              std::size_t hidden);

struct Dataset {
    std::vector<std::vector<double>> samples;
    std::vector<std::size_t> labels;
    std::vector<std::string> names;
};

/// Reads a dataset directory written by generate_fixture: labels.csv drives
/// the sample order; each sample file is little-endian f32, row-major.
Dataset read_dataset(const std::string& dir, std::size_t expected_size,
                     std::size_t limit = 0);

/// Reads one flat f32 tensor file.
std::vector<double> read_sample(const std::string& path, std::size_t expected_size);

}  // namespace lifmap::cli
