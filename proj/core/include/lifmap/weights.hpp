#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lifmap {

/// One named tensor from a weight bundle. Values are the little-endian
/// IEEE-754 32-bit numbers of the sidecar blob, row-major.
struct Tensor {
    std::string name;
    std::string kind;  // "dense" or "conv"
    std::vector<std::size_t> shape;
    std::vector<float> data;

    std::size_t size() const;
};

struct WeightsBundle {
    std::vector<Tensor> tensors;  // manifest order

    bool contains(const std::string& name) const;
    /// Throws manifest_error when the tensor is absent.
    const Tensor& at(const std::string& name) const;
};

/// Loads a manifest of the form
///   {"format_version":1, "layers":[{"name","kind","shape":[..],
///    "offset","length"}..], "dtype":"f32le", "checksum":"crc32c:<hex>"}
/// plus its sidecar blob (same path with the extension replaced by ".bin").
/// Offsets and lengths count elements, not bytes. Distinct errors:
/// manifest_error (structure, missing tensor data), shape_error
/// (shape/length disagreement), checksum_error (blob corruption).
WeightsBundle load_weights(const std::string& manifest_path);

/// Writes manifest plus sidecar blob in the format load_weights reads.
void save_weights(const std::string& manifest_path, const WeightsBundle& bundle);

/// CRC-32C (Castagnoli) of a byte span.
std::uint32_t crc32c(std::span<const std::uint8_t> bytes);

}  // namespace lifmap
