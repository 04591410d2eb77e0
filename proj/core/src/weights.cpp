#include "lifmap/weights.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "lifmap/errors.hpp"

namespace lifmap {

namespace {

std::array<std::uint32_t, 256> make_crc32c_table()
{
    // Castagnoli polynomial, reflected.
    constexpr std::uint32_t poly = 0x82f63b78u;
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t crc = i;
        for (int bit = 0; bit < 8; ++bit) {
            crc = (crc >> 1) ^ (crc & 1u ? poly : 0u);
        }
        table[i] = crc;
    }
    return table;
}

std::string blob_path_for(const std::string& manifest_path)
{
    const std::size_t dot = manifest_path.find_last_of('.');
    const std::size_t slash = manifest_path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return manifest_path + ".bin";
    }
    return manifest_path.substr(0, dot) + ".bin";
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open: " + path);
    }
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
        throw io_error("read failed: " + path);
    }
    return bytes;
}

std::string crc_hex(std::uint32_t crc)
{
    static const char* digits = "0123456789abcdef";
    std::string out(8, '0');
    for (int i = 7; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[crc & 0xfu];
        crc >>= 4;
    }
    return out;
}

float f32_from_le(const std::uint8_t* p)
{
    std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                         static_cast<std::uint32_t>(p[1]) << 8 |
                         static_cast<std::uint32_t>(p[2]) << 16 |
                         static_cast<std::uint32_t>(p[3]) << 24;
    return std::bit_cast<float>(bits);
}

void f32_to_le(float v, std::uint8_t* p)
{
    const auto bits = std::bit_cast<std::uint32_t>(v);
    p[0] = static_cast<std::uint8_t>(bits & 0xffu);
    p[1] = static_cast<std::uint8_t>((bits >> 8) & 0xffu);
    p[2] = static_cast<std::uint8_t>((bits >> 16) & 0xffu);
    p[3] = static_cast<std::uint8_t>((bits >> 24) & 0xffu);
}

}  // namespace

std::uint32_t crc32c(std::span<const std::uint8_t> bytes)
{
    static const auto table = make_crc32c_table();
    std::uint32_t crc = 0xffffffffu;
    for (std::uint8_t b : bytes) {
        crc = (crc >> 8) ^ table[(crc ^ b) & 0xffu];
    }
    return crc ^ 0xffffffffu;
}

std::size_t Tensor::size() const
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
}

bool WeightsBundle::contains(const std::string& name) const
{
    for (const Tensor& t : tensors) {
        if (t.name == name) {
            return true;
        }
    }
    return false;
}

const Tensor& WeightsBundle::at(const std::string& name) const
{
    for (const Tensor& t : tensors) {
        if (t.name == name) {
            return t;
        }
    }
    throw manifest_error("weights bundle: missing tensor '" + name + "'");
}

WeightsBundle load_weights(const std::string& manifest_path)
{
    std::ifstream in(manifest_path);
    if (!in) {
        throw io_error("cannot open: " + manifest_path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw manifest_error("manifest parse error: " + std::string(e.what()));
    }

    if (!doc.is_object() || doc.value("format_version", 0) != 1) {
        throw manifest_error("manifest: unsupported or missing format_version");
    }
    if (doc.value("dtype", "") != "f32le") {
        throw manifest_error("manifest: dtype must be f32le");
    }
    if (!doc.contains("layers") || !doc["layers"].is_array()) {
        throw manifest_error("manifest: missing layers array");
    }
    const std::string checksum = doc.value("checksum", "");
    if (checksum.rfind("crc32c:", 0) != 0) {
        throw manifest_error("manifest: checksum must be of the form crc32c:<hex>");
    }

    const std::vector<std::uint8_t> blob = read_file_bytes(blob_path_for(manifest_path));
    if (blob.size() % 4 != 0) {
        throw shape_error("weights blob: byte count is not a multiple of 4");
    }
    const std::string actual = "crc32c:" + crc_hex(crc32c(blob));
    if (actual != checksum) {
        throw checksum_error("weights blob checksum mismatch: manifest declares " +
                             checksum + ", blob has " + actual);
    }
    const std::size_t blob_elems = blob.size() / 4;

    WeightsBundle bundle;
    for (const auto& entry : doc["layers"]) {
        if (!entry.is_object() || !entry.contains("name") || !entry.contains("shape") ||
            !entry.contains("offset") || !entry.contains("length")) {
            throw manifest_error("manifest: layer entry missing required fields");
        }
        Tensor t;
        t.name = entry["name"].get<std::string>();
        t.kind = entry.value("kind", "");
        for (const auto& dim : entry["shape"]) {
            t.shape.push_back(dim.get<std::size_t>());
        }
        const auto offset = entry["offset"].get<std::size_t>();
        const auto length = entry["length"].get<std::size_t>();
        if (length != t.size()) {
            throw shape_error("manifest: tensor '" + t.name +
                              "' length does not match its shape");
        }
        if (offset + length > blob_elems) {
            throw shape_error("manifest: tensor '" + t.name +
                              "' extends past the end of the blob");
        }
        t.data.resize(length);
        for (std::size_t i = 0; i < length; ++i) {
            t.data[i] = f32_from_le(blob.data() + 4 * (offset + i));
        }
        bundle.tensors.push_back(std::move(t));
    }
    return bundle;
}

void save_weights(const std::string& manifest_path, const WeightsBundle& bundle)
{
    std::vector<std::uint8_t> blob;
    nlohmann::json layers = nlohmann::json::array();
    std::size_t offset = 0;
    for (const Tensor& t : bundle.tensors) {
        if (t.data.size() != t.size()) {
            throw shape_error("save_weights: tensor '" + t.name +
                              "' data does not match its shape");
        }
        nlohmann::json entry;
        entry["name"] = t.name;
        entry["kind"] = t.kind;
        entry["shape"] = t.shape;
        entry["offset"] = offset;
        entry["length"] = t.data.size();
        layers.push_back(std::move(entry));

        blob.resize(blob.size() + 4 * t.data.size());
        for (std::size_t i = 0; i < t.data.size(); ++i) {
            f32_to_le(t.data[i], blob.data() + 4 * (offset + i));
        }
        offset += t.data.size();
    }

    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["layers"] = std::move(layers);
    doc["dtype"] = "f32le";
    doc["checksum"] = "crc32c:" + crc_hex(crc32c(blob));

    std::ofstream manifest(manifest_path);
    if (!manifest) {
        throw io_error("cannot open for writing: " + manifest_path);
    }
    manifest << doc.dump(2) << "\n";
    if (!manifest) {
        throw io_error("write failed: " + manifest_path);
    }

    const std::string blob_path = blob_path_for(manifest_path);
    std::ofstream out(blob_path, std::ios::binary);
    if (!out) {
        throw io_error("cannot open for writing: " + blob_path);
    }
    if (!blob.empty()) {
        out.write(reinterpret_cast<const char*>(blob.data()),
                  static_cast<std::streamsize>(blob.size()));
    }
    if (!out) {
        throw io_error("write failed: " + blob_path);
    }
}

}  // namespace lifmap
