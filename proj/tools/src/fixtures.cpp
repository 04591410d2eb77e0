#include "fixtures.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lifmap/errors.hpp"

namespace fs = std::filesystem;

namespace lifmap::cli {

namespace {

Tensor random_tensor(std::mt19937_64& rng, std::string name, std::string kind,
                     std::vector<std::size_t> shape, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Tensor t;
    t.name = std::move(name);
    t.kind = std::move(kind);
    t.shape = std::move(shape);
    std::size_t n = 1;
    for (std::size_t d : t.shape) {
        n *= d;
    }
    t.data.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.data.push_back(static_cast<float>(u(rng)));
    }
    return t;
}

LayerConfig dense_layer(std::string name, std::size_t units)
{
    LayerConfig layer;
    layer.kind = LayerKind::Dense;
    layer.name = std::move(name);
    layer.units = units;
    return layer;
}

void write_sample(const fs::path& path, const std::vector<double>& values)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw io_error("cannot open for writing: " + path.string());
    }
    for (double v : values) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        const char bytes[4] = {static_cast<char>(bits & 0xff),
                               static_cast<char>((bits >> 8) & 0xff),
                               static_cast<char>((bits >> 16) & 0xff),
                               static_cast<char>((bits >> 24) & 0xff)};
        out.write(bytes, 4);
    }
}

std::string sample_name(std::size_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "sample_%05zu.bin", index);
    return buf;
}

struct FixtureNet {
    NetworkSpec ann;
    WeightsBundle weights;
    std::size_t input_size = 0;
};

FixtureNet make_mlp(std::mt19937_64& rng, std::size_t hidden)
{
    FixtureNet net;
    net.input_size = 64;
    net.ann.input_shape = {1, 1, 64};
    net.ann.layers = {dense_layer("fc1", hidden), dense_layer("fc2", 10)};
    net.weights.tensors = {
        random_tensor(rng, "fc1", "dense", {hidden, 64}, -0.10, 0.15),
        random_tensor(rng, "fc2", "dense", {10, hidden}, -0.10, 0.15),
    };
    return net;
}

FixtureNet make_convnet(std::mt19937_64& rng)
{
    FixtureNet net;
    net.input_size = 64;
    net.ann.input_shape = {8, 8, 1};

    LayerConfig conv;
    conv.kind = LayerKind::Conv;
    conv.name = "conv1";
    conv.filters = 4;
    conv.kernel_h = 3;
    conv.kernel_w = 3;
    conv.stride = 1;
    conv.padding = 0;

    LayerConfig pool;
    pool.kind = LayerKind::MaxPool;
    pool.name = "pool1";
    pool.window_h = 2;
    pool.window_w = 2;
    pool.stride = 2;

    LayerConfig flat;
    flat.kind = LayerKind::Flatten;
    flat.name = "flatten";

    net.ann.layers = {conv, pool, flat, dense_layer("fc1", 10)};
    net.weights.tensors = {
        random_tensor(rng, "conv1", "conv", {3, 3, 1, 4}, -0.15, 0.25),
        random_tensor(rng, "fc1", "dense", {10, 3 * 3 * 4}, -0.10, 0.15),
    };
    return net;
}

FixtureNet make_blobs_net(std::mt19937_64& rng, std::size_t hidden)
{
    FixtureNet net;
    net.input_size = 16;
    net.ann.input_shape = {1, 1, 16};
    net.ann.layers = {dense_layer("fc1", hidden), dense_layer("fc2", 2)};
    net.weights.tensors = {
        random_tensor(rng, "fc1", "dense", {hidden, 16}, -0.10, 0.20),
        random_tensor(rng, "fc2", "dense", {2, hidden}, -0.15, 0.30),
    };
    return net;
}

}  // namespace

FixturePaths generate_fixture(const std::string& kind, const std::string& out_dir,
                              std::uint64_t seed, std::size_t n_samples,
                              std::size_t hidden)
{
    std::mt19937_64 rng(seed);
    FixtureNet net;
    if (kind == "mlp") {
        net = make_mlp(rng, hidden == 0 ? 32 : hidden);
    } else if (kind == "convnet") {
        net = make_convnet(rng);
    } else if (kind == "blobs") {
        net = make_blobs_net(rng, hidden == 0 ? 8 : hidden);
    } else {
        throw domain_error("gen-fixture: unknown kind '" + kind + "'");
    }

    const fs::path root(out_dir);
    fs::create_directories(root);
    const fs::path dataset = root / (kind + "_dataset");
    fs::create_directories(dataset);

    FixturePaths paths;
    paths.spec_path = (root / (kind + "_ann.json")).string();
    paths.weights_path = (root / (kind + "_weights.json")).string();
    paths.dataset_dir = dataset.string();

    write_network_spec(paths.spec_path, net.ann);
    save_weights(paths.weights_path, net.weights);

    // Labels: generator class for blobs, reference-model argmax otherwise.
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.12);
    SimConfig cfg;
    cfg.range_scale = 10.0;

    std::ostringstream labels;
    labels << "sample,label\n";
    for (std::size_t i = 0; i < n_samples; ++i) {
        std::vector<double> x(net.input_size);
        std::size_t label = 0;
        if (kind == "blobs") {
            label = i % 2;
            for (std::size_t d = 0; d < x.size(); ++d) {
                const bool hot = (d < x.size() / 2) == (label == 0);
                x[d] = std::clamp((hot ? 0.65 : 0.35) + noise(rng), 0.0, 1.0);
            }
        } else {
            for (double& v : x) {
                v = u01(rng);
            }
            label = ann_forward(net.ann, net.weights, x, cfg).label;
        }
        write_sample(dataset / sample_name(i), x);
        labels << sample_name(i) << "," << label << "\n";
    }
    std::ofstream out(dataset / "labels.csv");
    if (!out) {
        throw io_error("cannot open for writing: " + (dataset / "labels.csv").string());
    }
    out << labels.str();
    return paths;
}

std::vector<double> read_sample(const std::string& path, std::size_t expected_size)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open: " + path);
    }
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    if (bytes != expected_size * 4) {
        throw shape_error("sample '" + path + "' holds " + std::to_string(bytes / 4) +
                          " values, expected " + std::to_string(expected_size));
    }
    std::vector<double> values(expected_size);
    for (std::size_t i = 0; i < expected_size; ++i) {
        unsigned char raw[4];
        in.read(reinterpret_cast<char*>(raw), 4);
        const std::uint32_t bits = static_cast<std::uint32_t>(raw[0]) |
                                   static_cast<std::uint32_t>(raw[1]) << 8 |
                                   static_cast<std::uint32_t>(raw[2]) << 16 |
                                   static_cast<std::uint32_t>(raw[3]) << 24;
        values[i] = static_cast<double>(std::bit_cast<float>(bits));
    }
    if (!in) {
        throw io_error("read failed: " + path);
    }
    return values;
}

Dataset read_dataset(const std::string& dir, std::size_t expected_size, std::size_t limit)
{
    const fs::path labels_path = fs::path(dir) / "labels.csv";
    std::ifstream in(labels_path);
    if (!in) {
        throw io_error("cannot open: " + labels_path.string());
    }
    Dataset ds;
    std::string line;
    if (!std::getline(in, line) || line != "sample,label") {
        throw io_error("labels.csv: expected header 'sample,label'");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw io_error("labels.csv: malformed row '" + line + "'");
        }
        const std::string name = line.substr(0, comma);
        ds.names.push_back(name);
        ds.labels.push_back(static_cast<std::size_t>(std::stoul(line.substr(comma + 1))));
        ds.samples.push_back(read_sample((fs::path(dir) / name).string(), expected_size));
        if (limit != 0 && ds.samples.size() >= limit) {
            break;
        }
    }
    if (ds.samples.empty()) {
        throw io_error("dataset '" + dir + "' holds no samples");
    }
    return ds;
}

}  // namespace lifmap::cli
