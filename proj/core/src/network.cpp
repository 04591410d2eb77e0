#include "lifmap/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lifmap/errors.hpp"
#include "lifmap/relu_map.hpp"

namespace lifmap {

namespace {

using ordered_json = nlohmann::ordered_json;

struct BoundLayer {
    LayerKind kind = LayerKind::Flatten;
    const LayerConfig* config = nullptr;
    DenseLayerSpec dense;
    ConvLayerSpec conv;
    PoolLayerSpec pool;
};

std::vector<double> tensor_as_doubles(const Tensor& t)
{
    return {t.data.begin(), t.data.end()};
}

/// Resolves every layer against the bundle and the running shape.
std::vector<BoundLayer> bind_layers(const NetworkSpec& spec, const WeightsBundle& weights)
{
    spec.validate();
    std::vector<BoundLayer> bound;
    bound.reserve(spec.layers.size());
    Shape3 shape = spec.input_shape;
    for (const LayerConfig& layer : spec.layers) {
        BoundLayer b;
        b.kind = layer.kind;
        b.config = &layer;
        switch (layer.kind) {
        case LayerKind::Dense: {
            const Tensor& t = weights.at(layer.name);
            if (t.shape.size() != 2 || t.shape[0] != layer.units ||
                t.shape[1] != shape.size()) {
                throw shape_error("layer '" + layer.name +
                                  "': weight tensor shape does not match [units, in_dim]");
            }
            b.dense.in_dim = shape.size();
            b.dense.out_dim = layer.units;
            b.dense.weights = tensor_as_doubles(t);
            b.dense.neuron = layer.neuron;
            b.dense.per_unit = layer.per_unit;
            shape = {1, 1, layer.units};
            break;
        }
        case LayerKind::Conv: {
            const Tensor& t = weights.at(layer.name);
            if (t.shape.size() != 4 || t.shape[0] != layer.kernel_h ||
                t.shape[1] != layer.kernel_w || t.shape[2] != shape.channels ||
                t.shape[3] != layer.filters) {
                throw shape_error(
                    "layer '" + layer.name +
                    "': kernel tensor shape does not match [kh, kw, channels, filters]");
            }
            b.conv.kernel_h = layer.kernel_h;
            b.conv.kernel_w = layer.kernel_w;
            b.conv.in_channels = shape.channels;
            b.conv.filters = layer.filters;
            b.conv.kernel = tensor_as_doubles(t);
            b.conv.stride = layer.stride;
            b.conv.padding = layer.padding;
            b.conv.neuron = layer.neuron;
            b.conv.per_filter = layer.per_unit;
            shape = {conv_output_extent(shape.height, layer.kernel_h, layer.stride,
                                        layer.padding),
                     conv_output_extent(shape.width, layer.kernel_w, layer.stride,
                                        layer.padding),
                     layer.filters};
            break;
        }
        case LayerKind::MaxPool:
            b.pool.window_h = layer.window_h;
            b.pool.window_w = layer.window_w;
            b.pool.stride = layer.stride;
            shape = {pool_output_extent(shape.height, layer.window_h, layer.stride),
                     pool_output_extent(shape.width, layer.window_w, layer.stride),
                     shape.channels};
            break;
        case LayerKind::Flatten:
            shape = {1, 1, shape.size()};
            break;
        }
        bound.push_back(std::move(b));
    }
    return bound;
}

std::vector<double> prepare_input(std::span<const double> input, const Shape3& shape,
                                  const SimConfig& cfg)
{
    if (input.size() != shape.size()) {
        throw shape_error("input size does not match the network input shape");
    }
    std::vector<double> prepared(input.begin(), input.end());
    for (double& v : prepared) {
        if (v < 0.0 || v > 1.0) {
            if (cfg.strict) {
                throw domain_error("input value outside [0, 1] in strict mode");
            }
            v = std::clamp(v, 0.0, 1.0);
        }
    }
    return prepared;
}

std::size_t argmax_smallest_index(std::span<const double> values)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

RunResult run_snn_bound(const std::vector<BoundLayer>& layers, const Shape3& input_shape,
                        std::span<const double> input, const SimConfig& cfg)
{
    const std::vector<double> prepared = prepare_input(input, input_shape, cfg);
    const CodingConfig coding{cfg.dt, cfg.t_window, cfg.range_scale};

    SpikeVolume current;
    current.height = input_shape.height;
    current.width = input_shape.width;
    current.channels = input_shape.channels;
    current.trains.reserve(prepared.size());
    for (double v : prepared) {
        current.trains.push_back(encode(v, coding));
    }

    RunResult result;
    result.layer_outputs.reserve(layers.size());
    for (const BoundLayer& layer : layers) {
        switch (layer.kind) {
        case LayerKind::Dense: {
            if (current.height != 1 || current.width != 1) {
                throw shape_error("dense layer applied to an unflattened volume");
            }
            std::vector<SpikeTrain> outs = dense_forward(current.trains, layer.dense);
            current.height = 1;
            current.width = 1;
            current.channels = outs.size();
            current.trains = std::move(outs);
            break;
        }
        case LayerKind::Conv:
            current = conv_forward(current, layer.conv);
            break;
        case LayerKind::MaxPool:
            current = maxpool_forward(current, layer.pool);
            break;
        case LayerKind::Flatten:
            current.channels = current.trains.size();
            current.height = 1;
            current.width = 1;
            break;
        }
        std::vector<double> rates(current.trains.size());
        for (std::size_t i = 0; i < current.trains.size(); ++i) {
            rates[i] = decode(current.trains[i]);
        }
        result.layer_outputs.push_back(std::move(rates));
    }

    result.output_counts.resize(current.trains.size());
    for (std::size_t i = 0; i < current.trains.size(); ++i) {
        result.output_counts[i] = current.trains[i].events.size();
    }
    // Argmax over spike counts; decoded rates share the argmax but cost more.
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.output_counts.size(); ++i) {
        if (result.output_counts[i] > result.output_counts[best]) {
            best = i;
        }
    }
    result.label = best;
    return result;
}

RunResult ann_forward_bound(const std::vector<BoundLayer>& layers,
                            const Shape3& input_shape, std::span<const double> input,
                            const SimConfig& cfg)
{
    const std::vector<double> prepared = prepare_input(input, input_shape, cfg);

    Volume current;
    current.height = input_shape.height;
    current.width = input_shape.width;
    current.channels = input_shape.channels;
    current.values.resize(prepared.size());
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        current.values[i] = prepared[i] * cfg.range_scale;
    }

    RunResult result;
    result.layer_outputs.reserve(layers.size());
    for (const BoundLayer& layer : layers) {
        switch (layer.kind) {
        case LayerKind::Dense: {
            if (current.height != 1 || current.width != 1) {
                throw shape_error("dense layer applied to an unflattened volume");
            }
            std::vector<double> outs =
                ann_dense(current.values, layer.dense, layer.config->relu);
            current.height = 1;
            current.width = 1;
            current.channels = outs.size();
            current.values = std::move(outs);
            break;
        }
        case LayerKind::Conv:
            current = ann_conv(current, layer.conv, layer.config->relu);
            break;
        case LayerKind::MaxPool:
            current = ann_maxpool(current, layer.pool);
            break;
        case LayerKind::Flatten:
            current.channels = current.values.size();
            current.height = 1;
            current.width = 1;
            break;
        }
        result.layer_outputs.push_back(current.values);
    }

    result.label = argmax_smallest_index(current.values);
    return result;
}

double weight_row_sum(const BoundLayer& layer, std::size_t unit)
{
    if (layer.kind == LayerKind::Dense) {
        double sum = 0.0;
        for (std::size_t i = 0; i < layer.dense.in_dim; ++i) {
            sum += layer.dense.weight(unit, i);
        }
        return sum;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < layer.conv.kernel_h; ++i) {
        for (std::size_t j = 0; j < layer.conv.kernel_w; ++j) {
            for (std::size_t c = 0; c < layer.conv.in_channels; ++c) {
                sum += layer.conv.weight(i, j, c, unit);
            }
        }
    }
    return sum;
}

double percentile(std::vector<double> values, double q)
{
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

ordered_json neuron_to_json(const NeuronParams& n)
{
    ordered_json j;
    j["c_m"] = n.c_m;
    j["g_l"] = n.g_l;
    j["v_th"] = n.v_th;
    j["reset"] = n.reset_mode == ResetMode::LinearReset ? "linear" : "zero";
    return j;
}

NeuronParams neuron_from_json(const ordered_json& j)
{
    NeuronParams n;
    n.c_m = j.value("c_m", 1.0);
    n.g_l = j.value("g_l", 0.0);
    n.v_th = j.value("v_th", 1.0);
    const std::string reset = j.value("reset", "linear");
    if (reset == "linear") {
        n.reset_mode = ResetMode::LinearReset;
    } else if (reset == "zero") {
        n.reset_mode = ResetMode::ResetToZero;
    } else {
        throw manifest_error("network spec: unknown reset mode '" + reset + "'");
    }
    return n;
}

}  // namespace

std::vector<Shape3> NetworkSpec::layer_shapes() const
{
    std::vector<Shape3> shapes;
    shapes.reserve(layers.size());
    Shape3 shape = input_shape;
    for (const LayerConfig& layer : layers) {
        switch (layer.kind) {
        case LayerKind::Dense:
            if (shape.height != 1 || shape.width != 1) {
                throw shape_error("layer '" + layer.name +
                                  "': dense requires a flattened input");
            }
            if (layer.units == 0) {
                throw shape_error("layer '" + layer.name + "': units must be positive");
            }
            shape = {1, 1, layer.units};
            break;
        case LayerKind::Conv:
            shape = {conv_output_extent(shape.height, layer.kernel_h, layer.stride,
                                        layer.padding),
                     conv_output_extent(shape.width, layer.kernel_w, layer.stride,
                                        layer.padding),
                     layer.filters};
            break;
        case LayerKind::MaxPool:
            shape = {pool_output_extent(shape.height, layer.window_h, layer.stride),
                     pool_output_extent(shape.width, layer.window_w, layer.stride),
                     shape.channels};
            break;
        case LayerKind::Flatten:
            shape = {1, 1, shape.size()};
            break;
        }
        shapes.push_back(shape);
    }
    return shapes;
}

void NetworkSpec::validate() const
{
    if (layers.empty()) {
        throw shape_error("network spec: at least one layer required");
    }
    if (input_shape.size() == 0) {
        throw shape_error("network spec: empty input shape");
    }
    std::set<std::string> weighted_names;
    for (const LayerConfig& layer : layers) {
        if (layer.kind == LayerKind::Dense || layer.kind == LayerKind::Conv) {
            if (layer.name.empty()) {
                throw shape_error("network spec: weighted layers need a tensor name");
            }
            if (!weighted_names.insert(layer.name).second) {
                throw shape_error("network spec: duplicate layer name '" + layer.name + "'");
            }
        }
    }
    layer_shapes();  // throws if adjacent shapes do not compose
}

NetworkSpec convert(const NetworkSpec& ann, const WeightsBundle& weights,
                    ConvertMode mode, const ConvertOptions& opts)
{
    const std::vector<BoundLayer> bound = bind_layers(ann, weights);

    NetworkSpec snn = ann;
    snn.spiking = true;
    std::vector<std::string> offending;
    for (std::size_t li = 0; li < snn.layers.size(); ++li) {
        LayerConfig& layer = snn.layers[li];
        if (layer.kind != LayerKind::Dense && layer.kind != LayerKind::Conv) {
            continue;
        }
        const double slope = layer.relu.slope;
        if (!(slope > 0.0)) {
            throw domain_error("convert: layer '" + layer.name +
                               "' has a non-positive activation slope");
        }
        layer.neuron = NeuronParams{};
        layer.neuron.v_th = opts.v_th;
        layer.neuron.c_m = 1.0 / (slope * opts.v_th);
        layer.neuron.reset_mode = ResetMode::LinearReset;
        layer.per_unit.clear();

        if (mode == ConvertMode::ZeroBias) {
            if (layer.relu.bias != 0.0) {
                throw domain_error("convert: layer '" + layer.name +
                                   "' carries a bias; zero_bias mode requires none");
            }
            layer.neuron.g_l = opts.zero_bias_g_l;
            continue;
        }

        const std::size_t n_units = layer.kind == LayerKind::Dense
                                        ? layer.units
                                        : layer.filters;
        layer.per_unit.reserve(n_units);
        ReluParams relu;
        relu.bias = layer.relu.bias;
        relu.slope = slope;
        for (std::size_t u = 0; u < n_units; ++u) {
            const double sum_w = weight_row_sum(bound[li], u);
            try {
                MappingResult mapped = params_from_relu(relu, sum_w, opts.v_th);
                mapped.neuron.reset_mode = ResetMode::LinearReset;
                layer.per_unit.push_back(mapped.neuron);
            } catch (const domain_error&) {
                offending.push_back(layer.name + "[" + std::to_string(u) + "]");
            }
        }
    }
    if (!offending.empty()) {
        std::string msg = "convert: bias mapping domain violated for";
        for (const std::string& name : offending) {
            msg += " " + name;
        }
        throw domain_error(msg);
    }
    return snn;
}

RunResult run_snn(const NetworkSpec& snn, const WeightsBundle& weights,
                  std::span<const double> input, const SimConfig& cfg)
{
    return run_snn_bound(bind_layers(snn, weights), snn.input_shape, input, cfg);
}

RunResult ann_forward(const NetworkSpec& ann, const WeightsBundle& weights,
                      std::span<const double> input, const SimConfig& cfg)
{
    return ann_forward_bound(bind_layers(ann, weights), ann.input_shape, input, cfg);
}

EquivalenceReport compare_networks(const NetworkSpec& ann, const NetworkSpec& snn,
                                   const WeightsBundle& weights,
                                   std::span<const std::vector<double>> inputs,
                                   const SimConfig& cfg)
{
    if (inputs.empty()) {
        throw domain_error("compare_networks: need at least one input");
    }
    const std::vector<BoundLayer> ann_bound = bind_layers(ann, weights);
    const std::vector<BoundLayer> snn_bound = bind_layers(snn, weights);
    if (ann_bound.size() != snn_bound.size()) {
        throw shape_error("compare_networks: layer counts differ");
    }

    const std::size_t n_layers = ann_bound.size();
    const std::size_t hidden = n_layers >= 2 ? n_layers - 2 : n_layers - 1;

    std::vector<std::size_t> ann_labels(inputs.size());
    std::vector<std::size_t> snn_labels(inputs.size());
    Matrix ann_hidden;
    Matrix snn_hidden;
    std::vector<double> output_errors;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const RunResult a = ann_forward_bound(ann_bound, ann.input_shape, inputs[i], cfg);
        const RunResult s = run_snn_bound(snn_bound, snn.input_shape, inputs[i], cfg);
        ann_labels[i] = a.label;
        snn_labels[i] = s.label;

        const std::vector<double>& ah = a.layer_outputs[hidden];
        const std::vector<double>& sh = s.layer_outputs[hidden];
        if (i == 0) {
            ann_hidden = Matrix(inputs.size(), ah.size());
            snn_hidden = Matrix(inputs.size(), sh.size());
        }
        std::copy(ah.begin(), ah.end(), ann_hidden.values.begin() +
                                            static_cast<std::ptrdiff_t>(i * ah.size()));
        std::copy(sh.begin(), sh.end(), snn_hidden.values.begin() +
                                            static_cast<std::ptrdiff_t>(i * sh.size()));

        const std::vector<double>& ao = a.layer_outputs.back();
        const std::vector<double>& so = s.layer_outputs.back();
        for (std::size_t j = 0; j < ao.size(); ++j) {
            output_errors.push_back(std::abs(ao[j] - so[j]));
        }
    }

    EquivalenceReport report;
    report.matrices = correlation_matrices(ann_hidden, snn_hidden);

    // Cross-model diagonal of the data-dimension matrix: one correlation per
    // kept datum between its ANN and SNN hidden responses.
    const std::size_t kept = report.matrices.kept_data.size();
    if (kept > 0) {
        double sum = 0.0;
        double lo = 1.0;
        double hi = -1.0;
        for (std::size_t i = 0; i < kept; ++i) {
            const double rho = report.matrices.data_dim.at(i, kept + i);
            sum += rho;
            lo = std::min(lo, rho);
            hi = std::max(hi, rho);
        }
        report.mean_correlation = sum / static_cast<double>(kept);
        report.min_correlation = lo;
        report.max_correlation = hi;
    }

    const std::size_t n_classes = ann_bound.empty()
                                      ? 0
                                      : ann.layer_shapes().back().size();
    report.confusion = confusion_matrix(ann_labels, snn_labels, n_classes);
    report.label_agreement = report.confusion.agreement();
    report.error_p50 = percentile(output_errors, 0.50);
    report.error_p90 = percentile(output_errors, 0.90);
    report.error_max = output_errors.empty()
                           ? 0.0
                           : *std::max_element(output_errors.begin(), output_errors.end());
    report.bound = quantization_bound(cfg.t_window);
    return report;
}

std::string network_spec_to_json(const NetworkSpec& spec)
{
    ordered_json doc;
    doc["format_version"] = 1;
    doc["model"] = spec.spiking ? "snn" : "ann";
    doc["input_shape"] = {spec.input_shape.height, spec.input_shape.width,
                          spec.input_shape.channels};
    ordered_json layers = ordered_json::array();
    for (const LayerConfig& layer : spec.layers) {
        ordered_json j;
        j["name"] = layer.name;
        switch (layer.kind) {
        case LayerKind::Dense:
            j["kind"] = "dense";
            j["units"] = layer.units;
            break;
        case LayerKind::Conv:
            j["kind"] = "conv";
            j["filters"] = layer.filters;
            j["kernel"] = {layer.kernel_h, layer.kernel_w};
            j["stride"] = layer.stride;
            j["padding"] = layer.padding;
            break;
        case LayerKind::MaxPool:
            j["kind"] = "maxpool";
            j["window"] = {layer.window_h, layer.window_w};
            j["stride"] = layer.stride;
            break;
        case LayerKind::Flatten:
            j["kind"] = "flatten";
            break;
        }
        if (layer.kind == LayerKind::Dense || layer.kind == LayerKind::Conv) {
            j["relu"] = {{"bias", layer.relu.bias}, {"slope", layer.relu.slope}};
            j["neuron"] = neuron_to_json(layer.neuron);
            if (!layer.per_unit.empty()) {
                ordered_json per = ordered_json::array();
                for (const NeuronParams& n : layer.per_unit) {
                    per.push_back(neuron_to_json(n));
                }
                j["per_unit"] = std::move(per);
            }
        }
        layers.push_back(std::move(j));
    }
    doc["layers"] = std::move(layers);
    return doc.dump(2);
}

NetworkSpec parse_network_spec(const std::string& json_text)
{
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw manifest_error("network spec parse error: " + std::string(e.what()));
    }
    if (!doc.is_object() || doc.value("format_version", 0) != 1) {
        throw manifest_error("network spec: unsupported or missing format_version");
    }

    NetworkSpec spec;
    const std::string model = doc.value("model", "ann");
    if (model == "snn") {
        spec.spiking = true;
    } else if (model != "ann") {
        throw manifest_error("network spec: model must be 'ann' or 'snn'");
    }
    const auto shape = doc.value("input_shape", std::vector<std::size_t>{});
    if (shape.size() != 3) {
        throw manifest_error("network spec: input_shape must have three entries");
    }
    spec.input_shape = {shape[0], shape[1], shape[2]};

    if (!doc.contains("layers") || !doc["layers"].is_array()) {
        throw manifest_error("network spec: missing layers array");
    }
    for (const auto& j : doc["layers"]) {
        LayerConfig layer;
        layer.name = j.value("name", "");
        const std::string kind = j.value("kind", "");
        if (kind == "dense") {
            layer.kind = LayerKind::Dense;
            layer.units = j.value("units", std::size_t{0});
        } else if (kind == "conv") {
            layer.kind = LayerKind::Conv;
            layer.filters = j.value("filters", std::size_t{0});
            const auto kernel = j.value("kernel", std::vector<std::size_t>{});
            if (kernel.size() != 2) {
                throw manifest_error("network spec: conv kernel must be [kh, kw]");
            }
            layer.kernel_h = kernel[0];
            layer.kernel_w = kernel[1];
            layer.stride = j.value("stride", std::size_t{1});
            layer.padding = j.value("padding", std::size_t{0});
        } else if (kind == "maxpool") {
            layer.kind = LayerKind::MaxPool;
            const auto window = j.value("window", std::vector<std::size_t>{});
            if (window.size() != 2) {
                throw manifest_error("network spec: maxpool window must be [h, w]");
            }
            layer.window_h = window[0];
            layer.window_w = window[1];
            layer.stride = j.value("stride", std::size_t{1});
        } else if (kind == "flatten") {
            layer.kind = LayerKind::Flatten;
        } else {
            throw manifest_error("network spec: unsupported layer kind '" + kind + "'");
        }
        if (j.contains("relu")) {
            layer.relu.bias = j["relu"].value("bias", 0.0);
            layer.relu.slope = j["relu"].value("slope", 1.0);
        }
        if (j.contains("neuron")) {
            layer.neuron = neuron_from_json(j["neuron"]);
        }
        if (j.contains("per_unit")) {
            for (const auto& n : j["per_unit"]) {
                layer.per_unit.push_back(neuron_from_json(n));
            }
        }
        spec.layers.push_back(std::move(layer));
    }
    spec.validate();
    return spec;
}

void write_network_spec(const std::string& path, const NetworkSpec& spec)
{
    std::ofstream out(path);
    if (!out) {
        throw io_error("cannot open for writing: " + path);
    }
    out << network_spec_to_json(spec) << "\n";
    if (!out) {
        throw io_error("write failed: " + path);
    }
}

NetworkSpec read_network_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_network_spec(buffer.str());
}

}  // namespace lifmap
