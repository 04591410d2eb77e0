#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lifmap/layers.hpp"
#include "lifmap/metrics.hpp"
#include "lifmap/weights.hpp"

namespace lifmap {

enum class LayerKind { Dense, Conv, MaxPool, Flatten };

/// One layer of a feed-forward network description. Dense and Conv layers
/// bind the weight tensor of the same name from a WeightsBundle.
struct LayerConfig {
    LayerKind kind = LayerKind::Dense;
    std::string name;

    std::size_t units = 0;  // dense

    std::size_t kernel_h = 0;  // conv
    std::size_t kernel_w = 0;
    std::size_t filters = 0;
    std::size_t padding = 0;

    std::size_t window_h = 0;  // maxpool
    std::size_t window_w = 0;

    std::size_t stride = 1;  // conv / maxpool

    ReluParams relu;                     // ANN-mode parameters (bias, slope)
    NeuronParams neuron;                 // SNN-mode parameters
    std::vector<NeuronParams> per_unit;  // per-neuron params from bias conversion
};

struct Shape3 {
    std::size_t height = 1;
    std::size_t width = 1;
    std::size_t channels = 1;

    std::size_t size() const { return height * width * channels; }
    bool operator==(const Shape3&) const = default;
};

struct NetworkSpec {
    bool spiking = false;
    Shape3 input_shape;
    std::vector<LayerConfig> layers;

    /// Output shape after each layer; throws shape_error when adjacent
    /// layers do not compose (e.g. Dense on an unflattened volume).
    std::vector<Shape3> layer_shapes() const;
    void validate() const;
};

struct SimConfig {
    double dt = 0.01;
    double t_window = 3.0;
    double range_scale = 1.0;
    std::uint64_t seed = 0;
    bool strict = false;  // error on inputs outside [0,1] instead of clamping
};

struct RunResult {
    /// Decoded rates (SNN) or rate-domain activations (ANN), one vector
    /// per layer, flattened row-major.
    std::vector<std::vector<double>> layer_outputs;
    std::vector<std::uint64_t> output_counts;  // SNN only: final spike counts
    std::size_t label = 0;  // argmax, ties to the smallest index
};

enum class ConvertMode { ZeroBias, BiasToConductance };

struct ConvertOptions {
    double v_th = 1.0;
    double zero_bias_g_l = 0.0;  // conductance assigned in ZeroBias mode
};

/// ANN -> SNN conversion. Weights are untouched (shared by name);
/// ZeroBias requires every layer bias to be exactly zero and assigns the
/// configured constant conductance with c_m = 1/(slope * v_th);
/// BiasToConductance derives per-neuron conductance from each neuron's
/// weight sum via the inverse bias mapping.
NetworkSpec convert(const NetworkSpec& ann, const WeightsBundle& weights,
                    ConvertMode mode, const ConvertOptions& opts = {});

/// Rate-encode the input, evaluate spiking layers in order (each over the
/// full window), decode every layer. Label = output spike-count argmax.
RunResult run_snn(const NetworkSpec& snn, const WeightsBundle& weights,
                  std::span<const double> input, const SimConfig& cfg);

/// Rate-domain reference pass over the same description. The input is
/// scaled by cfg.range_scale so activations are in Hz, comparable with
/// decoded spiking outputs.
RunResult ann_forward(const NetworkSpec& ann, const WeightsBundle& weights,
                      std::span<const double> input, const SimConfig& cfg);

/// Differential evaluation over a set of inputs: correlation matrices on
/// the penultimate layer, label agreement and confusion matrix on the
/// output layer, output rate error quantiles against the 1/t_window bound.
EquivalenceReport compare_networks(const NetworkSpec& ann, const NetworkSpec& snn,
                                   const WeightsBundle& weights,
                                   std::span<const std::vector<double>> inputs,
                                   const SimConfig& cfg);

// JSON round-trip for network descriptions.
std::string network_spec_to_json(const NetworkSpec& spec);
NetworkSpec parse_network_spec(const std::string& json_text);
void write_network_spec(const std::string& path, const NetworkSpec& spec);
NetworkSpec read_network_spec(const std::string& path);

}  // namespace lifmap
