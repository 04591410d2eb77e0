#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lifmap/coding.hpp"
#include "lifmap/neuron.hpp"
#include "lifmap/relu_map.hpp"
#include "lifmap/spike_train.hpp"

namespace lifmap {

struct DenseLayerSpec {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> weights;  // row-major out_dim x in_dim
    NeuronParams neuron;
    std::vector<NeuronParams> per_unit;  // optional per-output override

    double weight(std::size_t out, std::size_t in) const
    {
        return weights[out * in_dim + in];
    }
    const NeuronParams& unit_params(std::size_t out) const
    {
        return per_unit.empty() ? neuron : per_unit[out];
    }
    void validate() const;
};

struct ConvLayerSpec {
    std::size_t kernel_h = 0;
    std::size_t kernel_w = 0;
    std::size_t in_channels = 0;
    std::size_t filters = 0;
    std::vector<double> kernel;  // row-major (kernel_h, kernel_w, in_channels, filters)
    std::size_t stride = 1;
    std::size_t padding = 0;  // rings of zero-spike trains
    NeuronParams neuron;
    std::vector<NeuronParams> per_filter;  // optional per-filter override

    double weight(std::size_t i, std::size_t j, std::size_t c, std::size_t f) const
    {
        return kernel[((i * kernel_w + j) * in_channels + c) * filters + f];
    }
    const NeuronParams& filter_params(std::size_t f) const
    {
        return per_filter.empty() ? neuron : per_filter[f];
    }
    void validate() const;
};

struct PoolLayerSpec {
    std::size_t window_h = 1;
    std::size_t window_w = 1;
    std::size_t stride = 1;

    void validate() const;
};

/// (height, width, channels) grid of spike trains on one shared time grid,
/// stored row-major.
struct SpikeVolume {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 0;
    std::vector<SpikeTrain> trains;

    SpikeTrain& at(std::size_t h, std::size_t w, std::size_t c)
    {
        return trains[(h * width + w) * channels + c];
    }
    const SpikeTrain& at(std::size_t h, std::size_t w, std::size_t c) const
    {
        return trains[(h * width + w) * channels + c];
    }
    /// Throws unless all trains share one grid.
    void validate() const;
};

/// Rate-domain counterpart of SpikeVolume.
struct Volume {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 0;
    std::vector<double> values;

    double& at(std::size_t h, std::size_t w, std::size_t c)
    {
        return values[(h * width + w) * channels + c];
    }
    double at(std::size_t h, std::size_t w, std::size_t c) const
    {
        return values[(h * width + w) * channels + c];
    }
};

std::size_t conv_output_extent(std::size_t in, std::size_t kernel, std::size_t stride,
                               std::size_t padding);
std::size_t pool_output_extent(std::size_t in, std::size_t window, std::size_t stride);

/// Spiking dense layer: per output, weighted charge summation over the
/// inputs followed by one LIF run over the full window.
std::vector<SpikeTrain> dense_forward(std::span<const SpikeTrain> inputs,
                                      const DenseLayerSpec& spec);

/// Spiking convolution: each output position integrates the per-step
/// weighted sum over its receptive field (padding contributes silence)
/// through one LIF neuron.
SpikeVolume conv_forward(const SpikeVolume& input, const ConvLayerSpec& spec);

/// Spiking max-pool: forwards a copy of the member train with the largest
/// spike count over the window; ties break to the smallest row-major index.
SpikeVolume maxpool_forward(const SpikeVolume& input, const PoolLayerSpec& spec);

// Rate-domain reference layers; the behavioral oracles for the spiking path.
std::vector<double> ann_dense(std::span<const double> inputs, const DenseLayerSpec& spec,
                              const ReluParams& relu);
Volume ann_conv(const Volume& input, const ConvLayerSpec& spec, const ReluParams& relu);
Volume ann_maxpool(const Volume& input, const PoolLayerSpec& spec);

}  // namespace lifmap
