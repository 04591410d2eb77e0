#include "lifmap/layers.hpp"

#include <algorithm>
#include <cmath>

#include "lifmap/errors.hpp"

namespace lifmap {

void DenseLayerSpec::validate() const
{
    if (in_dim == 0 || out_dim == 0) {
        throw shape_error("dense layer: dimensions must be positive");
    }
    if (weights.size() != in_dim * out_dim) {
        throw shape_error("dense layer: weight matrix shape mismatch");
    }
    if (!per_unit.empty() && per_unit.size() != out_dim) {
        throw shape_error("dense layer: per-unit params must cover every output");
    }
    neuron.validate();
    for (const NeuronParams& p : per_unit) {
        p.validate();
    }
}

void ConvLayerSpec::validate() const
{
    if (kernel_h == 0 || kernel_w == 0 || in_channels == 0 || filters == 0) {
        throw shape_error("conv layer: kernel dimensions must be positive");
    }
    if (kernel.size() != kernel_h * kernel_w * in_channels * filters) {
        throw shape_error("conv layer: kernel shape mismatch");
    }
    if (stride == 0) {
        throw shape_error("conv layer: stride must be positive");
    }
    if (!per_filter.empty() && per_filter.size() != filters) {
        throw shape_error("conv layer: per-filter params must cover every filter");
    }
    neuron.validate();
    for (const NeuronParams& p : per_filter) {
        p.validate();
    }
}

void PoolLayerSpec::validate() const
{
    if (window_h == 0 || window_w == 0) {
        throw shape_error("pool layer: window dimensions must be positive");
    }
    if (stride == 0) {
        throw shape_error("pool layer: stride must be positive");
    }
}

void SpikeVolume::validate() const
{
    if (trains.size() != height * width * channels) {
        throw shape_error("spike volume: train count does not match dimensions");
    }
    for (const SpikeTrain& t : trains) {
        if (!t.same_grid(trains[0])) {
            throw shape_error("spike volume: trains must share one time grid");
        }
    }
}

std::size_t conv_output_extent(std::size_t in, std::size_t kernel, std::size_t stride,
                               std::size_t padding)
{
    const std::size_t padded = in + 2 * padding;
    if (kernel > padded) {
        throw shape_error("conv layer: kernel larger than padded input");
    }
    return (padded - kernel) / stride + 1;
}

std::size_t pool_output_extent(std::size_t in, std::size_t window, std::size_t stride)
{
    if (window > in) {
        throw shape_error("pool layer: window larger than input");
    }
    return (in - window) / stride + 1;
}

std::vector<SpikeTrain> dense_forward(std::span<const SpikeTrain> inputs,
                                      const DenseLayerSpec& spec)
{
    spec.validate();
    if (inputs.size() != spec.in_dim) {
        throw shape_error("dense_forward: input count does not match in_dim");
    }
    for (const SpikeTrain& t : inputs) {
        if (!t.same_grid(inputs[0])) {
            throw shape_error("dense_forward: inputs must share one grid");
        }
    }

    const double dt = inputs[0].dt;
    const double window = inputs[0].t_window();
    std::vector<SpikeTrain> outputs;
    outputs.reserve(spec.out_dim);
    std::vector<double> charge(inputs[0].n_steps);
    for (std::size_t j = 0; j < spec.out_dim; ++j) {
        std::fill(charge.begin(), charge.end(), 0.0);
        // Charge summation in ascending input order keeps results identical
        // under any per-neuron parallel schedule.
        for (std::size_t i = 0; i < spec.in_dim; ++i) {
            const double w = spec.weight(j, i);
            for (std::uint32_t e : inputs[i].events) {
                charge[e] += w;
            }
        }
        outputs.push_back(run(spec.unit_params(j), charge, dt, window).train);
    }
    return outputs;
}

SpikeVolume conv_forward(const SpikeVolume& input, const ConvLayerSpec& spec)
{
    spec.validate();
    input.validate();
    if (input.channels != spec.in_channels) {
        throw shape_error("conv_forward: channel count mismatch");
    }
    if (input.trains.empty()) {
        throw shape_error("conv_forward: empty input volume");
    }

    const std::size_t out_h = conv_output_extent(input.height, spec.kernel_h,
                                                 spec.stride, spec.padding);
    const std::size_t out_w = conv_output_extent(input.width, spec.kernel_w,
                                                 spec.stride, spec.padding);
    const double dt = input.trains[0].dt;
    const std::uint32_t n_steps = input.trains[0].n_steps;
    const double window = input.trains[0].t_window();

    SpikeVolume out;
    out.height = out_h;
    out.width = out_w;
    out.channels = spec.filters;
    out.trains.reserve(out_h * out_w * spec.filters);

    std::vector<double> charge(n_steps);
    for (std::size_t oy = 0; oy < out_h; ++oy) {
        for (std::size_t ox = 0; ox < out_w; ++ox) {
            for (std::size_t f = 0; f < spec.filters; ++f) {
                std::fill(charge.begin(), charge.end(), 0.0);
                for (std::size_t i = 0; i < spec.kernel_h; ++i) {
                    // Padding rows/columns hold zero-spike trains: skip them.
                    const std::ptrdiff_t iy =
                        static_cast<std::ptrdiff_t>(oy * spec.stride + i) -
                        static_cast<std::ptrdiff_t>(spec.padding);
                    if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(input.height)) {
                        continue;
                    }
                    for (std::size_t j = 0; j < spec.kernel_w; ++j) {
                        const std::ptrdiff_t ix =
                            static_cast<std::ptrdiff_t>(ox * spec.stride + j) -
                            static_cast<std::ptrdiff_t>(spec.padding);
                        if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(input.width)) {
                            continue;
                        }
                        for (std::size_t c = 0; c < spec.in_channels; ++c) {
                            const double w = spec.weight(i, j, c, f);
                            const SpikeTrain& t =
                                input.at(static_cast<std::size_t>(iy),
                                         static_cast<std::size_t>(ix), c);
                            for (std::uint32_t e : t.events) {
                                charge[e] += w;
                            }
                        }
                    }
                }
                out.trains.push_back(run(spec.filter_params(f), charge, dt, window).train);
            }
        }
    }
    return out;
}

SpikeVolume maxpool_forward(const SpikeVolume& input, const PoolLayerSpec& spec)
{
    spec.validate();
    input.validate();

    const std::size_t out_h = pool_output_extent(input.height, spec.window_h, spec.stride);
    const std::size_t out_w = pool_output_extent(input.width, spec.window_w, spec.stride);

    SpikeVolume out;
    out.height = out_h;
    out.width = out_w;
    out.channels = input.channels;
    out.trains.reserve(out_h * out_w * input.channels);

    for (std::size_t oy = 0; oy < out_h; ++oy) {
        for (std::size_t ox = 0; ox < out_w; ++ox) {
            for (std::size_t c = 0; c < input.channels; ++c) {
                // Winner = largest spike count over the whole window, ties to
                // the smallest row-major window index; forward its full train.
                const SpikeTrain* best = nullptr;
                for (std::size_t i = 0; i < spec.window_h; ++i) {
                    for (std::size_t j = 0; j < spec.window_w; ++j) {
                        const SpikeTrain& t =
                            input.at(oy * spec.stride + i, ox * spec.stride + j, c);
                        if (best == nullptr || t.events.size() > best->events.size()) {
                            best = &t;
                        }
                    }
                }
                out.trains.push_back(*best);
            }
        }
    }
    return out;
}

std::vector<double> ann_dense(std::span<const double> inputs, const DenseLayerSpec& spec,
                              const ReluParams& relu)
{
    spec.validate();
    if (inputs.size() != spec.in_dim) {
        throw shape_error("ann_dense: input count does not match in_dim");
    }
    std::vector<double> out(spec.out_dim);
    for (std::size_t j = 0; j < spec.out_dim; ++j) {
        double drive = relu.bias;
        for (std::size_t i = 0; i < spec.in_dim; ++i) {
            drive += spec.weight(j, i) * inputs[i];
        }
        out[j] = relu.slope * std::max(0.0, drive);
    }
    return out;
}

Volume ann_conv(const Volume& input, const ConvLayerSpec& spec, const ReluParams& relu)
{
    spec.validate();
    if (input.channels != spec.in_channels) {
        throw shape_error("ann_conv: channel count mismatch");
    }

    Volume out;
    out.height = conv_output_extent(input.height, spec.kernel_h, spec.stride, spec.padding);
    out.width = conv_output_extent(input.width, spec.kernel_w, spec.stride, spec.padding);
    out.channels = spec.filters;
    out.values.resize(out.height * out.width * out.channels);

    for (std::size_t oy = 0; oy < out.height; ++oy) {
        for (std::size_t ox = 0; ox < out.width; ++ox) {
            for (std::size_t f = 0; f < spec.filters; ++f) {
                double drive = relu.bias;
                for (std::size_t i = 0; i < spec.kernel_h; ++i) {
                    const std::ptrdiff_t iy =
                        static_cast<std::ptrdiff_t>(oy * spec.stride + i) -
                        static_cast<std::ptrdiff_t>(spec.padding);
                    if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(input.height)) {
                        continue;
                    }
                    for (std::size_t j = 0; j < spec.kernel_w; ++j) {
                        const std::ptrdiff_t ix =
                            static_cast<std::ptrdiff_t>(ox * spec.stride + j) -
                            static_cast<std::ptrdiff_t>(spec.padding);
                        if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(input.width)) {
                            continue;
                        }
                        for (std::size_t c = 0; c < spec.in_channels; ++c) {
                            drive += spec.weight(i, j, c, f) *
                                     input.at(static_cast<std::size_t>(iy),
                                              static_cast<std::size_t>(ix), c);
                        }
                    }
                }
                out.at(oy, ox, f) = relu.slope * std::max(0.0, drive);
            }
        }
    }
    return out;
}

Volume ann_maxpool(const Volume& input, const PoolLayerSpec& spec)
{
    spec.validate();

    Volume out;
    out.height = pool_output_extent(input.height, spec.window_h, spec.stride);
    out.width = pool_output_extent(input.width, spec.window_w, spec.stride);
    out.channels = input.channels;
    out.values.resize(out.height * out.width * out.channels);

    for (std::size_t oy = 0; oy < out.height; ++oy) {
        for (std::size_t ox = 0; ox < out.width; ++ox) {
            for (std::size_t c = 0; c < input.channels; ++c) {
                double best = input.at(oy * spec.stride, ox * spec.stride, c);
                for (std::size_t i = 0; i < spec.window_h; ++i) {
                    for (std::size_t j = 0; j < spec.window_w; ++j) {
                        best = std::max(best,
                                        input.at(oy * spec.stride + i, ox * spec.stride + j, c));
                    }
                }
                out.at(oy, ox, c) = best;
            }
        }
    }
    return out;
}

}  // namespace lifmap
