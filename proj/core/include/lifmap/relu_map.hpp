#pragma once

#include <span>
#include <vector>

#include "lifmap/neuron.hpp"

namespace lifmap {

/// Rate-domain ReLU artificial neuron: output = slope * max(0, drive + bias)
/// where drive is the weighted input sum. The bias is stored as the signed
/// additive offset, so mappable neurons carry bias <= 0.
struct ReluParams {
    std::vector<double> weights;
    double bias = 0.0;
    double slope = 1.0;
};

struct MappingResult {
    NeuronParams neuron;
    double residual = 0.0;  // relative round-trip error of (bias, slope)
};

double relu_an(std::span<const double> inputs, const ReluParams& p);

/// Activation slope of the equivalent ReLU neuron: 1 / (v_th * c_m).
double slope_from_params(const NeuronParams& n);

/// Asymptotic-window bias: sum_w / (tau_m * ln(1 - sum_w / (v_th * c_m))).
/// Negative for leaky neurons; exactly 0 when g_l == 0. Its magnitude is
/// the smallest drive that can fire the neuron as the window grows without
/// bound. Requires 0 < sum_w < v_th * c_m.
double bias_from_params(double sum_w, const NeuronParams& n);

/// Finite-window minimum equal input frequency able to fire the neuron:
/// the asymptotic bias magnitude with the (1 - e^(-t_window/tau)) window
/// factor applied, divided by the weight sum.
double min_firing_frequency(std::span<const double> weights, const NeuronParams& n,
                            double t_window);

/// Inverse mapping at fixed threshold: c_m = 1 / (slope * v_th) and
/// g_l chosen so bias_from_params reproduces p.bias. Requires p.bias <= 0
/// and 0 < sum_w < v_th * c_m.
MappingResult params_from_relu(const ReluParams& p, double sum_w, double v_th = 1.0);

}  // namespace lifmap
