#include "lifmap/relu_map.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lifmap/errors.hpp"

namespace lifmap {

double relu_an(std::span<const double> inputs, const ReluParams& p)
{
    if (inputs.size() != p.weights.size()) {
        throw shape_error("relu_an: one weight per input required");
    }
    if (!(p.slope > 0.0)) {
        throw domain_error("relu_an: slope must be positive");
    }
    double drive = p.bias;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        drive += p.weights[i] * inputs[i];
    }
    return p.slope * std::max(0.0, drive);
}

double slope_from_params(const NeuronParams& n)
{
    n.validate();
    return 1.0 / (n.v_th * n.c_m);
}

double bias_from_params(double sum_w, const NeuronParams& n)
{
    n.validate();
    const double cap = n.v_th * n.c_m;
    if (!(sum_w > 0.0)) {
        throw domain_error("bias_from_params: weight sum must be positive");
    }
    if (!(sum_w < cap)) {
        throw domain_error(
            "bias_from_params: weight sum must stay below v_th * c_m "
            "(a single volley already fires the neuron)");
    }
    if (n.g_l == 0.0) {
        return 0.0;  // no leak, no minimum drive
    }
    return sum_w / (n.tau_m() * std::log(1.0 - sum_w / cap));
}

double min_firing_frequency(std::span<const double> weights, const NeuronParams& n,
                            double t_window)
{
    n.validate();
    if (!(t_window > 0.0)) {
        throw domain_error("min_firing_frequency: t_window must be positive");
    }
    const double sum_w = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (n.g_l == 0.0) {
        // Pure integrator: any positive drive eventually fires; within the
        // window the first volley count that reaches threshold decides.
        if (!(sum_w > 0.0)) {
            throw domain_error("min_firing_frequency: weight sum must be positive");
        }
        return n.v_th * n.c_m / (sum_w * t_window);
    }
    const double cap = n.v_th * n.c_m;
    const double window_factor = 1.0 - std::exp(-t_window / n.tau_m());
    if (!(sum_w > 0.0) || !(sum_w * window_factor < cap)) {
        throw domain_error("min_firing_frequency: weight sum outside the mapping domain");
    }
    const double b_finite =
        sum_w / (n.tau_m() * std::log(1.0 - sum_w * window_factor / cap));
    return -b_finite / sum_w;
}

MappingResult params_from_relu(const ReluParams& p, double sum_w, double v_th)
{
    if (!(p.slope > 0.0)) {
        throw domain_error("params_from_relu: slope must be positive");
    }
    if (p.bias > 0.0) {
        throw domain_error(
            "params_from_relu: positive bias is unrepresentable "
            "(a LIF neuron cannot fire below zero drive)");
    }
    if (!(v_th > 0.0)) {
        throw domain_error("params_from_relu: v_th must be positive");
    }

    MappingResult out;
    out.neuron.v_th = v_th;
    out.neuron.c_m = 1.0 / (p.slope * v_th);
    const double cap = v_th * out.neuron.c_m;
    if (!(sum_w > 0.0) || !(sum_w < cap)) {
        throw domain_error("params_from_relu: weight sum outside (0, v_th * c_m)");
    }
    // Inverting b = sum_w / (tau * ln(1 - sum_w / cap)) with tau = c_m / g_l;
    // both factors below are non-positive, so g_l comes out non-negative.
    out.neuron.g_l = p.bias * out.neuron.c_m * std::log(1.0 - sum_w / cap) / sum_w;

    const double k_back = slope_from_params(out.neuron);
    const double b_back = bias_from_params(sum_w, out.neuron);
    const double k_err = std::abs(k_back - p.slope) / p.slope;
    const double b_scale = std::max(std::abs(p.bias), 1e-300);
    const double b_err = p.bias == 0.0 ? std::abs(b_back)
                                       : std::abs(b_back - p.bias) / b_scale;
    out.residual = std::max(k_err, b_err);
    return out;
}

}  // namespace lifmap
