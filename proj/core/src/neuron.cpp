#include "lifmap/neuron.hpp"

#include <cmath>
#include <limits>

#include "lifmap/errors.hpp"

namespace lifmap {

double NeuronParams::tau_m() const
{
    if (g_l == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return c_m / g_l;
}

void NeuronParams::validate() const
{
    if (!(c_m > 0.0)) {
        throw domain_error("NeuronParams: c_m must be positive");
    }
    if (!(g_l >= 0.0)) {
        throw domain_error("NeuronParams: g_l must be non-negative");
    }
    if (!(v_th > 0.0)) {
        throw domain_error("NeuronParams: v_th must be positive");
    }
    if (v_rest != 0.0) {
        throw domain_error("NeuronParams: v_rest is fixed at 0");
    }
}

double decay_factor(const NeuronParams& params, double dt)
{
    if (dt < 0.0) {
        throw domain_error("decay_factor: dt must be non-negative");
    }
    return std::exp(-dt * params.g_l / params.c_m);
}

StepResult step(const NeuronState& state, double injected_charge,
                const NeuronParams& params, double dt)
{
    const double h = state.v * decay_factor(params, dt) + injected_charge / params.c_m;
    const bool spiked = h >= params.v_th;

    StepResult out;
    out.spiked = spiked;
    out.state.last_h = h;
    if (!spiked) {
        out.state.v = h;
    } else if (params.reset_mode == ResetMode::LinearReset) {
        out.state.v = h - params.v_th;
    } else {
        out.state.v = 0.0;
    }
    return out;
}

RunOutput run(const NeuronParams& params, std::span<const double> weighted_input,
              double dt, double t_window)
{
    params.validate();
    if (!(dt > 0.0) || !(t_window >= dt)) {
        throw domain_error("run: need dt > 0 and t_window >= dt");
    }
    const auto n_steps = static_cast<std::uint32_t>(std::llround(t_window / dt));
    if (weighted_input.size() != n_steps) {
        throw domain_error("run: charge sequence length must equal round(t_window/dt)");
    }

    RunOutput out;
    out.train.dt = dt;
    out.train.n_steps = n_steps;
    out.trace.dt = dt;
    out.trace.potential.resize(n_steps);

    // The decay factor is constant on a fixed grid; hoist it once.
    const double decay = decay_factor(params, dt);
    const double inv_c = 1.0 / params.c_m;
    double v = 0.0;
    for (std::uint32_t i = 0; i < n_steps; ++i) {
        const double h = v * decay + weighted_input[i] * inv_c;
        if (h >= params.v_th) {
            out.train.events.push_back(i);
            out.trace.fires.push_back(i);
            v = params.reset_mode == ResetMode::LinearReset ? h - params.v_th : 0.0;
        } else {
            v = h;
        }
        out.trace.potential[i] = v;
    }
    return out;
}

double closed_form_mp(const NeuronParams& params, double weight, double f_in,
                      std::uint64_t n_spikes)
{
    params.validate();
    if (!(f_in > 0.0)) {
        throw domain_error("closed_form_mp: f_in must be positive");
    }
    if (n_spikes < 1) {
        throw domain_error("closed_form_mp: n_spikes must be at least 1");
    }

    const double amplitude = weight / params.c_m;
    const auto value_at = [&](std::uint64_t n) {
        if (params.g_l == 0.0) {
            return static_cast<double>(n) * amplitude;
        }
        const double ratio = std::exp(-1.0 / (f_in * params.tau_m()));
        return amplitude * (1.0 - std::pow(ratio, static_cast<double>(n))) / (1.0 - ratio);
    };

    // The sub-threshold potential is monotone in n for positive weights, so
    // an earlier crossing is equivalent to a crossing at spike n - 1.
    if (weight > 0.0 && n_spikes >= 2 && value_at(n_spikes - 1) >= params.v_th) {
        throw domain_error("closed_form_mp: threshold crossed before requested spike");
    }
    return value_at(n_spikes);
}

}  // namespace lifmap
