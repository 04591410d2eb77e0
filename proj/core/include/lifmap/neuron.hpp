#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lifmap/spike_train.hpp"

namespace lifmap {

enum class ResetMode {
    ResetToZero,  // hard reset: fired potential is discarded
    LinearReset,  // soft reset: threshold is subtracted, residual kept
};

/// Parameters of a linear leaky-integrate-and-fire neuron. The resting
/// and reset potentials are fixed at zero.
struct NeuronParams {
    double c_m = 1.0;   // membrane capacitance
    double g_l = 0.0;   // membrane conductance (1 / R_m)
    double v_th = 1.0;  // spiking threshold
    double v_rest = 0.0;
    ResetMode reset_mode = ResetMode::LinearReset;

    /// Membrane time constant c_m / g_l; +infinity when g_l == 0.
    double tau_m() const;

    /// Throws domain_error unless c_m > 0, g_l >= 0, v_th > 0, v_rest == 0.
    void validate() const;
};

struct NeuronState {
    double v = 0.0;       // membrane potential after the last reset
    double last_h = 0.0;  // pre-reset potential H of the most recent step
};

struct StepResult {
    NeuronState state;
    bool spiked = false;
};

/// Post-reset membrane potential per step plus fired step indices.
struct MembraneTrace {
    double dt = 0.0;
    std::vector<double> potential;
    std::vector<std::uint32_t> fires;
};

struct RunOutput {
    SpikeTrain train;
    MembraneTrace trace;
};

/// Exact inter-step decay exp(-dt * g_l / c_m). Equals 1 when g_l == 0
/// or dt == 0; forward-Euler is deliberately not used so that stepped
/// trajectories agree with the closed-form potential to machine precision.
double decay_factor(const NeuronParams& params, double dt);

/// One grid step: decay, integrate the injected charge as an impulse of
/// charge / c_m, compare H >= v_th, reset per reset_mode. At most one
/// output spike per step.
StepResult step(const NeuronState& state, double injected_charge,
                const NeuronParams& params, double dt);

/// Iterate step() over a per-step charge sequence. weighted_input.size()
/// must equal round(t_window / dt).
RunOutput run(const NeuronParams& params, std::span<const double> weighted_input,
              double dt, double t_window);

/// Membrane potential just after the n-th spike of a periodic input of
/// weight `weight` at frequency f_in, assuming no earlier threshold
/// crossing: (w / c_m) * (1 - e^(-nT/tau)) / (1 - e^(-T/tau)) with
/// T = 1 / f_in, degenerating to n * w / c_m for g_l == 0.
/// Throws domain_error if a crossing would have occurred before spike n.
double closed_form_mp(const NeuronParams& params, double weight, double f_in,
                      std::uint64_t n_spikes);

}  // namespace lifmap
