#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lifmap/spike_train.hpp"

namespace lifmap {

/// Frequency-coding configuration. range_scale maps a unit input to
/// range_scale Hz, so inputs in [0, 1] cover [0, range_scale] Hz.
struct CodingConfig {
    double dt = 0.01;
    double t_window = 3.0;
    double range_scale = 1.0;

    std::uint32_t n_steps() const;
    void validate() const;
};

/// Rate-encode a non-negative scalar: target frequency f = range_scale * x,
/// spikes at nominal times j / f for j = 1..floor(f * t_window), each
/// snapped to the nearest grid index (round half up). There is no spike at
/// t = 0. Requested frequencies above 1/dt raise domain_error.
SpikeTrain encode(double x, const CodingConfig& cfg);

/// Decoded rate: event count / t_window. Empty trains decode to 0 Hz.
double decode(const SpikeTrain& train);

/// Per-step weighted charge: for step t, sum of weights[i] over trains i
/// with an event at t. All trains must share one grid.
std::vector<double> weighted_charge_sequence(std::span<const SpikeTrain> trains,
                                             std::span<const double> weights);

}  // namespace lifmap
