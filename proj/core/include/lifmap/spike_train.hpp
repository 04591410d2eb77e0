#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lifmap {

/// A spike train on a fixed time grid: one-or-none events per step.
/// Amplitude is carried by synapse weights, never by the train itself.
/// Step index i covers the grid instant (i + 1) * dt, so a window of
/// n_steps steps spans (0, n_steps * dt].
struct SpikeTrain {
    double dt = 0.01;
    std::uint32_t n_steps = 0;
    std::vector<std::uint32_t> events;  // sorted, unique, each < n_steps

    double t_window() const { return dt * static_cast<double>(n_steps); }

    bool same_grid(const SpikeTrain& other) const
    {
        return dt == other.dt && n_steps == other.n_steps;
    }

    /// Throws domain_error unless events are sorted, unique and in range.
    void validate() const;
};

/// Text format: a header line "dt=<seconds> n_steps=<count>" followed by
/// one event index per line. Doubles round-trip exactly.
void write_spike_train(std::ostream& out, const SpikeTrain& train);
SpikeTrain read_spike_train(std::istream& in);

void save_spike_train(const std::string& path, const SpikeTrain& train);
SpikeTrain load_spike_train(const std::string& path);

}  // namespace lifmap
