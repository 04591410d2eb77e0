#include "lifmap/coding.hpp"

#include <cmath>

#include "lifmap/errors.hpp"

namespace lifmap {

std::uint32_t CodingConfig::n_steps() const
{
    return static_cast<std::uint32_t>(std::llround(t_window / dt));
}

void CodingConfig::validate() const
{
    if (!(dt > 0.0)) {
        throw domain_error("CodingConfig: dt must be positive");
    }
    if (!(t_window >= dt)) {
        throw domain_error("CodingConfig: t_window must be at least dt");
    }
    if (!(range_scale >= 0.0)) {
        throw domain_error("CodingConfig: range_scale must be non-negative");
    }
}

SpikeTrain encode(double x, const CodingConfig& cfg)
{
    cfg.validate();
    if (!(x >= 0.0)) {
        throw domain_error("encode: input must be non-negative (rates are rates)");
    }

    SpikeTrain train;
    train.dt = cfg.dt;
    train.n_steps = cfg.n_steps();

    const double f = cfg.range_scale * x;
    if (f == 0.0) {
        return train;
    }
    if (f * cfg.dt > 1.0 + 1e-12) {
        throw domain_error("encode: requested frequency exceeds the grid rate 1/dt");
    }

    // Spike count floor(f * t_window), with one ulp of headroom so that
    // frequencies that are exact in real arithmetic do not lose their last
    // spike to rounding.
    const double ft = f * cfg.t_window;
    const auto count = static_cast<std::uint64_t>(std::floor(ft * (1.0 + 1e-12) + 1e-12));

    train.events.reserve(count);
    std::uint32_t last = 0;
    for (std::uint64_t j = 1; j <= count; ++j) {
        // Nominal time j/f snapped to the nearest grid instant, round half up.
        const double grid_pos = static_cast<double>(j) / (f * cfg.dt);
        auto snapped = static_cast<std::uint64_t>(std::floor(grid_pos + 0.5));
        if (snapped < 1) {
            snapped = 1;
        }
        if (snapped > train.n_steps) {
            snapped = train.n_steps;
        }
        const auto idx = static_cast<std::uint32_t>(snapped - 1);
        if (!train.events.empty() && idx <= last) {
            continue;  // merged duplicate after snapping
        }
        train.events.push_back(idx);
        last = idx;
    }
    return train;
}

double decode(const SpikeTrain& train)
{
    const double window = train.t_window();
    if (window == 0.0) {
        return 0.0;
    }
    return static_cast<double>(train.events.size()) / window;
}

std::vector<double> weighted_charge_sequence(std::span<const SpikeTrain> trains,
                                             std::span<const double> weights)
{
    if (trains.size() != weights.size()) {
        throw shape_error("weighted_charge_sequence: one weight per train required");
    }
    if (trains.empty()) {
        return {};
    }
    for (const SpikeTrain& t : trains) {
        if (!t.same_grid(trains[0])) {
            throw shape_error("weighted_charge_sequence: trains must share one grid");
        }
    }

    std::vector<double> charge(trains[0].n_steps, 0.0);
    for (std::size_t i = 0; i < trains.size(); ++i) {
        const double w = weights[i];
        for (std::uint32_t e : trains[i].events) {
            charge[e] += w;
        }
    }
    return charge;
}

}  // namespace lifmap
