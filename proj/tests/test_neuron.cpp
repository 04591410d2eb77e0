#include <doctest.h>

#include <cmath>
#include <random>

#include "lifmap/coding.hpp"
#include "lifmap/errors.hpp"
#include "lifmap/neuron.hpp"

using namespace lifmap;

namespace {

NeuronParams table_iii()
{
    NeuronParams p;
    p.c_m = 1.0;
    p.g_l = 3.0;
    p.v_th = 1.0;
    p.reset_mode = ResetMode::LinearReset;
    return p;
}

NeuronParams integrator()
{
    NeuronParams p;
    p.c_m = 1.0;
    p.g_l = 0.0;
    p.v_th = 1.0;
    p.reset_mode = ResetMode::LinearReset;
    return p;
}

// Frozen against an independent high-precision evaluation.
constexpr double kExpM003 = 0.9704455335485082;          // e^-0.03
constexpr double kLeakyStep = 0.6852227667742541;        // 0.5 e^-0.03 + 0.2
constexpr double kClosedFormN2 = 0.8704091103408591;     // 0.5 (1-e^-0.6)/(1-e^-0.3)

}  // namespace

TEST_CASE("decay_factor")
{
    CHECK(decay_factor(integrator(), 0.01) == 1.0);
    CHECK(decay_factor(table_iii(), 0.01) == doctest::Approx(kExpM003).epsilon(1e-14));
    CHECK(decay_factor(table_iii(), 0.0) == 1.0);
    CHECK_THROWS_AS(decay_factor(table_iii(), -0.01), domain_error);
}

TEST_CASE("params validation")
{
    NeuronParams p = table_iii();
    CHECK(p.tau_m() == doctest::Approx(1.0 / 3.0));
    CHECK(std::isinf(integrator().tau_m()));

    p.c_m = 0.0;
    CHECK_THROWS_AS(p.validate(), domain_error);
    p = table_iii();
    p.g_l = -1.0;
    CHECK_THROWS_AS(p.validate(), domain_error);
    p = table_iii();
    p.v_rest = 0.5;
    CHECK_THROWS_AS(p.validate(), domain_error);
}

TEST_CASE("step: quiescent neuron stays quiescent")
{
    const StepResult r = step(NeuronState{}, 0.0, table_iii(), 0.01);
    CHECK(r.state.v == 0.0);
    CHECK_FALSE(r.spiked);
}

TEST_CASE("step: soft reset subtracts the threshold")
{
    NeuronParams p = integrator();
    const StepResult r = step(NeuronState{0.6, 0.0}, 0.5, p, 0.01);
    CHECK(r.spiked);
    CHECK(r.state.last_h == doctest::Approx(1.1).epsilon(1e-14));
    CHECK(r.state.v == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("step: hard reset discards the residual")
{
    NeuronParams p = integrator();
    p.reset_mode = ResetMode::ResetToZero;
    const StepResult r = step(NeuronState{0.6, 0.0}, 0.5, p, 0.01);
    CHECK(r.spiked);
    CHECK(r.state.v == 0.0);
}

TEST_CASE("step: sub-threshold leaky update")
{
    const StepResult r = step(NeuronState{0.5, 0.0}, 0.2, table_iii(), 0.01);
    CHECK_FALSE(r.spiked);
    CHECK(r.state.v == doctest::Approx(kLeakyStep).epsilon(1e-14));
}

TEST_CASE("run: periodic input matches the closed form at spike instants")
{
    CodingConfig cfg;  // dt 0.01, window 3 s, scale 1
    const SpikeTrain input = encode(10.0, cfg);
    REQUIRE(input.events.size() == 30);
    REQUIRE(input.events[0] == 9);
    REQUIRE(input.events[1] == 19);

    std::vector<double> charge(input.n_steps, 0.0);
    for (auto e : input.events) {
        charge[e] = 0.5;
    }
    const RunOutput out = run(table_iii(), charge, cfg.dt, cfg.t_window);
    CHECK(out.trace.potential[9] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(out.trace.potential[19] == doctest::Approx(kClosedFormN2).epsilon(1e-12));
    // 0.5 (1 + q + q^2) = 1.145 crosses threshold at the third input spike.
    REQUIRE_FALSE(out.train.events.empty());
    CHECK(out.train.events[0] == 29);
}

TEST_CASE("run: weight 0.6 fires at the second input spike")
{
    CodingConfig cfg;
    const SpikeTrain input = encode(10.0, cfg);
    std::vector<double> charge(input.n_steps, 0.0);
    for (auto e : input.events) {
        charge[e] = 0.6;
    }
    const RunOutput out = run(table_iii(), charge, cfg.dt, cfg.t_window);
    REQUIRE_FALSE(out.train.events.empty());
    CHECK(out.train.events[0] == 19);  // 0.6 (1 + e^-0.3) = 1.0445 >= 1
}

TEST_CASE("run: rejects a mismatched charge sequence")
{
    std::vector<double> charge(10, 0.0);
    CHECK_THROWS_AS(run(table_iii(), charge, 0.01, 3.0), domain_error);
}

TEST_CASE("closed_form_mp")
{
    CHECK(closed_form_mp(integrator(), 0.5, 10.0, 2) == doctest::Approx(1.0));
    CHECK(closed_form_mp(table_iii(), 0.5, 10.0, 2) ==
          doctest::Approx(kClosedFormN2).epsilon(1e-12));
    CHECK(closed_form_mp(table_iii(), 0.37, 10.0, 1) == doctest::Approx(0.37));
    // 0.6 (1 + e^-0.3) crosses threshold at n = 2, so n = 3 is invalid.
    CHECK_THROWS_AS(closed_form_mp(table_iii(), 0.6, 10.0, 3), domain_error);
    CHECK_THROWS_AS(closed_form_mp(table_iii(), 0.5, 0.0, 1), domain_error);
    CHECK_THROWS_AS(closed_form_mp(table_iii(), 0.5, 10.0, 0), domain_error);
}

TEST_CASE("property: exact decay over k steps equals one combined decay")
{
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u01(0.05, 0.95);
    for (int trial = 0; trial < 50; ++trial) {
        NeuronParams p;
        p.c_m = 0.2 + u01(rng) * 4.0;
        p.g_l = u01(rng) * 5.0;
        p.v_th = 1e12;  // keep sub-threshold
        const double w = u01(rng);
        const double dt = 0.01;
        const int k = 200;

        std::vector<double> charge(static_cast<std::size_t>(k), 0.0);
        charge[0] = w;
        const RunOutput out = run(p, charge, dt, k * dt);
        for (int j = 0; j < k; ++j) {
            const double expect =
                (w / p.c_m) * std::exp(-static_cast<double>(j) * dt * p.g_l / p.c_m);
            CHECK(out.trace.potential[static_cast<std::size_t>(j)] ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: stepped potential matches closed_form_mp on aligned grids")
{
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double dt = 0.01;
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint32_t period_steps = 2 + static_cast<std::uint32_t>(u01(rng) * 38);
        const double f_in = 1.0 / (period_steps * dt);
        NeuronParams p;
        p.c_m = 0.2 + u01(rng) * 4.0;
        p.g_l = u01(rng) * 5.0;
        p.v_th = 1e12;
        const double w = 0.05 + u01(rng);

        const std::uint32_t n_spikes = 20;
        const std::uint32_t n_steps = period_steps * n_spikes;
        std::vector<double> charge(n_steps, 0.0);
        for (std::uint32_t j = 1; j <= n_spikes; ++j) {
            charge[j * period_steps - 1] = w;
        }
        const RunOutput out = run(p, charge, dt, n_steps * dt);
        for (std::uint32_t j = 1; j <= n_spikes; ++j) {
            const double expect = closed_form_mp(p, w, f_in, j);
            CHECK(std::abs(out.trace.potential[j * period_steps - 1] - expect) <= 1e-9);
        }
    }
}

TEST_CASE("property: soft reset conserves rate for the pure integrator")
{
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    CodingConfig cfg;  // T = 3 s
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(u01(rng) * 89);
        const double f = n / cfg.t_window;
        const double w = 0.05 + 0.9 * u01(rng);

        const SpikeTrain input = encode(f, cfg);
        std::vector<double> charge(input.n_steps, 0.0);
        for (auto e : input.events) {
            charge[e] = w;
        }
        const RunOutput out = run(integrator(), charge, cfg.dt, cfg.t_window);
        const double expected = w * f;  // v_th = c_m = 1
        CHECK(std::abs(decode(out.train) - expected) < 1.0 / cfg.t_window);
    }
}

TEST_CASE("property: linear reset never fires fewer spikes than reset-to-zero")
{
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::uint32_t n_steps = 300;
        std::vector<double> charge(n_steps, 0.0);
        for (auto& c : charge) {
            if (u01(rng) < 0.2) {
                c = u01(rng) * 2.0;  // occasionally above-threshold volleys
            }
        }
        NeuronParams p;
        p.c_m = 1.0;
        p.g_l = u01(rng) * 4.0;
        p.v_th = 0.5 + u01(rng);

        p.reset_mode = ResetMode::LinearReset;
        const auto linear = run(p, charge, 0.01, 3.0);
        p.reset_mode = ResetMode::ResetToZero;
        const auto zero = run(p, charge, 0.01, 3.0);
        CHECK(linear.train.events.size() >= zero.train.events.size());
    }
}

TEST_CASE("determinism: identical runs produce identical traces")
{
    CodingConfig cfg;
    const SpikeTrain input = encode(7.0, cfg);
    std::vector<double> charge(input.n_steps, 0.0);
    for (auto e : input.events) {
        charge[e] = 0.45;
    }
    const RunOutput a = run(table_iii(), charge, cfg.dt, cfg.t_window);
    const RunOutput b = run(table_iii(), charge, cfg.dt, cfg.t_window);
    CHECK(a.train.events == b.train.events);
    CHECK(a.trace.potential == b.trace.potential);
}
