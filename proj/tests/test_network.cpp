#include <doctest.h>

#include <cmath>
#include <random>

#include "lifmap/errors.hpp"
#include "lifmap/network.hpp"
#include "lifmap/relu_map.hpp"

using namespace lifmap;

namespace {

constexpr double kTableIIIBias = -2.1640425613334453;

WeightsBundle identity_bundle(double scale)
{
    WeightsBundle bundle;
    Tensor t;
    t.name = "fc";
    t.kind = "dense";
    t.shape = {2, 2};
    t.data = {static_cast<float>(scale), 0.0f, 0.0f, static_cast<float>(scale)};
    bundle.tensors = {t};
    return bundle;
}

NetworkSpec identity_net()
{
    NetworkSpec spec;
    spec.input_shape = {1, 1, 2};
    LayerConfig fc;
    fc.kind = LayerKind::Dense;
    fc.name = "fc";
    fc.units = 2;
    spec.layers = {fc};
    return spec;
}

struct MlpFixture {
    NetworkSpec ann;
    WeightsBundle weights;
};

MlpFixture random_mlp(std::mt19937_64& rng, std::size_t in, std::size_t hidden,
                      std::size_t out)
{
    std::uniform_real_distribution<double> uw(-0.10, 0.15);
    MlpFixture fx;
    fx.ann.input_shape = {1, 1, in};

    LayerConfig h;
    h.kind = LayerKind::Dense;
    h.name = "fc1";
    h.units = hidden;
    LayerConfig o;
    o.kind = LayerKind::Dense;
    o.name = "fc2";
    o.units = out;
    fx.ann.layers = {h, o};

    Tensor w1;
    w1.name = "fc1";
    w1.kind = "dense";
    w1.shape = {hidden, in};
    for (std::size_t i = 0; i < hidden * in; ++i) {
        w1.data.push_back(static_cast<float>(uw(rng)));
    }
    Tensor w2;
    w2.name = "fc2";
    w2.kind = "dense";
    w2.shape = {out, hidden};
    for (std::size_t i = 0; i < out * hidden; ++i) {
        w2.data.push_back(static_cast<float>(uw(rng)));
    }
    fx.weights.tensors = {w1, w2};
    return fx;
}

}  // namespace

TEST_CASE("run_snn: scaled identity network")
{
    const NetworkSpec ann = identity_net();
    const WeightsBundle weights = identity_bundle(0.6);
    const NetworkSpec snn = convert(ann, weights, ConvertMode::ZeroBias);

    SimConfig cfg;
    cfg.range_scale = 10.0;
    const std::vector<double> input = {1.0, 0.5};
    const RunResult r = run_snn(snn, weights, input, cfg);
    CHECK(r.output_counts == std::vector<std::uint64_t>{18, 9});
    CHECK(r.label == 0);
    REQUIRE(r.layer_outputs.size() == 1);
    CHECK(r.layer_outputs[0][0] == doctest::Approx(6.0));
}

TEST_CASE("run_snn: all-zero input gives the tie-break label")
{
    const NetworkSpec ann = identity_net();
    const WeightsBundle weights = identity_bundle(0.6);
    const NetworkSpec snn = convert(ann, weights, ConvertMode::ZeroBias);

    SimConfig cfg;
    cfg.range_scale = 10.0;
    const std::vector<double> input = {0.0, 0.0};
    const RunResult r = run_snn(snn, weights, input, cfg);
    CHECK(r.output_counts == std::vector<std::uint64_t>{0, 0});
    CHECK(r.label == 0);
}

TEST_CASE("run_snn: determinism and input validation")
{
    const NetworkSpec ann = identity_net();
    const WeightsBundle weights = identity_bundle(0.6);
    const NetworkSpec snn = convert(ann, weights, ConvertMode::ZeroBias);

    SimConfig cfg;
    cfg.range_scale = 10.0;
    const std::vector<double> input = {0.83, 0.21};
    const RunResult a = run_snn(snn, weights, input, cfg);
    const RunResult b = run_snn(snn, weights, input, cfg);
    CHECK(a.output_counts == b.output_counts);
    CHECK(a.layer_outputs == b.layer_outputs);

    const std::vector<double> outside = {1.4, 0.2};
    const RunResult clamped = run_snn(snn, weights, outside, cfg);
    const RunResult unit = run_snn(snn, weights, {{1.0, 0.2}}, cfg);
    CHECK(clamped.output_counts == unit.output_counts);

    cfg.strict = true;
    CHECK_THROWS_AS(run_snn(snn, weights, outside, cfg), domain_error);

    const std::vector<double> wrong = {0.5};
    CHECK_THROWS_AS(run_snn(snn, weights, wrong, cfg), shape_error);
}

TEST_CASE("ann_forward")
{
    SUBCASE("identity single layer labels the larger input")
    {
        const NetworkSpec ann = identity_net();
        const WeightsBundle weights = identity_bundle(1.0);
        SimConfig cfg;
        cfg.range_scale = 1.0;
        const RunResult r = ann_forward(ann, weights, {{0.2, 0.7}}, cfg);
        CHECK(r.label == 1);
        CHECK(r.output_counts.empty());
    }

    SUBCASE("the two-input neuron of the single-neuron experiments")
    {
        NetworkSpec ann;
        ann.input_shape = {1, 1, 2};
        LayerConfig fc;
        fc.kind = LayerKind::Dense;
        fc.name = "fc";
        fc.units = 1;
        fc.relu.bias = -2.16;
        fc.relu.slope = 1.0;
        ann.layers = {fc};

        WeightsBundle weights;
        Tensor t;
        t.name = "fc";
        t.kind = "dense";
        t.shape = {1, 2};
        t.data = {0.3f, 0.2f};
        weights.tensors = {t};

        SimConfig cfg;
        cfg.range_scale = 20.0;  // unit inputs arrive as 20 Hz rates
        const RunResult r = ann_forward(ann, weights, {{1.0, 1.0}}, cfg);
        // Weights pass through the f32 manifest dtype, hence the tolerance.
        CHECK(r.layer_outputs[0][0] == doctest::Approx(7.84).epsilon(1e-6));
    }

    SUBCASE("zero input, zero bias labels index zero")
    {
        const NetworkSpec ann = identity_net();
        const WeightsBundle weights = identity_bundle(1.0);
        SimConfig cfg;
        const RunResult r = ann_forward(ann, weights, {{0.0, 0.0}}, cfg);
        CHECK(r.label == 0);
        CHECK(r.layer_outputs[0] == std::vector<double>{0.0, 0.0});
    }
}

TEST_CASE("convert: zero-bias mapping fixes c_m from the slope")
{
    std::mt19937_64 rng(31);
    const MlpFixture fx = random_mlp(rng, 6, 4, 3);
    const NetworkSpec snn = convert(fx.ann, fx.weights, ConvertMode::ZeroBias);
    CHECK(snn.spiking);
    REQUIRE(snn.layers.size() == 2);
    for (const LayerConfig& layer : snn.layers) {
        CHECK(layer.neuron.c_m == doctest::Approx(1.0));
        CHECK(layer.neuron.g_l == 0.0);
        CHECK(layer.neuron.reset_mode == ResetMode::LinearReset);
        CHECK(layer.per_unit.empty());
    }

    // Structural equivalence: same layers, same shapes, untouched weights.
    const auto ann_shapes = fx.ann.layer_shapes();
    const auto snn_shapes = snn.layer_shapes();
    CHECK(ann_shapes == snn_shapes);

    NetworkSpec biased = fx.ann;
    biased.layers[0].relu.bias = -0.5;
    CHECK_THROWS_AS(convert(biased, fx.weights, ConvertMode::ZeroBias), domain_error);
}

TEST_CASE("convert: bias-to-conductance derives per-neuron leak")
{
    NetworkSpec ann;
    ann.input_shape = {1, 1, 2};
    LayerConfig fc;
    fc.kind = LayerKind::Dense;
    fc.name = "fc";
    fc.units = 1;
    fc.relu.bias = kTableIIIBias;
    fc.relu.slope = 1.0;
    ann.layers = {fc};

    WeightsBundle weights;
    Tensor t;
    t.name = "fc";
    t.kind = "dense";
    t.shape = {1, 2};
    t.data = {0.3f, 0.2f};
    weights.tensors = {t};

    const NetworkSpec snn = convert(ann, weights, ConvertMode::BiasToConductance);
    REQUIRE(snn.layers[0].per_unit.size() == 1);
    // f32 weight storage bounds the round-trip here, not the mapping itself.
    CHECK(snn.layers[0].per_unit[0].g_l == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(snn.layers[0].per_unit[0].c_m == doctest::Approx(1.0));

    // A weight row summing past v_th * c_m cannot carry a bias.
    Tensor heavy = t;
    heavy.data = {0.9f, 0.3f};
    WeightsBundle bad;
    bad.tensors = {heavy};
    CHECK_THROWS_AS(convert(ann, bad, ConvertMode::BiasToConductance), domain_error);
}

TEST_CASE("network spec JSON round-trip")
{
    NetworkSpec spec;
    spec.input_shape = {8, 8, 1};
    LayerConfig conv;
    conv.kind = LayerKind::Conv;
    conv.name = "conv1";
    conv.filters = 4;
    conv.kernel_h = 3;
    conv.kernel_w = 3;
    conv.stride = 1;
    conv.padding = 0;
    LayerConfig pool;
    pool.kind = LayerKind::MaxPool;
    pool.name = "pool1";
    pool.window_h = 2;
    pool.window_w = 2;
    pool.stride = 2;
    LayerConfig flat;
    flat.kind = LayerKind::Flatten;
    flat.name = "flatten";
    LayerConfig fc;
    fc.kind = LayerKind::Dense;
    fc.name = "fc";
    fc.units = 10;
    fc.per_unit.push_back(NeuronParams{});
    fc.per_unit.resize(10, NeuronParams{});
    spec.layers = {conv, pool, flat, fc};

    const std::string text = network_spec_to_json(spec);
    const NetworkSpec back = parse_network_spec(text);
    CHECK(network_spec_to_json(back) == text);
    CHECK(back.layers.size() == 4);
    CHECK(back.layers[0].kind == LayerKind::Conv);
    CHECK(back.layers[3].per_unit.size() == 10);

    CHECK_THROWS_AS(parse_network_spec("{\"format_version\":1}"), manifest_error);
    CHECK_THROWS_AS(parse_network_spec("not json"), manifest_error);
}

TEST_CASE("network validation catches shape problems")
{
    NetworkSpec spec;
    spec.input_shape = {4, 4, 1};
    LayerConfig fc;
    fc.kind = LayerKind::Dense;
    fc.name = "fc";
    fc.units = 3;
    spec.layers = {fc};
    CHECK_THROWS_AS(spec.validate(), shape_error);  // dense on an unflattened volume

    LayerConfig flat;
    flat.kind = LayerKind::Flatten;
    spec.layers = {flat, fc};
    CHECK_NOTHROW(spec.validate());

    LayerConfig dup = fc;
    spec.layers = {flat, fc, dup};
    CHECK_THROWS_AS(spec.validate(), shape_error);  // duplicate tensor name
}

TEST_CASE("behavioral equivalence tightens with the window")
{
    std::mt19937_64 rng(33);
    const MlpFixture fx = random_mlp(rng, 8, 6, 3);
    const NetworkSpec snn = convert(fx.ann, fx.weights, ConvertMode::ZeroBias);

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<std::vector<double>> inputs;
    for (int i = 0; i < 10; ++i) {
        std::vector<double> x(8);
        for (double& v : x) {
            v = u01(rng);
        }
        inputs.push_back(std::move(x));
    }

    std::vector<double> medians;
    for (double t_window : {1.0, 3.0, 10.0}) {
        SimConfig cfg;
        cfg.t_window = t_window;
        cfg.range_scale = 10.0;
        std::vector<double> errors;
        for (const auto& x : inputs) {
            const RunResult a = ann_forward(fx.ann, fx.weights, x, cfg);
            const RunResult s = run_snn(snn, fx.weights, x, cfg);
            for (std::size_t li = 0; li < a.layer_outputs.size(); ++li) {
                double worst = 0.0;
                for (std::size_t j = 0; j < a.layer_outputs[li].size(); ++j) {
                    worst = std::max(worst, std::abs(a.layer_outputs[li][j] -
                                                     s.layer_outputs[li][j]));
                }
                errors.push_back(worst);
            }
        }
        std::sort(errors.begin(), errors.end());
        medians.push_back(errors[errors.size() / 2]);
    }
    CHECK(medians[1] <= medians[0] + 1e-12);
    CHECK(medians[2] <= medians[1] + 1e-12);
}

TEST_CASE("label stability: longer windows never lose agreement statistically")
{
    std::mt19937_64 rng(34);
    const MlpFixture fx = random_mlp(rng, 8, 6, 3);
    const NetworkSpec snn = convert(fx.ann, fx.weights, ConvertMode::ZeroBias);

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const std::size_t n = 40;
    std::vector<std::vector<double>> inputs;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(8);
        for (double& v : x) {
            v = u01(rng);
        }
        inputs.push_back(std::move(x));
    }

    std::vector<double> agreement;
    for (double t_window : {1.0, 3.0, 10.0}) {
        SimConfig cfg;
        cfg.t_window = t_window;
        cfg.range_scale = 10.0;
        std::size_t agree = 0;
        for (const auto& x : inputs) {
            agree += ann_forward(fx.ann, fx.weights, x, cfg).label ==
                     run_snn(snn, fx.weights, x, cfg).label;
        }
        agreement.push_back(static_cast<double>(agree) / static_cast<double>(n));
    }
    // One-sided 95% tolerance on the binomial difference.
    const double slack = 1.645 * std::sqrt(0.25 / static_cast<double>(n));
    CHECK(agreement[1] >= agreement[0] - slack);
    CHECK(agreement[2] >= agreement[1] - slack);
}

TEST_CASE("compare_networks on an MLP fixture")
{
    std::mt19937_64 rng(35);
    MlpFixture fx = random_mlp(rng, 16, 12, 4);
    // Rescale the output layer so spike counts dominate tie-break noise.
    for (float& w : fx.weights.tensors[1].data) {
        w *= 4.0f;
    }
    const NetworkSpec snn = convert(fx.ann, fx.weights, ConvertMode::ZeroBias);

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<std::vector<double>> inputs;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> x(16);
        for (double& v : x) {
            v = u01(rng);
        }
        inputs.push_back(std::move(x));
    }

    SimConfig cfg;
    cfg.range_scale = 10.0;
    cfg.t_window = 10.0;
    const EquivalenceReport report = compare_networks(fx.ann, snn, fx.weights, inputs, cfg);
    CHECK(report.mean_correlation >= 0.9);
    CHECK(report.label_agreement >= 0.8);
    CHECK(report.bound == doctest::Approx(0.1));
    CHECK(report.confusion.n_classes == 4);
}
