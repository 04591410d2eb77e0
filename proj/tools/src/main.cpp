#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fixtures.hpp"
#include "lifmap/coding.hpp"
#include "lifmap/errors.hpp"
#include "lifmap/metrics.hpp"
#include "lifmap/network.hpp"
#include "lifmap/neuron.hpp"
#include "lifmap/relu_map.hpp"
#include "lifmap/spike_train.hpp"
#include "lifmap/weights.hpp"

namespace fs = std::filesystem;
using namespace lifmap;

namespace {

std::string dtos(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct GlobalOpts {
    double dt = 0.01;
    double t_window = 3.0;
    double range_scale = 1.0;
    std::uint64_t seed = 0;
    bool strict = false;
    std::string out_dir = ".";

    CodingConfig coding() const { return {dt, t_window, range_scale}; }
    SimConfig sim() const { return {dt, t_window, range_scale, seed, strict}; }
    fs::path out(const std::string& name) const
    {
        fs::create_directories(out_dir);
        return fs::path(out_dir) / name;
    }
};

std::ofstream open_out(const fs::path& path)
{
    std::ofstream f(path);
    if (!f) {
        throw io_error("cannot open for writing: " + path.string());
    }
    return f;
}

// "f:w" pairs from repeated --input flags.
struct InputLine {
    double frequency_hz = 0.0;
    double weight = 0.0;
};

InputLine parse_input_line(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw CLI::ValidationError("--input expects <freq_hz>:<weight>");
    }
    InputLine line;
    try {
        line.frequency_hz = std::stod(text.substr(0, colon));
        line.weight = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--input expects <freq_hz>:<weight>");
    }
    return line;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool valid = false;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    LinearFit fit;
    if (x.size() < 2) {
        return fit;
    }
    double sx = 0;
    double sy = 0;
    double sxx = 0;
    double sxy = 0;
    const auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        return fit;
    }
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.valid = true;
    return fit;
}

// Decoded output rate of one neuron fed equal-frequency inputs.
double decoded_rate(const NeuronParams& params, const std::vector<double>& weights,
                    double f_in, const CodingConfig& cfg)
{
    const SpikeTrain train = encode(f_in / cfg.range_scale, cfg);
    std::vector<SpikeTrain> ins(weights.size(), train);
    const auto charge = weighted_charge_sequence(ins, weights);
    return decode(run(params, charge, cfg.dt, cfg.t_window).train);
}

struct FrequencyResponse {
    std::vector<double> freqs;
    std::vector<double> drives;
    std::vector<double> measured;
    std::vector<double> reference;  // rectified-linear prediction
    LinearFit fit;                  // over the firing region, rate vs drive
    double min_firing_hz = -1.0;    // first grid frequency that fires
    double l2_error = 0.0;
};

FrequencyResponse frequency_response(const NeuronParams& params,
                                     const std::vector<double>& weights,
                                     const std::vector<double>& freqs,
                                     const CodingConfig& cfg)
{
    double sum_w = 0.0;
    for (double w : weights) {
        sum_w += w;
    }
    double bias = 0.0;
    try {
        bias = bias_from_params(sum_w, params);
    } catch (const domain_error&) {
        bias = std::numeric_limits<double>::quiet_NaN();
    }
    const double slope = slope_from_params(params);

    FrequencyResponse resp;
    resp.freqs = freqs;
    std::vector<double> fit_x;
    std::vector<double> fit_y;
    for (double f : freqs) {
        const double rate = decoded_rate(params, weights, f, cfg);
        const double drive = sum_w * f;
        const double ref = std::isnan(bias) ? slope * std::max(0.0, drive)
                                            : slope * std::max(0.0, drive + bias);
        resp.drives.push_back(drive);
        resp.measured.push_back(rate);
        resp.reference.push_back(ref);
        resp.l2_error += (rate - ref) * (rate - ref);
        if (rate > 0.0) {
            if (resp.min_firing_hz < 0.0) {
                resp.min_firing_hz = f;
            }
            fit_x.push_back(drive);
            fit_y.push_back(rate);
        }
    }
    resp.l2_error = std::sqrt(resp.l2_error);
    resp.fit = fit_line(fit_x, fit_y);
    return resp;
}

void write_trace_csv(const fs::path& path, const MembraneTrace& trace)
{
    auto out = open_out(path);
    out << "step,time_s,potential,spike\n";
    std::size_t next_fire = 0;
    for (std::size_t i = 0; i < trace.potential.size(); ++i) {
        const bool fired = next_fire < trace.fires.size() && trace.fires[next_fire] == i;
        if (fired) {
            ++next_fire;
        }
        out << i << "," << dtos((static_cast<double>(i) + 1.0) * trace.dt) << ","
            << dtos(trace.potential[i]) << "," << (fired ? 1 : 0) << "\n";
    }
}

// ---- subcommand implementations ----

struct NeuronArgs {
    double c_m = 1.0;
    double g_l = 3.0;
    double v_th = 1.0;
    std::vector<std::string> inputs;
};

void cmd_neuron(const GlobalOpts& g, const NeuronArgs& args)
{
    const CodingConfig cfg = g.coding();
    std::vector<SpikeTrain> trains;
    std::vector<double> weights;
    for (const std::string& text : args.inputs) {
        const InputLine line = parse_input_line(text);
        trains.push_back(encode(line.frequency_hz / cfg.range_scale, cfg));
        weights.push_back(line.weight);
    }
    const auto charge = trains.empty() ? std::vector<double>(cfg.n_steps(), 0.0)
                                       : weighted_charge_sequence(trains, weights);

    NeuronParams params;
    params.c_m = args.c_m;
    params.g_l = args.g_l;
    params.v_th = args.v_th;
    for (ResetMode mode : {ResetMode::LinearReset, ResetMode::ResetToZero}) {
        params.reset_mode = mode;
        const char* tag = mode == ResetMode::LinearReset ? "linear" : "zero";
        const RunOutput out = run(params, charge, cfg.dt, cfg.t_window);
        write_trace_csv(g.out(std::string("neuron_trace_") + tag + ".csv"), out.trace);
        save_spike_train(g.out(std::string("neuron_train_") + tag + ".txt").string(),
                         out.train);
        std::cout << tag << ": " << out.train.events.size() << " spikes, "
                  << dtos(decode(out.train)) << " Hz\n";
    }
}

struct SweepArgs {
    std::string axis = "f_in";
    std::vector<double> values;
    std::vector<double> weights = {0.3, 0.2};
    double c_m = 1.0;
    double g_l = 3.0;
    double v_th = 1.0;
    double f_lo = 1.0;
    double f_hi = 30.0;
    double f_step = 1.0;
};

void cmd_sweep(const GlobalOpts& g, const SweepArgs& args)
{
    if (args.values.empty()) {
        throw domain_error("sweep: --values must not be empty");
    }
    std::vector<double> inner;
    for (double f = args.f_lo; f <= args.f_hi + 1e-9; f += args.f_step) {
        inner.push_back(f);
    }

    auto out = open_out(g.out("sweep.csv"));
    out << "schema=1\n";
    out << "axis,value,reset_mode,measured_rate_hz,relu_rate_hz,measured_slope,"
           "predicted_slope,measured_min_freq_hz,predicted_min_freq_hz,"
           "predicted_bias_hz,l2_error_hz\n";

    for (double value : args.values) {
        for (ResetMode mode : {ResetMode::LinearReset, ResetMode::ResetToZero}) {
            NeuronParams params;
            params.c_m = args.c_m;
            params.g_l = args.g_l;
            params.v_th = args.v_th;
            params.reset_mode = mode;
            CodingConfig cfg = g.coding();
            cfg.range_scale = 1.0;

            std::vector<double> freqs = inner;
            if (args.axis == "f_in") {
                freqs = args.values;
            } else if (args.axis == "g_l") {
                params.g_l = value;
            } else if (args.axis == "c_m") {
                params.c_m = value;
            } else if (args.axis == "t_window") {
                cfg.t_window = value;
            } else if (args.axis == "range_scale") {
                // The inner grid becomes unit inputs scaled to [0, value] Hz.
                freqs.clear();
                for (double f : inner) {
                    freqs.push_back(f * value / args.f_hi);
                }
            } else {
                throw domain_error("sweep: unknown axis '" + args.axis + "'");
            }

            const FrequencyResponse resp = frequency_response(params, args.weights, freqs, cfg);
            double sum_w = 0.0;
            for (double w : args.weights) {
                sum_w += w;
            }
            double predicted_bias = std::numeric_limits<double>::quiet_NaN();
            double predicted_min = std::numeric_limits<double>::quiet_NaN();
            try {
                predicted_bias = bias_from_params(sum_w, params);
                predicted_min = min_firing_frequency(args.weights, params, cfg.t_window);
            } catch (const domain_error&) {
            }

            const char* tag = mode == ResetMode::LinearReset ? "linear" : "zero";
            const auto emit_row = [&](double axis_value, double measured_rate,
                                      double relu_rate) {
                out << args.axis << "," << dtos(axis_value) << "," << tag << ","
                    << dtos(measured_rate) << "," << dtos(relu_rate) << ","
                    << dtos(resp.fit.valid ? resp.fit.slope
                                           : std::numeric_limits<double>::quiet_NaN())
                    << "," << dtos(slope_from_params(params)) << ","
                    << dtos(resp.min_firing_hz) << "," << dtos(predicted_min) << ","
                    << dtos(predicted_bias) << "," << dtos(resp.l2_error) << "\n";
            };
            if (args.axis == "f_in") {
                // The axis is the frequency grid itself; fit statistics repeat.
                for (std::size_t i = 0; i < resp.freqs.size(); ++i) {
                    if (resp.freqs[i] == value) {
                        emit_row(value, resp.measured[i], resp.reference[i]);
                    }
                }
            } else {
                emit_row(value, std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN());
            }
        }
    }
    std::cout << "wrote " << g.out("sweep.csv").string() << "\n";
}

struct EncodeArgs {
    double x = -1.0;
    std::string decode_path;
    std::string out_name = "train.txt";
};

void cmd_encode(const GlobalOpts& g, const EncodeArgs& args)
{
    if (!args.decode_path.empty()) {
        const SpikeTrain train = load_spike_train(args.decode_path);
        std::cout << dtos(decode(train)) << "\n";
        return;
    }
    const SpikeTrain train = encode(args.x, g.coding());
    save_spike_train(g.out(args.out_name).string(), train);
    std::cout << train.events.size() << " spikes, decoded "
              << dtos(decode(train)) << " Hz\n";
}

struct MapArgs {
    std::string direction = "to-lif";
    double sum_w = 0.5;
    double bias = 0.0;
    double slope = 1.0;
    double c_m = 1.0;
    double g_l = 0.0;
    double v_th = 1.0;
};

void cmd_map(const GlobalOpts& g, const MapArgs& args)
{
    nlohmann::ordered_json doc;
    doc["sum_w"] = args.sum_w;
    if (args.direction == "to-lif") {
        ReluParams relu;
        relu.bias = args.bias;
        relu.slope = args.slope;
        const MappingResult m = params_from_relu(relu, args.sum_w, args.v_th);
        doc["direction"] = "to-lif";
        doc["bias"] = args.bias;
        doc["slope"] = args.slope;
        doc["c_m"] = m.neuron.c_m;
        doc["g_l"] = m.neuron.g_l;
        doc["v_th"] = m.neuron.v_th;
        doc["round_trip_residual"] = m.residual;
    } else if (args.direction == "to-relu") {
        NeuronParams params;
        params.c_m = args.c_m;
        params.g_l = args.g_l;
        params.v_th = args.v_th;
        const double b = bias_from_params(args.sum_w, params);
        doc["direction"] = "to-relu";
        doc["c_m"] = params.c_m;
        doc["g_l"] = params.g_l;
        doc["v_th"] = params.v_th;
        doc["bias"] = b;
        doc["slope"] = slope_from_params(params);
        doc["min_firing_hz_at_t_window"] =
            min_firing_frequency(std::vector<double>{args.sum_w}, params, g.t_window);
    } else {
        throw domain_error("map: direction must be to-lif or to-relu");
    }
    // Both sign readings of the printed mapping table are logged; the stored
    // bias is the signed offset (negative), its magnitude the firing floor.
    if (doc.contains("bias")) {
        doc["bias_magnitude"] = std::abs(doc["bias"].get<double>());
    }
    const std::string text = doc.dump(2);
    open_out(g.out("map.json")) << text << "\n";
    std::cout << text << "\n";
}

struct ConvertArgs {
    std::string spec_path;
    std::string weights_path;
    std::string mode = "zero-bias";
    std::string out_name = "snn.json";
    double g_l_const = 0.0;
    double v_th = 1.0;
};

void cmd_convert(const GlobalOpts& g, const ConvertArgs& args)
{
    const NetworkSpec ann = read_network_spec(args.spec_path);
    const WeightsBundle weights = load_weights(args.weights_path);
    ConvertMode mode;
    if (args.mode == "zero-bias") {
        mode = ConvertMode::ZeroBias;
    } else if (args.mode == "bias-to-conductance") {
        mode = ConvertMode::BiasToConductance;
    } else {
        throw domain_error("convert: mode must be zero-bias or bias-to-conductance");
    }
    ConvertOptions opts;
    opts.v_th = args.v_th;
    opts.zero_bias_g_l = args.g_l_const;
    const NetworkSpec snn = convert(ann, weights, mode, opts);
    write_network_spec(g.out(args.out_name).string(), snn);
    std::cout << "wrote " << g.out(args.out_name).string() << "\n";
}

struct RunArgs {
    std::string spec_path;
    std::string weights_path;
    std::string input_path;
    std::string out_name = "run.json";
};

void cmd_run(const GlobalOpts& g, const RunArgs& args)
{
    const NetworkSpec spec = read_network_spec(args.spec_path);
    const WeightsBundle weights = load_weights(args.weights_path);
    const std::vector<double> input =
        cli::read_sample(args.input_path, spec.input_shape.size());

    const SimConfig cfg = g.sim();
    const RunResult result = spec.spiking ? run_snn(spec, weights, input, cfg)
                                          : ann_forward(spec, weights, input, cfg);

    nlohmann::ordered_json doc;
    doc["model"] = spec.spiking ? "snn" : "ann";
    doc["label"] = result.label;
    doc["output_counts"] = result.output_counts;
    nlohmann::ordered_json layers = nlohmann::ordered_json::array();
    for (const auto& rates : result.layer_outputs) {
        layers.push_back(rates);
    }
    doc["layer_outputs"] = std::move(layers);
    const std::string text = doc.dump(2);
    open_out(g.out(args.out_name)) << text << "\n";
    std::cout << "label " << result.label << "\n";
}

struct CompareArgs {
    std::string ann_path;
    std::string snn_path;
    std::string weights_path;
    std::string dataset_dir;
    std::size_t limit = 0;
};

void cmd_compare(const GlobalOpts& g, const CompareArgs& args)
{
    const NetworkSpec ann = read_network_spec(args.ann_path);
    const NetworkSpec snn = read_network_spec(args.snn_path);
    const WeightsBundle weights = load_weights(args.weights_path);
    const cli::Dataset ds =
        cli::read_dataset(args.dataset_dir, ann.input_shape.size(), args.limit);

    const EquivalenceReport report =
        compare_networks(ann, snn, weights, ds.samples, g.sim());
    open_out(g.out("compare_report.json")) << equivalence_report_to_json(report) << "\n";
    save_matrix_csv(g.out("compare_data_dim.csv").string(), report.matrices.data_dim);
    save_matrix_csv(g.out("compare_neuron_dim.csv").string(), report.matrices.neuron_dim);
    std::cout << "mean correlation " << dtos(report.mean_correlation)
              << ", label agreement " << dtos(report.label_agreement) << "\n";
}

struct ErrorScanArgs {
    std::vector<double> t_windows = {1.0, 3.0, 10.0};
    std::string ann_path;
    std::string snn_path;
    std::string weights_path;
    std::string dataset_dir;
    std::size_t limit = 0;
    std::size_t cases = 200;
};

void cmd_error_scan(const GlobalOpts& g, const ErrorScanArgs& args)
{
    auto out = open_out(g.out("error_scan.csv"));
    out << "schema=1\n";
    out << "t_window_s,median_error_hz,max_error_hz,bound_hz,violations,"
           "network_disagreement\n";

    const bool with_network = !args.ann_path.empty();
    NetworkSpec ann;
    NetworkSpec snn;
    WeightsBundle weights;
    cli::Dataset ds;
    if (with_network) {
        ann = read_network_spec(args.ann_path);
        snn = read_network_spec(args.snn_path);
        weights = load_weights(args.weights_path);
        ds = cli::read_dataset(args.dataset_dir, ann.input_shape.size(), args.limit);
    }

    for (double t_window : args.t_windows) {
        std::mt19937_64 rng(g.seed + 17);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        CodingConfig cfg;
        cfg.dt = g.dt;
        cfg.t_window = t_window;

        // Equal-frequency conservation cases: pure integrator, soft reset.
        NeuronParams params;
        params.g_l = 0.0;
        std::vector<double> errors;
        std::size_t violations = 0;
        for (std::size_t i = 0; i < args.cases; ++i) {
            const int n = 1 + static_cast<int>(u01(rng) * (30.0 * t_window - 1.0));
            const double f = n / t_window;
            double w = 0.05 + 0.9 * u01(rng);
            const double prod = w * static_cast<double>(n);
            if (prod - std::floor(prod) < 1e-6) {
                w += 1e-3;  // stay off the exact firing boundary
            }
            const double rate = decoded_rate(params, {w}, f, cfg);
            const double err = std::abs(rate - w * f);
            errors.push_back(err);
            violations += err >= 1.0 / t_window;
        }
        std::sort(errors.begin(), errors.end());
        const double median = errors[errors.size() / 2];
        const double worst = errors.back();

        double disagreement = std::numeric_limits<double>::quiet_NaN();
        if (with_network) {
            SimConfig cfg_net = g.sim();
            cfg_net.t_window = t_window;
            std::size_t differ = 0;
            for (const auto& x : ds.samples) {
                differ += ann_forward(ann, weights, x, cfg_net).label !=
                          run_snn(snn, weights, x, cfg_net).label;
            }
            disagreement = static_cast<double>(differ) /
                           static_cast<double>(ds.samples.size());
        }

        out << dtos(t_window) << "," << dtos(median) << "," << dtos(worst) << ","
            << dtos(1.0 / t_window) << "," << violations << ","
            << dtos(disagreement) << "\n";
    }
    std::cout << "wrote " << g.out("error_scan.csv").string() << "\n";
}

struct FixtureArgs {
    std::string kind = "mlp";
    std::size_t samples = 20;
    std::size_t hidden = 0;
};

void cmd_gen_fixture(const GlobalOpts& g, const FixtureArgs& args)
{
    const cli::FixturePaths paths =
        cli::generate_fixture(args.kind, g.out_dir, g.seed, args.samples, args.hidden);
    std::cout << "spec     " << paths.spec_path << "\n"
              << "weights  " << paths.weights_path << "\n"
              << "dataset  " << paths.dataset_dir << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Linear LIF spiking toolkit: simulation, parameter mapping and "
                 "differential evaluation against rectifier reference models"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    GlobalOpts g;
    app.add_option("--dt", g.dt, "Grid step in seconds");
    app.add_option("--t-window", g.t_window, "Simulation window in seconds");
    app.add_option("--range-scale", g.range_scale, "Hz per unit input");
    app.add_option("--seed", g.seed, "Random seed for fixtures and scans");
    app.add_flag("--strict", g.strict, "Reject inputs outside [0,1]");
    app.add_option("--out-dir", g.out_dir, "Directory for output files");

    NeuronArgs neuron_args;
    auto* neuron = app.add_subcommand("neuron", "Simulate one neuron in both reset modes");
    neuron->add_option("--c-m", neuron_args.c_m, "Membrane capacitance");
    neuron->add_option("--g-l", neuron_args.g_l, "Membrane conductance");
    neuron->add_option("--v-th", neuron_args.v_th, "Spiking threshold");
    neuron->add_option("--input", neuron_args.inputs, "Input as <freq_hz>:<weight>");
    neuron->callback([&] { cmd_neuron(g, neuron_args); });

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep with rectifier predictions");
    sweep->add_option("--axis", sweep_args.axis, "f_in, g_l, c_m, range_scale or t_window");
    sweep->add_option("--values", sweep_args.values, "Axis values")->delimiter(',');
    sweep->add_option("--weights", sweep_args.weights, "Synapse weights")->delimiter(',');
    sweep->add_option("--c-m", sweep_args.c_m, "Membrane capacitance");
    sweep->add_option("--g-l", sweep_args.g_l, "Membrane conductance");
    sweep->add_option("--v-th", sweep_args.v_th, "Spiking threshold");
    sweep->add_option("--f-lo", sweep_args.f_lo, "Inner frequency grid start");
    sweep->add_option("--f-hi", sweep_args.f_hi, "Inner frequency grid end");
    sweep->add_option("--f-step", sweep_args.f_step, "Inner frequency grid step");
    sweep->callback([&] { cmd_sweep(g, sweep_args); });

    EncodeArgs encode_args;
    auto* enc = app.add_subcommand("encode", "Rate-encode a scalar, or decode a train file");
    enc->add_option("--x", encode_args.x, "Input value to encode");
    enc->add_option("--decode", encode_args.decode_path, "Train file to decode instead");
    enc->add_option("--out", encode_args.out_name, "Output train filename");
    enc->callback([&] { cmd_encode(g, encode_args); });

    MapArgs map_args;
    auto* map = app.add_subcommand("map", "Map parameters between the two neuron models");
    map->add_option("--direction", map_args.direction, "to-lif or to-relu");
    map->add_option("--sum-w", map_args.sum_w, "Weight sum of the target neuron");
    map->add_option("--bias", map_args.bias, "Rectifier bias (to-lif)");
    map->add_option("--slope", map_args.slope, "Rectifier slope (to-lif)");
    map->add_option("--c-m", map_args.c_m, "Membrane capacitance (to-relu)");
    map->add_option("--g-l", map_args.g_l, "Membrane conductance (to-relu)");
    map->add_option("--v-th", map_args.v_th, "Spiking threshold");
    map->callback([&] { cmd_map(g, map_args); });

    ConvertArgs convert_args;
    auto* conv = app.add_subcommand("convert", "Convert an ANN spec into an SNN spec");
    conv->add_option("--spec", convert_args.spec_path, "ANN spec JSON")->required();
    conv->add_option("--weights", convert_args.weights_path, "Weight manifest")->required();
    conv->add_option("--mode", convert_args.mode, "zero-bias or bias-to-conductance");
    conv->add_option("--g-l-const", convert_args.g_l_const, "Conductance in zero-bias mode");
    conv->add_option("--v-th", convert_args.v_th, "Threshold for converted neurons");
    conv->add_option("--out", convert_args.out_name, "Output spec filename");
    conv->callback([&] { cmd_convert(g, convert_args); });

    RunArgs run_args;
    auto* runc = app.add_subcommand("run", "Run one sample through a network spec");
    runc->add_option("--spec", run_args.spec_path, "Network spec JSON")->required();
    runc->add_option("--weights", run_args.weights_path, "Weight manifest")->required();
    runc->add_option("--input", run_args.input_path, "Sample tensor file")->required();
    runc->add_option("--out", run_args.out_name, "Output result filename");
    runc->callback([&] { cmd_run(g, run_args); });

    CompareArgs compare_args;
    auto* cmp = app.add_subcommand("compare", "Differential ANN/SNN evaluation report");
    cmp->add_option("--ann", compare_args.ann_path, "ANN spec JSON")->required();
    cmp->add_option("--snn", compare_args.snn_path, "SNN spec JSON")->required();
    cmp->add_option("--weights", compare_args.weights_path, "Weight manifest")->required();
    cmp->add_option("--dataset", compare_args.dataset_dir, "Dataset directory")->required();
    cmp->add_option("--limit", compare_args.limit, "Use only the first N samples");
    cmp->callback([&] { cmd_compare(g, compare_args); });

    ErrorScanArgs scan_args;
    auto* scan = app.add_subcommand("error-scan", "Quantization error against 1/T bound");
    scan->add_option("--t-windows", scan_args.t_windows, "Windows in seconds")->delimiter(',');
    scan->add_option("--cases", scan_args.cases, "Random cases per window");
    scan->add_option("--ann", scan_args.ann_path, "Optional ANN spec for disagreement");
    scan->add_option("--snn", scan_args.snn_path, "Optional SNN spec");
    scan->add_option("--weights", scan_args.weights_path, "Optional weight manifest");
    scan->add_option("--dataset", scan_args.dataset_dir, "Optional dataset directory");
    scan->add_option("--limit", scan_args.limit, "Use only the first N samples");
    scan->callback([&] { cmd_error_scan(g, scan_args); });

    FixtureArgs fixture_args;
    auto* fix = app.add_subcommand("gen-fixture", "Fabricate a synthetic network fixture");
    fix->add_option("--kind", fixture_args.kind, "mlp, convnet or blobs");
    fix->add_option("--samples", fixture_args.samples, "Dataset sample count");
    fix->add_option("--hidden", fixture_args.hidden, "Hidden width (mlp, blobs)");
    fix->callback([&] { cmd_gen_fixture(g, fixture_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
