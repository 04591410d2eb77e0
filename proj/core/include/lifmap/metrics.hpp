#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lifmap {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// Pearson correlation coefficient. Computed with the centered two-pass
/// formula; the raw-moment form is the documented semantics only.
/// Throws undefined_correlation when either series has zero variance,
/// domain_error on length mismatch or fewer than two samples.
double correlation(std::span<const double> x, std::span<const double> y);

/// Zero-variance series removed before building a correlation matrix.
/// model is "ann" or "snn"; index is the column (neuron) or row (datum).
struct Exclusion {
    std::string model;
    std::size_t index = 0;
};

/// Correlation matrices over joint [ann | snn] blocks.
/// data_dim correlates per-datum response vectors (across neurons);
/// neuron_dim correlates per-neuron response profiles (across data).
/// Rows/cols 0..n-1 are the ANN block, n..2n-1 the SNN block.
struct CorrelationMatrices {
    Matrix data_dim;
    Matrix neuron_dim;
    std::vector<Exclusion> excluded;
    std::vector<std::size_t> kept_neurons;  // neuron indices kept in neuron_dim
    std::vector<std::size_t> kept_data;     // datum indices kept in data_dim
};

/// Inputs are data x neuron response matrices of equal shape.
CorrelationMatrices correlation_matrices(const Matrix& ann_outputs,
                                         const Matrix& snn_outputs);

struct ConfusionMatrix {
    std::size_t n_classes = 0;
    std::vector<std::uint64_t> counts;  // row-major [reference][predicted]

    std::uint64_t& at(std::size_t ref, std::size_t pred)
    {
        return counts[ref * n_classes + pred];
    }
    std::uint64_t at(std::size_t ref, std::size_t pred) const
    {
        return counts[ref * n_classes + pred];
    }
    double agreement() const;  // trace / total
};

ConfusionMatrix confusion_matrix(std::span<const std::size_t> reference,
                                 std::span<const std::size_t> predicted,
                                 std::size_t n_classes);

/// Decoded-rate quantization bound 1 / t_window (Hz).
double quantization_bound(double t_window);

struct ErrorReport {
    std::vector<double> abs_errors;        // |expected - decoded| per neuron
    double bound = 0.0;                    // 1 / t_window
    std::vector<std::size_t> violations;   // indices with error > bound
};

ErrorReport error_report(std::span<const double> expected_rates,
                         std::span<const double> decoded_rates, double t_window);

struct EquivalenceReport {
    double mean_correlation = 0.0;  // over the cross-model data-dim diagonal
    double min_correlation = 0.0;
    double max_correlation = 0.0;
    CorrelationMatrices matrices;
    double label_agreement = 0.0;
    ConfusionMatrix confusion;
    double error_p50 = 0.0;  // output-layer |rate - activation| quantiles
    double error_p90 = 0.0;
    double error_max = 0.0;
    double bound = 0.0;  // 1 / t_window
    double strong_correlation_cutoff = 0.8;  // narrative threshold, reported only
};

std::string equivalence_report_to_json(const EquivalenceReport& report);

/// CSV: header row of column indices, then one row per matrix row with a
/// leading row index.
void write_matrix_csv(std::ostream& out, const Matrix& m);
void save_matrix_csv(const std::string& path, const Matrix& m);

}  // namespace lifmap
