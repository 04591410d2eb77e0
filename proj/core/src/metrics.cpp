#include "lifmap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lifmap/errors.hpp"
#include "text_util.hpp"

namespace lifmap {

namespace {

double mean_of(std::span<const double> x)
{
    double sum = 0.0;
    for (double v : x) {
        sum += v;
    }
    return sum / static_cast<double>(x.size());
}

bool has_variance(std::span<const double> x)
{
    for (double v : x) {
        if (v != x[0]) {
            return true;
        }
    }
    return false;
}

/// Symmetric correlation matrix over the rows of `series`.
Matrix pairwise_correlations(const std::vector<std::vector<double>>& series)
{
    const std::size_t n = series.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double rho = correlation(series[i], series[j]);
            m.at(i, j) = rho;
            m.at(j, i) = rho;
        }
    }
    return m;
}

nlohmann::json matrix_to_json(const Matrix& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols; ++c) {
            row.push_back(m.at(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

double correlation(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw domain_error("correlation: length mismatch");
    }
    if (x.size() < 2) {
        throw domain_error("correlation: need at least two samples");
    }
    if (!has_variance(x) || !has_variance(y)) {
        throw undefined_correlation("correlation: zero-variance series");
    }

    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

CorrelationMatrices correlation_matrices(const Matrix& ann_outputs,
                                         const Matrix& snn_outputs)
{
    if (ann_outputs.rows != snn_outputs.rows || ann_outputs.cols != snn_outputs.cols) {
        throw shape_error("correlation_matrices: output matrices must match in shape");
    }
    const std::size_t n_data = ann_outputs.rows;
    const std::size_t n_neurons = ann_outputs.cols;

    CorrelationMatrices out;

    // Neuron dimension: each series is one neuron's response across data.
    // Zero-variance neurons are excluded and reported, mirroring the manual
    // removal the analysis calls for.
    std::vector<std::vector<double>> ann_profiles(n_neurons);
    std::vector<std::vector<double>> snn_profiles(n_neurons);
    for (std::size_t j = 0; j < n_neurons; ++j) {
        ann_profiles[j].resize(n_data);
        snn_profiles[j].resize(n_data);
        for (std::size_t i = 0; i < n_data; ++i) {
            ann_profiles[j][i] = ann_outputs.at(i, j);
            snn_profiles[j][i] = snn_outputs.at(i, j);
        }
    }
    for (std::size_t j = 0; j < n_neurons; ++j) {
        const bool ann_flat = n_data < 2 || !has_variance(ann_profiles[j]);
        const bool snn_flat = n_data < 2 || !has_variance(snn_profiles[j]);
        if (ann_flat) {
            out.excluded.push_back({"ann", j});
        }
        if (snn_flat) {
            out.excluded.push_back({"snn", j});
        }
        if (!ann_flat && !snn_flat) {
            out.kept_neurons.push_back(j);
        }
    }
    std::vector<std::vector<double>> neuron_series;
    neuron_series.reserve(2 * out.kept_neurons.size());
    for (std::size_t j : out.kept_neurons) {
        neuron_series.push_back(std::move(ann_profiles[j]));
    }
    for (std::size_t j : out.kept_neurons) {
        neuron_series.push_back(std::move(snn_profiles[j]));
    }
    out.neuron_dim = pairwise_correlations(neuron_series);

    // Data dimension: each series is one datum's response across neurons.
    std::vector<std::vector<double>> ann_rows(n_data);
    std::vector<std::vector<double>> snn_rows(n_data);
    for (std::size_t i = 0; i < n_data; ++i) {
        ann_rows[i].assign(ann_outputs.values.begin() + static_cast<std::ptrdiff_t>(i * n_neurons),
                           ann_outputs.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_neurons));
        snn_rows[i].assign(snn_outputs.values.begin() + static_cast<std::ptrdiff_t>(i * n_neurons),
                           snn_outputs.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_neurons));
    }
    for (std::size_t i = 0; i < n_data; ++i) {
        const bool ann_flat = n_neurons < 2 || !has_variance(ann_rows[i]);
        const bool snn_flat = n_neurons < 2 || !has_variance(snn_rows[i]);
        if (ann_flat) {
            out.excluded.push_back({"ann-datum", i});
        }
        if (snn_flat) {
            out.excluded.push_back({"snn-datum", i});
        }
        if (!ann_flat && !snn_flat) {
            out.kept_data.push_back(i);
        }
    }
    std::vector<std::vector<double>> data_series;
    data_series.reserve(2 * out.kept_data.size());
    for (std::size_t i : out.kept_data) {
        data_series.push_back(std::move(ann_rows[i]));
    }
    for (std::size_t i : out.kept_data) {
        data_series.push_back(std::move(snn_rows[i]));
    }
    out.data_dim = pairwise_correlations(data_series);

    return out;
}

double ConfusionMatrix::agreement() const
{
    std::uint64_t total = 0;
    std::uint64_t diag = 0;
    for (std::size_t r = 0; r < n_classes; ++r) {
        for (std::size_t c = 0; c < n_classes; ++c) {
            total += at(r, c);
            if (r == c) {
                diag += at(r, c);
            }
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(diag) / static_cast<double>(total);
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> reference,
                                 std::span<const std::size_t> predicted,
                                 std::size_t n_classes)
{
    if (reference.size() != predicted.size()) {
        throw domain_error("confusion_matrix: label lists must have equal length");
    }
    ConfusionMatrix m;
    m.n_classes = n_classes;
    m.counts.assign(n_classes * n_classes, 0);
    for (std::size_t i = 0; i < reference.size(); ++i) {
        if (reference[i] >= n_classes || predicted[i] >= n_classes) {
            throw domain_error("confusion_matrix: label out of range");
        }
        m.at(reference[i], predicted[i]) += 1;
    }
    return m;
}

double quantization_bound(double t_window)
{
    if (!(t_window > 0.0)) {
        throw domain_error("quantization_bound: t_window must be positive");
    }
    return 1.0 / t_window;
}

ErrorReport error_report(std::span<const double> expected_rates,
                         std::span<const double> decoded_rates, double t_window)
{
    if (expected_rates.size() != decoded_rates.size()) {
        throw domain_error("error_report: rate lists must have equal length");
    }
    ErrorReport report;
    report.bound = quantization_bound(t_window);
    report.abs_errors.resize(expected_rates.size());
    for (std::size_t i = 0; i < expected_rates.size(); ++i) {
        report.abs_errors[i] = std::abs(expected_rates[i] - decoded_rates[i]);
        if (report.abs_errors[i] > report.bound) {
            report.violations.push_back(i);
        }
    }
    return report;
}

std::string equivalence_report_to_json(const EquivalenceReport& report)
{
    nlohmann::json doc;
    doc["mean_correlation"] = report.mean_correlation;
    doc["min_correlation"] = report.min_correlation;
    doc["max_correlation"] = report.max_correlation;
    doc["strong_correlation_cutoff"] = report.strong_correlation_cutoff;
    doc["label_agreement"] = report.label_agreement;
    doc["quantization_bound_hz"] = report.bound;
    doc["output_error_p50_hz"] = report.error_p50;
    doc["output_error_p90_hz"] = report.error_p90;
    doc["output_error_max_hz"] = report.error_max;

    nlohmann::json excl = nlohmann::json::array();
    for (const Exclusion& e : report.matrices.excluded) {
        excl.push_back({{"model", e.model}, {"index", e.index}});
    }
    doc["excluded_series"] = std::move(excl);
    doc["kept_neurons"] = report.matrices.kept_neurons;
    doc["data_dim_matrix"] = matrix_to_json(report.matrices.data_dim);
    doc["neuron_dim_matrix"] = matrix_to_json(report.matrices.neuron_dim);

    nlohmann::json conf = nlohmann::json::array();
    for (std::size_t r = 0; r < report.confusion.n_classes; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < report.confusion.n_classes; ++c) {
            row.push_back(report.confusion.at(r, c));
        }
        conf.push_back(std::move(row));
    }
    doc["confusion_matrix"] = std::move(conf);

    return doc.dump(2);
}

void write_matrix_csv(std::ostream& out, const Matrix& m)
{
    out << "i";
    for (std::size_t c = 0; c < m.cols; ++c) {
        out << "," << c;
    }
    out << "\n";
    for (std::size_t r = 0; r < m.rows; ++r) {
        out << r;
        for (std::size_t c = 0; c < m.cols; ++c) {
            out << "," << detail::dtos(m.at(r, c));
        }
        out << "\n";
    }
}

void save_matrix_csv(const std::string& path, const Matrix& m)
{
    std::ofstream out(path);
    if (!out) {
        throw io_error("cannot open for writing: " + path);
    }
    write_matrix_csv(out, m);
    if (!out) {
        throw io_error("write failed: " + path);
    }
}

}  // namespace lifmap
