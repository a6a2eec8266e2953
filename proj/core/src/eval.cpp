#include "sddtm/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "sddtm/errors.hpp"

namespace sddtm {

namespace {

std::string shortest(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

double ResidualStats::rmse() const { return std::sqrt(mse); }

std::vector<double> residuals(const Grid& reference, const Grid& estimate) {
    if (!reference.same_shape(estimate))
        throw ShapeMismatch("residuals: grids are " + std::to_string(reference.rows) + "x" +
                            std::to_string(reference.cols) + " vs " +
                            std::to_string(estimate.rows) + "x" + std::to_string(estimate.cols));
    std::vector<double> r(reference.values.size());
    for (std::size_t p = 0; p < r.size(); ++p)
        r[p] = reference.values[p] - estimate.values[p];
    return r;
}

ResidualStats compute_stats(std::span<const double> r, double bin_width, double lo, double hi) {
    if (r.empty()) throw EmptyInput("compute_stats: no residuals");
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be positive");
    if (!(lo < hi)) throw std::invalid_argument("range must satisfy lo < hi");

    ResidualStats stats;
    stats.count = static_cast<std::int64_t>(r.size());

    double sum = 0.0, sum_sq = 0.0;
    for (double v : r) {
        sum += v;
        sum_sq += v * v;
    }
    stats.mean = sum / static_cast<double>(r.size());
    stats.mse = sum_sq / static_cast<double>(r.size());

    // Lower-middle element for even counts.
    std::vector<double> sorted(r.begin(), r.end());
    const std::size_t mid = (sorted.size() - 1) / 2;
    std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
    stats.median = sorted[mid];

    const int n_interior =
        std::max(1, static_cast<int>(std::ceil((hi - lo) / bin_width - 1e-9)));
    const double inf = std::numeric_limits<double>::infinity();

    stats.histogram.resize(static_cast<std::size_t>(n_interior) + 2);
    stats.histogram.front() = {-inf, lo, 0, 0.0};
    for (int k = 0; k < n_interior; ++k)
        stats.histogram[k + 1] = {lo + k * bin_width, lo + (k + 1) * bin_width, 0, 0.0};
    stats.histogram.back() = {lo + n_interior * bin_width, inf, 0, 0.0};

    for (double v : r) {
        std::size_t idx;
        if (v < lo) {
            idx = 0;
        } else {
            // compare before narrowing: far outliers would overflow an int index
            const double k = std::floor((v - lo) / bin_width);
            idx = k >= static_cast<double>(n_interior) ? stats.histogram.size() - 1
                                                       : static_cast<std::size_t>(k) + 1;
        }
        ++stats.histogram[idx].frequency;
    }
    for (HistogramBin& bin : stats.histogram)
        bin.log10_frequency = std::log10(static_cast<double>(std::max<std::int64_t>(bin.frequency, 1)));
    return stats;
}

void write_histogram_csv(const ResidualStats& stats, std::ostream& out) {
    out << "bin_lower,bin_upper,frequency,log10_frequency\n";
    for (const HistogramBin& bin : stats.histogram) {
        out << shortest(bin.lower) << ',' << shortest(bin.upper) << ',' << bin.frequency << ','
            << shortest(bin.log10_frequency) << '\n';
    }
    if (!out) throw IoFailure("histogram CSV write failed");
}

void write_stats_json(const ResidualStats& stats, std::ostream& out) {
    out << "{\n"
        << "  \"mean_m\": " << shortest(stats.mean) << ",\n"
        << "  \"median_m\": " << shortest(stats.median) << ",\n"
        << "  \"mse_m2\": " << shortest(stats.mse) << ",\n"
        << "  \"rmse_m\": " << shortest(stats.rmse()) << ",\n"
        << "  \"count\": " << stats.count << "\n"
        << "}\n";
    if (!out) throw IoFailure("stats JSON write failed");
}

}  // namespace sddtm
