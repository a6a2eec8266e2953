#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sddtm/grid.hpp"

namespace sddtm {

struct HistogramBin {
    double lower = 0.0;  // -inf for the lower edge bin
    double upper = 0.0;  // +inf for the upper edge bin
    std::int64_t frequency = 0;
    double log10_frequency = 0.0;  // log10(max(frequency, 1))
};

struct ResidualStats {
    double mean = 0.0;    // meters
    double median = 0.0;  // lower-middle element for even counts
    double mse = 0.0;     // meters^2
    std::int64_t count = 0;
    std::vector<HistogramBin> histogram;  // contiguous, plus two open-ended edge bins

    double rmse() const;
};

/// Per-cell difference reference - estimate. Throws ShapeMismatch.
std::vector<double> residuals(const Grid& reference, const Grid& estimate);

/// Mean, median, MSE and the binned histogram over [lo, hi) with open-ended
/// edge bins catching out-of-range residuals. Throws EmptyInput.
ResidualStats compute_stats(std::span<const double> r, double bin_width, double lo, double hi);

/// CSV with header bin_lower,bin_upper,frequency,log10_frequency; edge bin
/// bounds print as -inf / inf.
void write_histogram_csv(const ResidualStats& stats, std::ostream& out);

/// JSON block {"mean_m":..,"median_m":..,"mse_m2":..,"rmse_m":..,"count":..}.
void write_stats_json(const ResidualStats& stats, std::ostream& out);

}  // namespace sddtm
