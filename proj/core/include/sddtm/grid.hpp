#pragma once

#include <cstddef>
#include <vector>

namespace sddtm {

/// A regular elevation raster. Values are stored row-major with the top
/// raster row first, so cell (r, c) lives at index p = r * cols + c and the
/// in-memory order matches the on-disk order of an ESRI ASCII grid.
struct Grid {
    int rows = 0;
    int cols = 0;
    double cell_size = 1.0;   // meters per cell edge
    double x_origin = 0.0;    // lower-left corner, source CRS
    double y_origin = 0.0;
    std::vector<double> values;

    int size() const { return rows * cols; }

    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }

    bool same_shape(const Grid& other) const {
        return rows == other.rows && cols == other.cols;
    }

    /// Copy with the same dimensions and georeferencing but different values.
    Grid with_values(std::vector<double> v) const {
        Grid g = *this;
        g.values = std::move(v);
        return g;
    }
};

/// Throws if the grid violates its invariants (positive dimensions, value
/// count rows*cols, all values finite, positive cell size).
void validate_grid(const Grid& g);

}  // namespace sddtm
