#pragma once

#include <iosfwd>
#include <string>

#include "sddtm/grid.hpp"

namespace sddtm {

/// Parses an ESRI ASCII grid. Header keys (ncols, nrows, xllcorner/xllcenter,
/// yllcorner/yllcenter, cellsize, NODATA_value) are matched case-insensitively;
/// center origins are converted to corner form. Rasters must be complete:
/// any cell equal to the nodata sentinel throws NodataPresent, non-finite
/// values throw NonFiniteValue.
Grid read_ascii_grid(std::istream& in);

/// Convenience overload reading from a file path.
Grid read_ascii_grid_file(const std::string& path);

/// Writes the grid in ESRI ASCII form with header keys in the order ncols,
/// nrows, xllcorner, yllcorner, cellsize, then one raster row per line with
/// `decimals` fixed-point fractional digits (decimals in [1, 17]).
void write_ascii_grid(const Grid& g, std::ostream& out, int decimals);

void write_ascii_grid_file(const Grid& g, const std::string& path, int decimals);

}  // namespace sddtm
