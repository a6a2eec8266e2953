#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sddtm {

/// Compressed sparse row matrix with strictly increasing column indices in
/// each row and finite values.
struct CsrMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<std::int64_t> row_ptr;  // size n_rows + 1
    std::vector<int> col_idx;
    std::vector<double> vals;

    std::int64_t nnz() const { return static_cast<std::int64_t>(vals.size()); }
};

/// Forward-difference operator along grid columns for a rows x cols raster
/// flattened row-major: row p holds {-1 at p, +1 at p+1} when the cell is not
/// in the last column, and is empty (zero derivative) on the right boundary.
CsrMatrix build_diff_x(int rows, int cols);

/// Forward-difference operator along grid rows: {-1 at p, +1 at p+cols} for
/// cells not in the last row, empty rows on the bottom boundary.
CsrMatrix build_diff_y(int rows, int cols);

/// Sparse matrix-vector product with deterministic per-row accumulation in
/// ascending column order. Throws DimensionMismatch if x.size() != n_cols.
std::vector<double> spmv(const CsrMatrix& m, std::span<const double> x);

/// Assembles diag(r_diag) + lambda_p * diag(h_diag)
///             + lambda * (Cx^T Wx Cx + Cy^T Wy Cy)
/// directly as a symmetric 5-point stencil over a rows x cols grid. Throws
/// DimensionMismatch on wrong array lengths and SingularSystem when every
/// diagonal fidelity entry r_diag[p] + lambda_p * h_diag[p] is zero on a grid
/// of two or more cells (the TV part alone is singular up to constants).
CsrMatrix assemble_stencil(std::span<const double> wx, std::span<const double> wy,
                           std::span<const double> r_diag, std::span<const double> h_diag,
                           double lambda, double lambda_p, int rows, int cols);

}  // namespace sddtm
