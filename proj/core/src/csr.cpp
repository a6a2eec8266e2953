#include "sddtm/csr.hpp"

#include <string>

#include "sddtm/errors.hpp"

namespace sddtm {

CsrMatrix build_diff_x(int rows, int cols) {
    const std::int64_t n = static_cast<std::int64_t>(rows) * cols;
    CsrMatrix m;
    m.n_rows = static_cast<int>(n);
    m.n_cols = static_cast<int>(n);
    m.row_ptr.reserve(n + 1);
    m.row_ptr.push_back(0);
    m.col_idx.reserve(2 * n);
    m.vals.reserve(2 * n);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int p = r * cols + c;
            if (c < cols - 1) {
                m.col_idx.push_back(p);
                m.vals.push_back(-1.0);
                m.col_idx.push_back(p + 1);
                m.vals.push_back(1.0);
            }
            m.row_ptr.push_back(static_cast<std::int64_t>(m.col_idx.size()));
        }
    }
    return m;
}

CsrMatrix build_diff_y(int rows, int cols) {
    const std::int64_t n = static_cast<std::int64_t>(rows) * cols;
    CsrMatrix m;
    m.n_rows = static_cast<int>(n);
    m.n_cols = static_cast<int>(n);
    m.row_ptr.reserve(n + 1);
    m.row_ptr.push_back(0);
    m.col_idx.reserve(2 * n);
    m.vals.reserve(2 * n);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int p = r * cols + c;
            if (r < rows - 1) {
                m.col_idx.push_back(p);
                m.vals.push_back(-1.0);
                m.col_idx.push_back(p + cols);
                m.vals.push_back(1.0);
            }
            m.row_ptr.push_back(static_cast<std::int64_t>(m.col_idx.size()));
        }
    }
    return m;
}

std::vector<double> spmv(const CsrMatrix& m, std::span<const double> x) {
    if (static_cast<int>(x.size()) != m.n_cols)
        throw DimensionMismatch("spmv: vector length " + std::to_string(x.size()) +
                                " does not match " + std::to_string(m.n_cols) + " columns");
    std::vector<double> y(static_cast<std::size_t>(m.n_rows), 0.0);
    for (int i = 0; i < m.n_rows; ++i) {
        double acc = 0.0;
        for (std::int64_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
            acc += m.vals[k] * x[m.col_idx[k]];
        y[i] = acc;
    }
    return y;
}

CsrMatrix assemble_stencil(std::span<const double> wx, std::span<const double> wy,
                           std::span<const double> r_diag, std::span<const double> h_diag,
                           double lambda, double lambda_p, int rows, int cols) {
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    if (wx.size() != n || wy.size() != n || r_diag.size() != n || h_diag.size() != n)
        throw DimensionMismatch("assemble_stencil: weight arrays must have length rows*cols");

    if (n >= 2) {
        bool any_fidelity = false;
        for (std::size_t p = 0; p < n; ++p) {
            if (r_diag[p] + lambda_p * h_diag[p] > 0.0) {
                any_fidelity = true;
                break;
            }
        }
        if (!any_fidelity)
            throw SingularSystem(
                "every diagonal fidelity entry is zero; the system is singular up to constants");
    }

    CsrMatrix a;
    a.n_rows = static_cast<int>(n);
    a.n_cols = static_cast<int>(n);
    a.row_ptr.reserve(n + 1);
    a.row_ptr.push_back(0);
    a.col_idx.reserve(5 * n);
    a.vals.reserve(5 * n);

    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int p = r * cols + c;
            double diag = r_diag[p] + lambda_p * h_diag[p];
            // Each difference row contributes its weight to the two cells it
            // touches and -weight to the coupling entries.
            if (c < cols - 1) diag += lambda * wx[p];
            if (c > 0) diag += lambda * wx[p - 1];
            if (r < rows - 1) diag += lambda * wy[p];
            if (r > 0) diag += lambda * wy[p - cols];

            if (r > 0) {
                a.col_idx.push_back(p - cols);
                a.vals.push_back(-lambda * wy[p - cols]);
            }
            if (c > 0) {
                a.col_idx.push_back(p - 1);
                a.vals.push_back(-lambda * wx[p - 1]);
            }
            a.col_idx.push_back(p);
            a.vals.push_back(diag);
            if (c < cols - 1) {
                a.col_idx.push_back(p + 1);
                a.vals.push_back(-lambda * wx[p]);
            }
            if (r < rows - 1) {
                a.col_idx.push_back(p + cols);
                a.vals.push_back(-lambda * wy[p]);
            }
            a.row_ptr.push_back(static_cast<std::int64_t>(a.col_idx.size()));
        }
    }
    return a;
}

}  // namespace sddtm
