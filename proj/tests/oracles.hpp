#pragma once

// Test-only reference implementations. Everything here is deliberately the
// slow, obvious formulation (dense algebra, generic products) so the tuned
// production kernels have something independent to disagree with.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sddtm/csr.hpp"
#include "sddtm/grid.hpp"

namespace oracles {

using Dense = std::vector<double>;  // row-major n x n unless noted

inline Dense dense_from_csr(const sddtm::CsrMatrix& m) {
    Dense d(static_cast<std::size_t>(m.n_rows) * m.n_cols, 0.0);
    for (int i = 0; i < m.n_rows; ++i)
        for (std::int64_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
            d[static_cast<std::size_t>(i) * m.n_cols + m.col_idx[k]] = m.vals[k];
    return d;
}

// A += scale * C^T diag(w) C, all dense, C given as CSR (n x n).
inline void add_weighted_gram(Dense& a, const sddtm::CsrMatrix& c, const std::vector<double>& w,
                              double scale) {
    const int n = c.n_cols;
    for (int p = 0; p < c.n_rows; ++p) {
        for (std::int64_t ki = c.row_ptr[p]; ki < c.row_ptr[p + 1]; ++ki)
            for (std::int64_t kj = c.row_ptr[p]; kj < c.row_ptr[p + 1]; ++kj)
                a[static_cast<std::size_t>(c.col_idx[ki]) * n + c.col_idx[kj]] +=
                    scale * w[p] * c.vals[ki] * c.vals[kj];
    }
}

// diag(r) + lambda_p diag(h) + lambda (Cx^T Wx Cx + Cy^T Wy Cy) via generic
// dense products; the independent counterpart of the stencil assembly.
inline Dense dense_system(const std::vector<double>& wx, const std::vector<double>& wy,
                          const std::vector<double>& r_diag, const std::vector<double>& h_diag,
                          double lambda, double lambda_p, int rows, int cols) {
    const int n = rows * cols;
    Dense a(static_cast<std::size_t>(n) * n, 0.0);
    for (int p = 0; p < n; ++p)
        a[static_cast<std::size_t>(p) * n + p] = r_diag[p] + lambda_p * h_diag[p];
    add_weighted_gram(a, sddtm::build_diff_x(rows, cols), wx, lambda);
    add_weighted_gram(a, sddtm::build_diff_y(rows, cols), wy, lambda);
    return a;
}

// In-place lower Cholesky; false when a pivot is not strictly positive.
inline bool dense_cholesky(Dense& a, int n) {
    for (int j = 0; j < n; ++j) {
        double d = a[static_cast<std::size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            const double l = a[static_cast<std::size_t>(j) * n + k];
            d -= l * l;
        }
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        a[static_cast<std::size_t>(j) * n + j] = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = a[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(j) * n + k];
            a[static_cast<std::size_t>(i) * n + j] = s / ljj;
        }
    }
    // zero the strict upper triangle so the result is exactly L
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = 0.0;
    return true;
}

// Solves a x = b for SPD dense a by Cholesky; throws when not SPD.
inline std::vector<double> dense_solve_spd(Dense a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    if (!dense_cholesky(a, n)) throw std::runtime_error("dense_solve_spd: matrix is not SPD");
    // L y = b
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= a[static_cast<std::size_t>(i) * n + k] * b[k];
        b[i] = s / a[static_cast<std::size_t>(i) * n + i];
    }
    // L^T x = y
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= a[static_cast<std::size_t>(k) * n + i] * b[k];
        b[i] = s / a[static_cast<std::size_t>(i) * n + i];
    }
    return b;
}

// Eigenvalues of a symmetric dense matrix by the cyclic Jacobi method.
inline std::vector<double> jacobi_eigenvalues(Dense a, int n) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-24) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = at(i, i);
    return eig;
}

// Deterministic uniform helpers; the raw engine is pinned by the standard,
// unlike the distribution adapters.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

inline int uniform_int(std::mt19937_64& gen, int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline std::vector<double> random_vector(std::mt19937_64& gen, int n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(gen, lo, hi);
    return v;
}

inline sddtm::Grid make_grid(int rows, int cols, std::vector<double> values) {
    sddtm::Grid g;
    g.rows = rows;
    g.cols = cols;
    g.values = std::move(values);
    return g;
}

inline sddtm::Grid random_grid(std::mt19937_64& gen, int rows, int cols, double lo, double hi) {
    return make_grid(rows, cols, random_vector(gen, rows * cols, lo, hi));
}

}  // namespace oracles
