#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sddtm/csr.hpp"
#include "sddtm/errors.hpp"

using namespace sddtm;

namespace {

// max |a - b| over all entries, both dense row-major n x n.
double max_abs_diff(const oracles::Dense& a, const oracles::Dense& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(const oracles::Dense& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

TEST_CASE("column difference operator on a single cell is the zero matrix") {
    const CsrMatrix m = build_diff_x(1, 1);
    CHECK(m.n_rows == 1);
    CHECK(m.n_cols == 1);
    CHECK(m.nnz() == 0);
}

TEST_CASE("column differences of a 1x3 profile with a zero right boundary") {
    const CsrMatrix m = build_diff_x(1, 3);
    const std::vector<double> f = {1.0, 4.0, 9.0};
    const std::vector<double> df = spmv(m, f);
    REQUIRE(df.size() == 3);
    CHECK(df[0] == 3.0);
    CHECK(df[1] == 5.0);
    CHECK(df[2] == 0.0);
}

TEST_CASE("column difference operator on 2x2 has two active rows") {
    const CsrMatrix m = build_diff_x(2, 2);
    CHECK(m.nnz() == 4);
    int active = 0;
    for (int i = 0; i < m.n_rows; ++i)
        if (m.row_ptr[i + 1] > m.row_ptr[i]) ++active;
    CHECK(active == 2);
}

TEST_CASE("row difference operator is zero on single-row grids") {
    CHECK(build_diff_y(1, 1).nnz() == 0);
    CHECK(build_diff_y(1, 7).nnz() == 0);
}

TEST_CASE("row differences of a 3x1 profile with a zero bottom boundary") {
    const std::vector<double> df = spmv(build_diff_y(3, 1), std::vector<double>{1.0, 4.0, 9.0});
    CHECK(df == std::vector<double>{3.0, 5.0, 0.0});
}

TEST_CASE("row difference operator on 2x2 stores four entries in the top rows") {
    const CsrMatrix m = build_diff_y(2, 2);
    CHECK(m.nnz() == 4);
    CHECK(m.row_ptr[2] == 4);  // both stored rows belong to the top raster row
    CHECK(m.row_ptr[4] == 4);
}

TEST_CASE("difference operator rows sum to zero and kill constants") {
    for (auto [rows, cols] : {std::pair{3, 4}, std::pair{1, 6}, std::pair{5, 1}}) {
        for (const CsrMatrix& m : {build_diff_x(rows, cols), build_diff_y(rows, cols)}) {
            for (int i = 0; i < m.n_rows; ++i) {
                double s = 0.0;
                for (std::int64_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) s += m.vals[k];
                CHECK(s == 0.0);
            }
            const std::vector<double> ones(static_cast<std::size_t>(rows) * cols, 3.25);
            for (double v : spmv(m, ones)) CHECK(v == 0.0);
        }
    }
}

TEST_CASE("spmv applies the identity and the zero matrix") {
    CsrMatrix id;
    id.n_rows = id.n_cols = 3;
    id.row_ptr = {0, 1, 2, 3};
    id.col_idx = {0, 1, 2};
    id.vals = {1.0, 1.0, 1.0};
    const std::vector<double> x = {1.0, 2.0, 3.0};
    CHECK(spmv(id, x) == x);

    CsrMatrix zero;
    zero.n_rows = zero.n_cols = 3;
    zero.row_ptr = {0, 0, 0, 0};
    CHECK(spmv(zero, x) == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("spmv rejects mismatched vector length") {
    CHECK_THROWS_AS(spmv(build_diff_x(2, 2), std::vector<double>{1.0, 2.0}),
                    DimensionMismatch);
}

TEST_CASE("single-cell stencil is the bare diagonal") {
    const std::vector<double> one = {1.0};
    const std::vector<double> w = {10.0};
    const std::vector<double> r = {21.0};
    const std::vector<double> h = {0.0};
    const CsrMatrix a = assemble_stencil(w, w, r, h, 5.0, 2.5, 1, 1);
    CHECK(a.nnz() == 1);
    CHECK(a.vals[0] == 21.0);
}

TEST_CASE("1x2 stencil matches the hand-built two-cell system") {
    const std::vector<double> wx = {1.0, 7.0};  // second entry sits on the boundary row
    const std::vector<double> wy = {0.0, 0.0};
    const std::vector<double> r = {1.0, 1.0};
    const std::vector<double> h = {0.0, 0.0};
    const CsrMatrix a = assemble_stencil(wx, wy, r, h, 2.0, 0.0, 1, 2);
    const oracles::Dense d = oracles::dense_from_csr(a);
    CHECK(d[0] == 3.0);
    CHECK(d[1] == -2.0);
    CHECK(d[2] == -2.0);
    CHECK(d[3] == 3.0);
}

TEST_CASE("stencil equals its transpose exactly") {
    std::mt19937_64 gen(1);
    for (int it = 0; it < 10; ++it) {
        const int rows = oracles::uniform_int(gen, 1, 6);
        const int cols = oracles::uniform_int(gen, 1, 6);
        const int n = rows * cols;
        const CsrMatrix a = assemble_stencil(
            oracles::random_vector(gen, n, 0.0, 10.0), oracles::random_vector(gen, n, 0.0, 10.0),
            oracles::random_vector(gen, n, 0.1, 21.0), oracles::random_vector(gen, n, 0.0, 1.0),
            oracles::uniform(gen, 0.5, 10.0), oracles::uniform(gen, 0.0, 5.0), rows, cols);
        const oracles::Dense d = oracles::dense_from_csr(a);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(d[static_cast<std::size_t>(i) * n + j] ==
                      d[static_cast<std::size_t>(j) * n + i]);
    }
}

TEST_CASE("stencil assembly agrees with the generic triple-product oracle") {
    std::mt19937_64 gen(7);
    for (int it = 0; it < 30; ++it) {
        const int rows = oracles::uniform_int(gen, 1, 8);
        const int cols = oracles::uniform_int(gen, 1, 8);
        const int n = rows * cols;
        const auto wx = oracles::random_vector(gen, n, 0.0, 10.0);
        const auto wy = oracles::random_vector(gen, n, 0.0, 10.0);
        const auto r = oracles::random_vector(gen, n, 0.01, 21.0);
        const auto h = oracles::random_vector(gen, n, 0.0, 10.0);
        const double lambda = oracles::uniform(gen, 0.5, 25.0);
        const double lambda_p = oracles::uniform(gen, 0.0, 12.5);
        const oracles::Dense got =
            oracles::dense_from_csr(assemble_stencil(wx, wy, r, h, lambda, lambda_p, rows, cols));
        const oracles::Dense want =
            oracles::dense_system(wx, wy, r, h, lambda, lambda_p, rows, cols);
        CHECK(max_abs_diff(got, want) <= 1e-12 * max_abs(want));
    }
}

TEST_CASE("stencil has at most five entries per row") {
    const int rows = 5, cols = 7, n = rows * cols;
    std::mt19937_64 gen(3);
    const CsrMatrix a = assemble_stencil(
        oracles::random_vector(gen, n, 0.1, 10.0), oracles::random_vector(gen, n, 0.1, 10.0),
        oracles::random_vector(gen, n, 0.1, 21.0), std::vector<double>(n, 0.0), 5.0, 2.5, rows,
        cols);
    for (int i = 0; i < n; ++i) CHECK(a.row_ptr[i + 1] - a.row_ptr[i] <= 5);
}

TEST_CASE("stencil is positive semidefinite, definite with any fidelity") {
    std::mt19937_64 gen(11);
    for (int it = 0; it < 8; ++it) {
        const int rows = oracles::uniform_int(gen, 2, 5);
        const int cols = oracles::uniform_int(gen, 2, 5);
        const int n = rows * cols;
        auto r = oracles::random_vector(gen, n, 0.5, 21.0);
        const CsrMatrix a = assemble_stencil(
            oracles::random_vector(gen, n, 0.1, 10.0), oracles::random_vector(gen, n, 0.1, 10.0),
            r, std::vector<double>(n, 0.0), 5.0, 2.5, rows, cols);
        const std::vector<double> eig = oracles::jacobi_eigenvalues(oracles::dense_from_csr(a), n);
        for (double e : eig) CHECK(e > 0.0);

        // fidelity on a single cell still pins the constant mode
        std::vector<double> r_one(n, 0.0);
        r_one[0] = 1.0;
        const CsrMatrix a_one = assemble_stencil(
            std::vector<double>(n, 1.0), std::vector<double>(n, 1.0), r_one,
            std::vector<double>(n, 0.0), 5.0, 2.5, rows, cols);
        const std::vector<double> eig_one =
            oracles::jacobi_eigenvalues(oracles::dense_from_csr(a_one), n);
        for (double e : eig_one) CHECK(e > -1e-10);
    }
}

TEST_CASE("all-zero fidelity diagonal is singular on multi-cell grids") {
    const int n = 4;
    const std::vector<double> w(n, 1.0);
    const std::vector<double> zero(n, 0.0);
    CHECK_THROWS_AS(assemble_stencil(w, w, zero, zero, 5.0, 2.5, 2, 2), SingularSystem);
    // the penalty diagonal alone is enough to lift the singularity
    std::vector<double> h(n, 0.0);
    h[2] = 1.0;
    CHECK_NOTHROW(assemble_stencil(w, w, zero, h, 5.0, 2.5, 2, 2));
    // a single cell is permitted even with a zero diagonal
    CHECK_NOTHROW(assemble_stencil(std::vector<double>{1.0}, std::vector<double>{1.0},
                                   std::vector<double>{0.0}, std::vector<double>{0.0}, 5.0, 2.5,
                                   1, 1));
}

TEST_CASE("stencil assembly rejects wrong weight lengths") {
    const std::vector<double> w3(3, 1.0);
    const std::vector<double> w4(4, 1.0);
    CHECK_THROWS_AS(assemble_stencil(w3, w4, w4, w4, 5.0, 2.5, 2, 2), DimensionMismatch);
}
