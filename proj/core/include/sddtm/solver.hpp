#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sddtm/csr.hpp"

namespace sddtm {

/// Zero-fill incomplete Cholesky factor: lower triangular, sparsity contained
/// in the lower triangle of the factored matrix, strictly positive diagonal.
struct IcFactor {
    CsrMatrix lower;
    double shift_used = 0.0;
};

struct SolveReport {
    int iterations = 0;
    double final_relative_residual = 0.0;
    bool converged = false;
    double shift_used = 0.0;
};

/// IC(0) factorization of a symmetric matrix. On pivot breakdown the input is
/// refactored as a + sigma * diag(a) with sigma escalating through
/// {1e-3, 1e-2, 1e-1, 1}; the shift that succeeded is recorded. Throws
/// NotSquare for rectangular input and FactorizationFailed if the breakdown
/// persists at sigma = 1.
IcFactor ic0_factor(const CsrMatrix& a);

/// Applies the preconditioner: solves L y = r then L^T z = y in place.
void ic_apply(const IcFactor& f, std::span<const double> r, std::span<double> z);

/// Preconditioned conjugate gradient for SPD systems, warm-started at x0.
/// Convergence criterion is the relative residual ||b - A x||_2 / ||b||_2;
/// b = 0 returns x = 0 exactly with zero iterations. If max_iter is reached
/// the best iterate seen (smallest residual) is returned with
/// converged = false. Any NaN or infinity arising during the iteration throws
/// NonFiniteEncountered.
std::pair<std::vector<double>, SolveReport> pcg_solve(const CsrMatrix& a,
                                                      std::span<const double> b,
                                                      std::span<const double> x0,
                                                      const IcFactor& precond, double tol,
                                                      int max_iter);

/// Unpreconditioned variant (identity preconditioner).
std::pair<std::vector<double>, SolveReport> pcg_solve(const CsrMatrix& a,
                                                      std::span<const double> b,
                                                      std::span<const double> x0, double tol,
                                                      int max_iter);

}  // namespace sddtm
