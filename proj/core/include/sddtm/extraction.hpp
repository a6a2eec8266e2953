#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sddtm/csr.hpp"
#include "sddtm/grid.hpp"
#include "sddtm/solver.hpp"

namespace sddtm {

/// Fuzzy per-cell terrain membership, 1 = terrain, 0 = non-terrain.
using TerrainMap = std::vector<double>;

/// All scalars steering an extraction run. lambda_p derives as 0.5 * lambda
/// when left unset.
struct ExtractionConfig {
    double lambda = 5.0;        // smoothing level
    std::optional<double> lambda_p;
    double t_ng = 0.5;          // terrain threshold, meters
    double epsilon = 0.1;       // reweighting floor, meters
    int n_max = 10000;          // outer iteration cap
    double c_tolerance = 1e-3;  // outer step tolerance, meters
    double pcg_tol = 1e-3;
    int pcg_max_iter = 1000;
    bool paper_literal_a = false;  // drop the penalty diagonal from the system matrix

    double penalty_multiplier() const { return lambda_p ? *lambda_p : 0.5 * lambda; }

    /// Throws std::invalid_argument on out-of-range scalars.
    void validate() const;
};

/// Per-cell IRLS weights for one outer iteration.
struct WeightSet {
    std::vector<double> d;   // fidelity weights, (|f_hat - g| + eps)^-1
    std::vector<double> wx;  // TV weights along columns
    std::vector<double> wy;  // TV weights along rows
    std::vector<double> h;   // penalty activation, d where f_hat > g else 0
};

struct ExtractionResult {
    Grid dtm;
    TerrainMap terrain;  // the map used in the final iteration
    int iterations_run = 0;
    bool converged = false;
    std::vector<double> step_norms;  // per-iteration ||f - f_hat||_inf, meters
    std::vector<SolveReport> solve_reports;
};

/// Snapshot handed to the optional per-iteration observer after the clamp.
struct IterationTrace {
    int n = 0;
    std::span<const double> f;  // clamped iterate
    std::span<const double> t;
    double step_norm = 0.0;
    const SolveReport* solve = nullptr;
};

using IterationObserver = std::function<void(const IterationTrace&)>;

/// t_p = 1 - min((g_p - f_p) / t_ng, 1), clamped into [0, 1].
TerrainMap terrain_indicator(const Grid& g, const Grid& f, double t_ng);

/// d_p = (|f_hat_p - g_p| + epsilon)^-1.
std::vector<double> fidelity_weights(const Grid& f_hat, const Grid& g, double epsilon);

/// w_{x,p} = (|(d_x f_hat)_p| + epsilon)^-1 and likewise along rows, with the
/// forward differences of build_diff_x/build_diff_y (boundary cells see a zero
/// derivative and get weight 1/epsilon).
std::pair<std::vector<double>, std::vector<double>> tv_weights(const Grid& f_hat, double epsilon);

/// h_p = d_p where f_hat_p > g_p, else 0.
std::vector<double> penalty_weights(const Grid& f_hat, const Grid& g, std::span<const double> d);

/// All four weight arrays for one iteration from the proxy iterate f_hat.
WeightSet compute_weights(const Grid& f_hat, const Grid& g, double epsilon);

/// Builds the normal-equation system for one iteration:
/// r_diag[p] = t_p (2 d_p + 1), A from assemble_stencil (the penalty diagonal
/// is included unless cfg.paper_literal_a), b_p = (r_diag[p] + lambda_p h_p) g_p.
std::pair<CsrMatrix, std::vector<double>> assemble_system(const TerrainMap& t, const WeightSet& w,
                                                          const Grid& g,
                                                          const ExtractionConfig& cfg);

/// The reweighted quadratic objective of one iteration:
/// sum_p t_p ((f-g)^2 + 2 d (f-g)^2) + lambda (wx (dx f)^2 + wy (dy f)^2)
///       + lambda_p h (f-g)^2.
double approx_cost(const Grid& f, const Grid& g, const TerrainMap& t, const WeightSet& w,
                   const ExtractionConfig& cfg);

/// The non-smooth objective (no reweighting):
/// sum_p t_p ((f-g)^2 + 2|f-g|) + lambda (|dx f| + |dy f|) + lambda_p max(f-g, 0).
/// Diagnostic only; never used inside the solver loop.
double exact_cost(const Grid& f, const Grid& g, const TerrainMap& t, const ExtractionConfig& cfg);

/// Runs the full outer iteration: initialize f = g; per iteration update the
/// terrain indicator from the clamped previous iterate, refresh the IRLS
/// weights, assemble and PCG-solve the system warm-started at the previous
/// iterate, clamp f to min(f, g), and stop once ||f - f_hat||_inf falls below
/// cfg.c_tolerance. Reaching n_max without convergence is reported, not
/// thrown. Deterministic for identical inputs and config.
ExtractionResult extract_dtm(const Grid& g, const ExtractionConfig& cfg,
                             const IterationObserver& observer = {});

}  // namespace sddtm
