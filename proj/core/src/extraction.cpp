#include "sddtm/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sddtm/ascii_grid.hpp"
#include "sddtm/errors.hpp"

namespace sddtm {

namespace {

void require_same_shape(const Grid& a, const Grid& b, const char* where) {
    if (!a.same_shape(b))
        throw ShapeMismatch(std::string(where) + ": grids are " + std::to_string(a.rows) + "x" +
                            std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
                            std::to_string(b.cols));
}

// Forward differences with zero derivative on the right/bottom boundary,
// matching build_diff_x/build_diff_y without materializing the operators.
void forward_diff(const Grid& f, std::vector<double>& gx, std::vector<double>& gy) {
    const int rows = f.rows, cols = f.cols;
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    gx.assign(n, 0.0);
    gy.assign(n, 0.0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const std::size_t p = static_cast<std::size_t>(r) * cols + c;
            if (c < cols - 1) gx[p] = f.values[p + 1] - f.values[p];
            if (r < rows - 1) gy[p] = f.values[p + cols] - f.values[p];
        }
    }
}

}  // namespace

void ExtractionConfig::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (lambda_p && !(*lambda_p >= 0.0))
        throw std::invalid_argument("lambda_p must be non-negative");
    if (!(t_ng > 0.0)) throw std::invalid_argument("t_ng must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
    if (!(c_tolerance > 0.0)) throw std::invalid_argument("c_tolerance must be positive");
    if (!(pcg_tol > 0.0)) throw std::invalid_argument("pcg_tol must be positive");
    if (pcg_max_iter < 1) throw std::invalid_argument("pcg_max_iter must be at least 1");
}

TerrainMap terrain_indicator(const Grid& g, const Grid& f, double t_ng) {
    require_same_shape(g, f, "terrain_indicator");
    const std::size_t n = g.values.size();
    TerrainMap t(n);
    for (std::size_t p = 0; p < n; ++p) {
        const double v = 1.0 - std::min((g.values[p] - f.values[p]) / t_ng, 1.0);
        t[p] = std::clamp(v, 0.0, 1.0);
    }
    return t;
}

std::vector<double> fidelity_weights(const Grid& f_hat, const Grid& g, double epsilon) {
    require_same_shape(f_hat, g, "fidelity_weights");
    const std::size_t n = g.values.size();
    std::vector<double> d(n);
    for (std::size_t p = 0; p < n; ++p)
        d[p] = 1.0 / (std::abs(f_hat.values[p] - g.values[p]) + epsilon);
    return d;
}

std::pair<std::vector<double>, std::vector<double>> tv_weights(const Grid& f_hat,
                                                               double epsilon) {
    std::vector<double> gx, gy;
    forward_diff(f_hat, gx, gy);
    const std::size_t n = f_hat.values.size();
    std::vector<double> wx(n), wy(n);
    for (std::size_t p = 0; p < n; ++p) {
        wx[p] = 1.0 / (std::abs(gx[p]) + epsilon);
        wy[p] = 1.0 / (std::abs(gy[p]) + epsilon);
    }
    return {std::move(wx), std::move(wy)};
}

std::vector<double> penalty_weights(const Grid& f_hat, const Grid& g,
                                    std::span<const double> d) {
    require_same_shape(f_hat, g, "penalty_weights");
    const std::size_t n = g.values.size();
    if (d.size() != n)
        throw ShapeMismatch("penalty_weights: d has length " + std::to_string(d.size()) +
                            ", expected " + std::to_string(n));
    std::vector<double> h(n, 0.0);
    for (std::size_t p = 0; p < n; ++p)
        if (f_hat.values[p] > g.values[p]) h[p] = d[p];
    return h;
}

WeightSet compute_weights(const Grid& f_hat, const Grid& g, double epsilon) {
    WeightSet w;
    w.d = fidelity_weights(f_hat, g, epsilon);
    auto [wx, wy] = tv_weights(f_hat, epsilon);
    w.wx = std::move(wx);
    w.wy = std::move(wy);
    w.h = penalty_weights(f_hat, g, w.d);
    return w;
}

std::pair<CsrMatrix, std::vector<double>> assemble_system(const TerrainMap& t, const WeightSet& w,
                                                          const Grid& g,
                                                          const ExtractionConfig& cfg) {
    const std::size_t n = g.values.size();
    if (t.size() != n || w.d.size() != n || w.wx.size() != n || w.wy.size() != n ||
        w.h.size() != n)
        throw ShapeMismatch("assemble_system: array lengths must match the grid");

    const double lambda_p = cfg.penalty_multiplier();
    std::vector<double> r_diag(n);
    for (std::size_t p = 0; p < n; ++p) r_diag[p] = t[p] * (2.0 * w.d[p] + 1.0);

    // The stationarity-consistent matrix carries lambda_p * H on its diagonal;
    // the literal published form leaves it out of A (but not b).
    const double lambda_p_in_a = cfg.paper_literal_a ? 0.0 : lambda_p;
    CsrMatrix a =
        assemble_stencil(w.wx, w.wy, r_diag, w.h, cfg.lambda, lambda_p_in_a, g.rows, g.cols);

    std::vector<double> b(n);
    for (std::size_t p = 0; p < n; ++p) b[p] = (r_diag[p] + lambda_p * w.h[p]) * g.values[p];
    return {std::move(a), std::move(b)};
}

double approx_cost(const Grid& f, const Grid& g, const TerrainMap& t, const WeightSet& w,
                   const ExtractionConfig& cfg) {
    require_same_shape(f, g, "approx_cost");
    const std::size_t n = g.values.size();
    if (t.size() != n || w.d.size() != n || w.wx.size() != n || w.wy.size() != n ||
        w.h.size() != n)
        throw ShapeMismatch("approx_cost: array lengths must match the grid");

    std::vector<double> gx, gy;
    forward_diff(f, gx, gy);
    const double lambda_p = cfg.penalty_multiplier();
    double j = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const double e = f.values[p] - g.values[p];
        j += t[p] * (e * e + 2.0 * w.d[p] * e * e);
        j += cfg.lambda * (w.wx[p] * gx[p] * gx[p] + w.wy[p] * gy[p] * gy[p]);
        j += lambda_p * w.h[p] * e * e;
    }
    return j;
}

double exact_cost(const Grid& f, const Grid& g, const TerrainMap& t,
                  const ExtractionConfig& cfg) {
    require_same_shape(f, g, "exact_cost");
    const std::size_t n = g.values.size();
    if (t.size() != n) throw ShapeMismatch("exact_cost: terrain map length must match the grid");

    std::vector<double> gx, gy;
    forward_diff(f, gx, gy);
    const double lambda_p = cfg.penalty_multiplier();
    double j = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const double e = f.values[p] - g.values[p];
        j += t[p] * (e * e + 2.0 * std::abs(e));
        j += cfg.lambda * (std::abs(gx[p]) + std::abs(gy[p]));
        j += lambda_p * std::max(e, 0.0);
    }
    return j;
}

ExtractionResult extract_dtm(const Grid& g, const ExtractionConfig& cfg,
                             const IterationObserver& observer) {
    cfg.validate();
    validate_grid(g);

    ExtractionResult result;
    result.step_norms.reserve(16);
    result.solve_reports.reserve(16);

    Grid f = g;  // f^(1) = g
    Grid f_hat = g;
    TerrainMap t;

    const std::size_t n = g.values.size();
    bool converged = false;
    int iterations = 0;

    for (int it = 1; it <= cfg.n_max; ++it) {
        t = terrain_indicator(g, f, cfg.t_ng);
        f_hat.values = f.values;

        const WeightSet w = compute_weights(f_hat, g, cfg.epsilon);
        auto [a, b] = assemble_system(t, w, g, cfg);
        const IcFactor precond = ic0_factor(a);
        auto [v, report] =
            pcg_solve(a, b, f_hat.values, precond, cfg.pcg_tol, cfg.pcg_max_iter);

        // Force f <= g (the clamp is the last write to the iterate).
        for (std::size_t p = 0; p < n; ++p) f.values[p] = std::min(v[p], g.values[p]);

        double step = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            step = std::max(step, std::abs(f.values[p] - f_hat.values[p]));

        iterations = it;
        result.step_norms.push_back(step);
        result.solve_reports.push_back(report);

        if (observer) {
            IterationTrace trace;
            trace.n = it;
            trace.f = f.values;
            trace.t = t;
            trace.step_norm = step;
            trace.solve = &result.solve_reports.back();
            observer(trace);
        }

        if (step < cfg.c_tolerance) {
            converged = true;
            break;
        }
    }

    result.dtm = std::move(f);
    result.terrain = std::move(t);
    result.iterations_run = iterations;
    result.converged = converged;
    return result;
}

}  // namespace sddtm
