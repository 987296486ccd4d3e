#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qcorr/core.hpp"
#include "qcorr/entropic.hpp"
#include "qcorr/geometric.hpp"
#include "qcorr/random.hpp"
#include "qcorr/sphere_min.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// Triangular grid on the probability simplex with `resolution` points per
// edge; the three vertices e1, e2, e3 are grid nodes exactly.
struct SimplexGrid {
    int resolution = 0;
    std::vector<std::array<double, 3>> points;

    static SimplexGrid make(int resolution) {
        if (resolution < 2) throw std::invalid_argument("SimplexGrid: resolution must be >= 2");
        SimplexGrid g;
        g.resolution = resolution;
        const int n = resolution - 1;
        g.points.reserve(static_cast<std::size_t>(resolution) * (resolution + 1) / 2);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n - i; ++j) {
                const int k = n - i - j;
                g.points.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n,
                                    static_cast<double>(k) / n});
            }
        return g;
    }
};

struct OracleVerdict {
    double closed_form_value = 0.0;
    double oracle_value = 0.0;
    double gap = 0.0;
    std::array<double, 3> witness_u{};
    bool passed = false;
};

// f(u) = gamma-(u) + gamma+(u); Q_G at u equals 2 f(u).
inline double f_objective(const CorrelationVector& c, const std::array<double, 3>& u) {
    const auto [g_minus, g_plus] = gamma_pair(c, u);
    return g_minus + g_plus;
}

namespace detail {

// Local refinement in (u1, u2) barycentric coordinates: three rounds of
// an 11x11 patch around the incumbent, window shrinking 10x per round.
template <typename F>
void refine_on_simplex(F&& f, double& best, std::array<double, 3>& best_u, double spacing) {
    double half = spacing;
    for (int round = 0; round < 3; ++round) {
        const double u1c = best_u[0], u2c = best_u[1];
        for (int a = -5; a <= 5; ++a) {
            const double u1 = std::clamp(u1c + half * a / 5.0, 0.0, 1.0);
            for (int b = -5; b <= 5; ++b) {
                const double u2 = std::clamp(u2c + half * b / 5.0, 0.0, 1.0 - u1);
                const std::array<double, 3> u = {u1, u2, std::max(0.0, 1.0 - u1 - u2)};
                const double v = f(u);
                if (v < best) {
                    best = v;
                    best_u = u;
                }
            }
        }
        half /= 10.0;
    }
}

}  // namespace detail

// Minimize 2 f(u) over the simplex grid plus local refinement and compare
// with the closed form Q_G = c0.
inline OracleVerdict brute_force_qg(const CorrelationVector& c, int resolution) {
    require_physical(c);
    if (resolution < 50) throw std::invalid_argument("brute_force_qg: resolution must be >= 50");
    const SimplexGrid grid = SimplexGrid::make(resolution);

    double best = f_objective(c, grid.points.front());
    std::array<double, 3> best_u = grid.points.front();
    for (const auto& u : grid.points) {
        const double v = f_objective(c, u);
        if (v < best) {
            best = v;
            best_u = u;
        }
    }
    detail::refine_on_simplex([&](const std::array<double, 3>& u) { return f_objective(c, u); },
                              best, best_u, 1.0 / (resolution - 1));

    // The optimal set can be larger than the vertices (flat directions);
    // when a vertex ties the minimum, report it as the witness.
    for (int j = 0; j < 3; ++j) {
        std::array<double, 3> vertex{};
        vertex[j] = 1.0;
        const double fv = f_objective(c, vertex);
        if (fv <= best + 1e-9) {
            best = std::min(best, fv);
            best_u = vertex;
            break;
        }
    }

    OracleVerdict v;
    v.closed_form_value = q_g_closed(c);
    v.oracle_value = 2.0 * best;
    v.gap = v.oracle_value - v.closed_form_value;
    v.witness_u = best_u;
    v.passed = std::fabs(v.gap) <= 1e-6;
    return v;
}

// Same comparison through the spectral route only: minimize
// tr|rho - M_n(rho)| over a sphere grid, never touching the gamma
// algebra, so an error there cannot self-confirm.
inline OracleVerdict brute_force_qg_spectral(const CorrelationVector& c, int sphere_resolution) {
    require_physical(c);
    const Hermitian4 rho = bell_density(c);
    const auto min_result = minimize_over_sphere(
        [&](double x, double y, double z) {
            const auto n = MeasurementDirection::normalized(x, y, z);
            return trace_norm(rho - apply_measurement(rho, n));
        },
        sphere_resolution);

    double best = min_result.value;
    std::array<double, 3> direction = min_result.direction;
    for (int j = 1; j <= 3; ++j) {
        const auto axis = MeasurementDirection::axis(j);
        const double v_axis = trace_norm(rho - apply_measurement(rho, axis));
        if (v_axis <= best + 1e-11) {
            best = std::min(best, v_axis);
            direction = {axis.n1, axis.n2, axis.n3};
            break;
        }
    }

    OracleVerdict v;
    v.closed_form_value = q_g_closed(c);
    v.oracle_value = best;
    v.gap = v.oracle_value - v.closed_form_value;
    v.witness_u = {direction[0] * direction[0], direction[1] * direction[1],
                   direction[2] * direction[2]};
    v.passed = std::fabs(v.gap) <= 1e-5;
    return v;
}

// Lagrange stationarity residuals at an interior point: the left-hand
// sides of
//   (alpha_m - alpha_j) [ (1/gamma-)(1 - alpha_n / sqrt(beta.u))
//                       + (1/gamma+)(1 + alpha_n / sqrt(beta.u)) ] = 0
// for m = j+1, j+2 (mod 3). Outside the equation's validity domain the
// result is flagged invalid ("condition violated") instead of thrown.
struct StationarityResidual {
    bool valid = false;
    double residual_m1 = 0.0;  // m = j+1
    double residual_m2 = 0.0;  // m = j+2
};

inline StationarityResidual stationarity_residual(const CorrelationVector& c,
                                                  const std::array<double, 3>& u, int axis_j) {
    if (axis_j < 1 || axis_j > 3)
        throw std::out_of_range("stationarity_residual: axis must be 1, 2 or 3");
    require_simplex(u);

    StationarityResidual out;
    if (u[0] <= 1e-6 || u[1] <= 1e-6 || u[2] <= 1e-6) return out;  // not interior

    const std::array<double, 3> alpha = {c.c1 * c.c1, c.c2 * c.c2, c.c3 * c.c3};
    const int j = axis_j - 1;
    const int m1 = (j + 1) % 3, m2 = (j + 2) % 3;
    const double pre1 = alpha[m1] - alpha[j];
    const double pre2 = alpha[m2] - alpha[j];
    if (pre1 == 0.0 && pre2 == 0.0) {
        // vanishing prefactors satisfy the stationarity equation identically;
        // the gamma/beta validity conditions only constrain the other branch
        out.valid = true;
        return out;
    }

    const std::array<double, 3> beta = {alpha[1] * alpha[2], alpha[0] * alpha[2],
                                        alpha[0] * alpha[1]};
    const double beta_dot = beta[0] * u[0] + beta[1] * u[1] + beta[2] * u[2];
    const auto [g_minus, g_plus] = gamma_pair(c, u);
    if (g_minus <= 1e-10 || g_plus <= 1e-10 || beta_dot <= 1e-10) return out;

    const double sb = std::sqrt(beta_dot);
    auto lhs = [&](double pre, int n) {
        if (pre == 0.0) return 0.0;
        return pre *
               ((1.0 / g_minus) * (1.0 - alpha[n] / sb) + (1.0 / g_plus) * (1.0 + alpha[n] / sb));
    };
    out.valid = true;
    out.residual_m1 = lhs(pre1, m2);
    out.residual_m2 = lhs(pre2, m1);
    return out;
}

// Testable form of the vertex-minimality statement: the grid minimum of f
// never undercuts the best simplex vertex by more than 1e-9.
inline bool vertex_minimality_check(const CorrelationVector& c, int resolution) {
    require_physical(c);
    const SimplexGrid grid = SimplexGrid::make(resolution);
    double grid_min = f_objective(c, grid.points.front());
    for (const auto& u : grid.points) grid_min = std::min(grid_min, f_objective(c, u));

    double vertex_min = f_objective(c, {1.0, 0.0, 0.0});
    vertex_min = std::min(vertex_min, f_objective(c, {0.0, 1.0, 0.0}));
    vertex_min = std::min(vertex_min, f_objective(c, {0.0, 0.0, 1.0}));
    return grid_min >= vertex_min - 1e-9;
}

enum class Relation { TG_lt_TE, QE_gt_CE };

// Randomized search for a strict-inequality witness with margin > 1e-6;
// deterministic per seed, returns nullopt when the budget is exhausted.
inline std::optional<CorrelationVector> counterexample_search(Relation relation,
                                                              std::uint64_t seed,
                                                              std::size_t budget) {
    if (budget < 1) throw std::invalid_argument("counterexample_search: budget must be >= 1");
    for (std::size_t i = 0; i < budget; ++i) {
        SplitMix64 rng = stream_for(seed, i);
        const CorrelationVector c = sample_physical_one(rng);
        switch (relation) {
            case Relation::TG_lt_TE:
                if (t_e_closed(c) - t_g_closed(c) > 1e-6) return c;
                break;
            case Relation::QE_gt_CE:
                if (q_e_closed(c) - c_e_closed(c) > 1e-6) return c;
                break;
        }
    }
    return std::nullopt;
}

// Physical states conditioned on two equal magnitudes (|c1| = |c2|),
// exercising the degenerate branch of the stationarity analysis.
inline std::vector<CorrelationVector> sample_tie_conditioned(std::uint64_t seed,
                                                             std::size_t count) {
    std::vector<CorrelationVector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SplitMix64 rng = stream_for(seed ^ 0x7165u, i);
        for (;;) {
            CorrelationVector c{rng.next_symmetric(), 0.0, rng.next_symmetric()};
            c.c2 = (rng.next() & 1) ? c.c1 : -c.c1;
            if (is_physical(c)) {
                out.push_back(c);
                break;
            }
        }
    }
    return out;
}

}  // namespace qcorr
