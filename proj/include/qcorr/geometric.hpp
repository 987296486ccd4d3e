#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "qcorr/core.hpp"
#include "qcorr/entropic.hpp"
#include "qcorr/hermitian.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// Trace-norm geometric correlations plus the optimal measurement axis
// (the axis j with |c_j| = c+).
struct GeometricTriple {
    double q_g = 0.0;
    double c_g = 0.0;
    double t_g = 0.0;
    int optimal_axis = 1;
};

struct CorrelationReport {
    CorrelationVector c;
    EntropicTriple entropic;
    GeometricTriple geometric;
};

inline void require_simplex(const std::array<double, 3>& u) {
    const double sum = u[0] + u[1] + u[2];
    if (std::fabs(sum - 1.0) > 1e-10 || u[0] < -1e-10 || u[1] < -1e-10 || u[2] < -1e-10)
        throw std::invalid_argument("gamma_pair: u is not on the probability simplex");
}

// Eigenvalue magnitudes of rho - M(rho): the spectrum is {+-gamma+, +-gamma-} with
//   gamma_{+-} = 1/4 sqrt(c^2 - alpha.u +- 2 sqrt(beta.u)),
//   alpha = (c1^2, c2^2, c3^2), beta = (c2^2 c3^2, c1^2 c3^2, c1^2 c2^2).
// Returns (gamma-, gamma+); radicands within -1e-12 of zero are clipped.
// The gamma- radicand cancels to zero on degenerate states (for instance
// the whole simplex when all |c_i| are equal), where sqrt turns roundoff
// into ~1e-8 noise; simplex vertices use the exact two-magnitude form and
// interior points run in long double to keep that below 1e-9.
inline std::pair<double, double> gamma_pair(const CorrelationVector& c,
                                            const std::array<double, 3>& u) {
    require_simplex(u);
    const double mags[3] = {std::fabs(c.c1), std::fabs(c.c2), std::fabs(c.c3)};
    for (int j = 0; j < 3; ++j) {
        if (u[j] == 1.0 && u[(j + 1) % 3] == 0.0 && u[(j + 2) % 3] == 0.0) {
            const double a = mags[(j + 1) % 3], b = mags[(j + 2) % 3];
            return {0.25 * std::fabs(a - b), 0.25 * (a + b)};
        }
    }

    // renormalize so the components sum to 1 at long double precision;
    // an off-simplex residue of 1e-16 would be sqrt-amplified to 1e-8
    const long double usum = static_cast<long double>(u[0]) + u[1] + u[2];
    const long double w0 = u[0] / usum, w1 = u[1] / usum, w2 = u[2] / usum;
    const long double a1 = static_cast<long double>(c.c1) * c.c1;
    const long double a2 = static_cast<long double>(c.c2) * c.c2;
    const long double a3 = static_cast<long double>(c.c3) * c.c3;
    const long double csq = a1 + a2 + a3;
    const long double alpha_dot = a1 * w0 + a2 * w1 + a3 * w2;
    const long double beta_dot = std::max(0.0L, a2 * a3 * w0 + a1 * a3 * w1 + a1 * a2 * w2);
    const long double root = 2.0L * std::sqrt(beta_dot);

    auto clip = [](long double radicand) -> long double {
        if (radicand < 0.0L) {
            if (radicand < -1e-12L)
                throw std::logic_error("gamma_pair: radicand below clipping tolerance");
            return 0.0L;
        }
        return radicand;
    };
    const double g_minus = static_cast<double>(0.25L * std::sqrt(clip(csq - alpha_dot - root)));
    const double g_plus = static_cast<double>(0.25L * std::sqrt(clip(csq - alpha_dot + root)));
    return {g_minus, g_plus};
}

// tr|rho - M_n(rho)| evaluated along two independent routes that must
// agree to 1e-10: (a) 2(gamma- + gamma+) at u = (n1^2, n2^2, n3^2) and
// (b) the trace norm of the explicit matrix difference.
inline double q_g_direct_at(const CorrelationVector& c, const MeasurementDirection& n) {
    require_physical(c);
    const auto [g_minus, g_plus] = gamma_pair(c, n.simplex_point());
    const double analytic = 2.0 * (g_minus + g_plus);
    const Hermitian4 rho = bell_density(c);
    const double spectral = trace_norm(rho - apply_measurement(rho, n));
    if (std::fabs(analytic - spectral) > 1e-10)
        throw std::logic_error("q_g_direct_at: analytic and spectral routes disagree");
    return spectral;
}

// Q_G = c0 (intermediate magnitude); the minimizing measurement axis is
// the one carrying c+.
struct AxisValue {
    double value;
    int axis;
};

inline AxisValue q_g_closed_axis(const CorrelationVector& c) {
    require_physical(c);
    const auto om = order_magnitudes(c);
    return {om.c_mid, om.axis};
}

inline double q_g_closed(const CorrelationVector& c) { return q_g_closed_axis(c).value; }

// M(rho) for the optimal axis: 1/4 (I(x)I + c_j sigma_j(x)sigma_j),
// still Bell-diagonal.
inline Hermitian4 optimal_classical_state(const CorrelationVector& c) {
    const int j = q_g_closed_axis(c).axis;
    CorrelationVector kept{};
    if (j == 1) kept.c1 = c.c1;
    if (j == 2) kept.c2 = c.c2;
    if (j == 3) kept.c3 = c.c3;
    return bell_density(kept);
}

inline double c_g_closed(const CorrelationVector& c) {
    require_physical(c);
    return order_magnitudes(c).c_plus;
}

// T_G = sum_ij |lambda_ij - 1/4|, the trace distance to pi_rho = I/4.
inline double t_g_direct(const CorrelationVector& c) {
    require_physical(c);
    double s = 0.0;
    for (double lam : spectrum_bell(c)) s += std::fabs(lam - 0.25);
    return s;
}

// T_G = 1/2 [c+ + max(c+, c0 + c-)]
inline double t_g_closed(const CorrelationVector& c) {
    require_physical(c);
    const auto om = order_magnitudes(c);
    return 0.5 * (om.c_plus + std::max(om.c_plus, om.c_mid + om.c_minus));
}

inline GeometricTriple geometric_triple(const CorrelationVector& c) {
    require_physical(c);
    const auto om = order_magnitudes(c);
    GeometricTriple t;
    t.q_g = om.c_mid;
    t.c_g = om.c_plus;
    t.t_g = 0.5 * (om.c_plus + std::max(om.c_plus, om.c_mid + om.c_minus));
    t.optimal_axis = om.axis;
    return t;
}

// All six measures for one state. With verify set, the closed forms are
// re-derived through the matrix/trace-norm routes and a disagreement is
// an error rather than a wrong answer.
inline CorrelationReport analyze(const CorrelationVector& c, bool verify = false) {
    require_physical(c);
    CorrelationReport r;
    r.c = c;
    r.entropic = entropic_triple(c);
    r.geometric = geometric_triple(c);
    if (verify) {
        const Hermitian4 rho = bell_density(c);
        const Hermitian4 m = optimal_classical_state(c);
        const double qg_matrix =
            q_g_direct_at(c, MeasurementDirection::axis(r.geometric.optimal_axis));
        const double cg_matrix = trace_norm(m - product_of_marginals(rho));
        const double tg_matrix = t_g_direct(c);
        if (std::fabs(qg_matrix - r.geometric.q_g) > 1e-10 ||
            std::fabs(cg_matrix - r.geometric.c_g) > 1e-10 ||
            std::fabs(tg_matrix - r.geometric.t_g) > 1e-10)
            throw std::logic_error("analyze: closed forms disagree with matrix routes");
    }
    return r;
}

}  // namespace qcorr
