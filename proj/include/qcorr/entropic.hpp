#pragma once

#include <cmath>
#include <stdexcept>

#include "qcorr/core.hpp"
#include "qcorr/hermitian.hpp"
#include "qcorr/sphere_min.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// Entropic quantum/classical/total correlations, in bits.
struct EntropicTriple {
    double q_e = 0.0;
    double c_e = 0.0;
    double t_e = 0.0;
};

namespace detail {

// p log2 p with the 0 log 0 := 0 convention; eigenvalues in [-1e-12, 0)
// are clipped to 0 (roundoff at the tetrahedron boundary).
inline double xlog2x(double p) {
    if (p < 0.0) {
        if (p < -1e-12) throw std::invalid_argument("xlog2x: negative probability");
        return 0.0;
    }
    return p == 0.0 ? 0.0 : p * std::log2(p);
}

}  // namespace detail

// log2[(1-x)^{(1-x)/2} (1+x)^{(1+x)/2}] for x in [0,1]; maps C_G to C_E
// and gives C_E itself at x = c+.
inline double c_e_from_c_g(double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("c_e_from_c_g: x must be in [0, 1]");
    return 0.5 * (detail::xlog2x(1.0 - x) + detail::xlog2x(1.0 + x));
}

// dC_E/dC_G = log2 sqrt((1+x)/(1-x)), strictly positive on (0,1).
inline double dce_dcg(double x) {
    if (x <= 0.0 || x >= 1.0)
        throw std::invalid_argument("dce_dcg: x must be strictly inside (0, 1)");
    return 0.5 * (std::log2(1.0 + x) - std::log2(1.0 - x));
}

inline double c_e_closed(const CorrelationVector& c) {
    require_physical(c);
    return c_e_from_c_g(order_magnitudes(c).c_plus);
}

// T_E = 2 + sum_ij lambda_ij log2 lambda_ij
inline double t_e_closed(const CorrelationVector& c) {
    require_physical(c);
    double s = 2.0;
    for (double lam : spectrum_bell(c)) s += detail::xlog2x(lam);
    return s;
}

inline double q_e_closed(const CorrelationVector& c) {
    return t_e_closed(c) - c_e_closed(c);
}

inline EntropicTriple entropic_triple(const CorrelationVector& c) {
    EntropicTriple t;
    t.c_e = c_e_closed(c);
    t.t_e = t_e_closed(c);
    t.q_e = t.t_e - t.c_e;
    return t;
}

// von Neumann entropy in bits
inline double entropy_bits(const Hermitian4& rho) {
    double s = 0.0;
    for (double lam : hermitian_eigenvalues(rho)) s -= detail::xlog2x(lam);
    return s;
}

inline double entropy_bits(const Matrix2& rho) {
    const auto lam = hermitian_eigenvalues2(rho);
    return -detail::xlog2x(lam[0]) - detail::xlog2x(lam[1]);
}

// I(rho) = S(rho_a) + S(rho_b) - S(rho)
inline double mutual_information(const Hermitian4& rho) {
    return entropy_bits(trace_out_b(rho)) + entropy_bits(trace_out_a(rho)) - entropy_bits(rho);
}

// Entropic discord by direct minimization of |I(rho) - I(M(rho))| over
// the measurement sphere (1-degree coarse grid plus local refinement).
inline double q_e_direct(const CorrelationVector& c) {
    require_physical(c);
    const Hermitian4 rho = bell_density(c);
    const double total = mutual_information(rho);
    const auto result = minimize_over_sphere(
        [&](double x, double y, double z) {
            const auto n = MeasurementDirection::normalized(x, y, z);
            return std::fabs(total - mutual_information(apply_measurement(rho, n)));
        },
        90);
    return result.value;
}

}  // namespace qcorr
