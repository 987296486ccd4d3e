#pragma once

#include <cmath>
#include <stdexcept>

#include "qcorr/core.hpp"
#include "qcorr/hermitian.hpp"

namespace qcorr {

// Pauli convention: sigma_1 = x, sigma_2 = y, sigma_3 = z in the
// computational basis |0>, |1> with sigma_z|0> = +|0>.
inline Matrix2 pauli(int axis) {
    Matrix2 s;
    switch (axis) {
        case 1:
            s(0, 1) = 1.0;
            s(1, 0) = 1.0;
            return s;
        case 2:
            s(0, 1) = cplx(0.0, -1.0);
            s(1, 0) = cplx(0.0, 1.0);
            return s;
        case 3:
            s(0, 0) = 1.0;
            s(1, 1) = -1.0;
            return s;
    }
    throw std::out_of_range("pauli: axis must be 1, 2 or 3");
}

// rho = 1/4 [I(x)I + sum_i c_i sigma_i(x)sigma_i]. Accepts unphysical c;
// callers gate on is_physical where a density operator is required.
inline Hermitian4 bell_density(const CorrelationVector& c) {
    Hermitian4 rho = Hermitian4::identity();
    for (int axis = 1; axis <= 3; ++axis) {
        const Matrix2 s = pauli(axis);
        rho = rho + c[axis] * kron(s, s);
    }
    return 0.25 * rho;
}

// Unit vector on the measurement sphere; constructor enforces the norm.
struct MeasurementDirection {
    double n1, n2, n3;

    MeasurementDirection(double x, double y, double z) : n1(x), n2(y), n3(z) {
        const double norm = std::sqrt(x * x + y * y + z * z);
        if (std::fabs(norm - 1.0) > 1e-12)
            throw std::invalid_argument("MeasurementDirection: vector is not unit length");
    }

    static MeasurementDirection axis(int j) {
        switch (j) {
            case 1: return {1.0, 0.0, 0.0};
            case 2: return {0.0, 1.0, 0.0};
            case 3: return {0.0, 0.0, 1.0};
        }
        throw std::out_of_range("MeasurementDirection::axis: j must be 1, 2 or 3");
    }

    static MeasurementDirection normalized(double x, double y, double z) {
        const double norm = std::sqrt(x * x + y * y + z * z);
        if (norm == 0.0)
            throw std::invalid_argument("MeasurementDirection::normalized: zero vector");
        return {x / norm, y / norm, z / norm};
    }

    // u = (n1^2, n2^2, n3^2), a point on the probability simplex
    std::array<double, 3> simplex_point() const { return {n1 * n1, n2 * n2, n3 * n3}; }
};

// Projectors Pi_{+-} = 1/2 (I +- n.sigma) on subsystem a.
inline Matrix2 projector(const MeasurementDirection& n, int sign) {
    Matrix2 p = Matrix2::identity();
    const double s = sign >= 0 ? 0.5 : -0.5;
    p = 0.5 * p + s * n.n1 * pauli(1) + s * n.n2 * pauli(2) + s * n.n3 * pauli(3);
    return p;
}

// M(rho) = sum_k (Pi_k (x) I) rho (Pi_k (x) I), the classical-quantum
// state left by a projective measurement of n.sigma on subsystem a.
inline Hermitian4 apply_measurement(const Hermitian4& rho, const MeasurementDirection& n) {
    const Matrix2 id = Matrix2::identity();
    const Hermitian4 pp = kron(projector(n, +1), id);
    const Hermitian4 pm = kron(projector(n, -1), id);
    return pp * rho * pp + pm * rho * pm;
}

// pi_rho = tr_b(rho) (x) tr_a(rho); the normalized identity for any
// Bell-diagonal input.
inline Hermitian4 product_of_marginals(const Hermitian4& rho) {
    return kron(trace_out_b(rho), trace_out_a(rho));
}

}  // namespace qcorr
