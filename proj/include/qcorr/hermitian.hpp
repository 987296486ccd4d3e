#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qcorr {

using cplx = std::complex<double>;

class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// 2x2 complex matrix (single-qubit operators, reduced states).
struct Matrix2 {
    std::array<cplx, 4> m{};

    cplx& operator()(int r, int c) { return m[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return m[2 * r + c]; }

    static Matrix2 identity() {
        Matrix2 a;
        a(0, 0) = 1.0;
        a(1, 1) = 1.0;
        return a;
    }

    cplx trace() const { return m[0] + m[3]; }

    friend Matrix2 operator+(Matrix2 a, const Matrix2& b) {
        for (int k = 0; k < 4; ++k) a.m[k] += b.m[k];
        return a;
    }
    friend Matrix2 operator-(Matrix2 a, const Matrix2& b) {
        for (int k = 0; k < 4; ++k) a.m[k] -= b.m[k];
        return a;
    }
    friend Matrix2 operator*(cplx s, Matrix2 a) {
        for (auto& x : a.m) x *= s;
        return a;
    }
    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
        Matrix2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
        return r;
    }
};

// Eigenvalues of a Hermitian 2x2, ascending.
inline std::array<double, 2> hermitian_eigenvalues2(const Matrix2& a) {
    const double p = a(0, 0).real();
    const double q = a(1, 1).real();
    const double off = std::abs(a(0, 1));
    const double mean = 0.5 * (p + q);
    const double rad = std::sqrt(0.25 * (p - q) * (p - q) + off * off);
    return {mean - rad, mean + rad};
}

// 4x4 complex matrix in the product basis |00>,|01>,|10>,|11>
// (first factor = subsystem a). Used for density operators, measurement
// images and their differences; hermiticity is checked by the spectral
// routines rather than enforced at construction.
struct Hermitian4 {
    std::array<cplx, 16> m{};

    cplx& operator()(int r, int c) { return m[4 * r + c]; }
    const cplx& operator()(int r, int c) const { return m[4 * r + c]; }

    static Hermitian4 zero() { return {}; }

    static Hermitian4 identity() {
        Hermitian4 a;
        for (int i = 0; i < 4; ++i) a(i, i) = 1.0;
        return a;
    }

    cplx trace() const { return m[0] + m[5] + m[10] + m[15]; }

    Hermitian4 adjoint() const {
        Hermitian4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    bool is_hermitian(double tol = 1e-12) const {
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        return true;
    }

    double max_abs() const {
        double v = 0.0;
        for (const auto& x : m) v = std::max(v, std::abs(x));
        return v;
    }

    friend Hermitian4 operator+(Hermitian4 a, const Hermitian4& b) {
        for (int k = 0; k < 16; ++k) a.m[k] += b.m[k];
        return a;
    }
    friend Hermitian4 operator-(Hermitian4 a, const Hermitian4& b) {
        for (int k = 0; k < 16; ++k) a.m[k] -= b.m[k];
        return a;
    }
    friend Hermitian4 operator*(cplx s, Hermitian4 a) {
        for (auto& x : a.m) x *= s;
        return a;
    }
    friend Hermitian4 operator*(const Hermitian4& a, const Hermitian4& b) {
        Hermitian4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                cplx acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += a(i, k) * b(k, j);
                r(i, j) = acc;
            }
        return r;
    }
};

inline Hermitian4 kron(const Matrix2& a, const Matrix2& b) {
    Hermitian4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

// tr_b: trace out the second factor.
inline Matrix2 trace_out_b(const Hermitian4& rho) {
    Matrix2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
    return r;
}

// tr_a: trace out the first factor.
inline Matrix2 trace_out_a(const Hermitian4& rho) {
    Matrix2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = rho(i, j) + rho(2 + i, 2 + j);
    return r;
}

struct EigenSystem4 {
    std::array<double, 4> values{};  // ascending
    Hermitian4 vectors;              // columns are eigenvectors
};

namespace detail {

inline double offdiag_frobenius(const Hermitian4& a) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Cyclic Jacobi for a complex Hermitian 4x4. Each sweep annihilates all
// six upper pivots with unitary 2x2 rotations; converged when the
// off-diagonal Frobenius norm drops below 1e-13.
inline EigenSystem4 jacobi_hermitian4(Hermitian4 a, bool want_vectors) {
    constexpr double kOffTol = 1e-13;
    constexpr int kMaxSweeps = 100;

    Hermitian4 v = Hermitian4::identity();
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_frobenius(a) < kOffTol) break;
        for (int p = 0; p < 4; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const cplx phase = apq / r;  // e^{i arg(apq)}
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                double t = 1.0 / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                if (tau < 0.0) t = -t;
                const double cth = 1.0 / std::sqrt(1.0 + t * t);
                const double sth = t * cth;

                // column rotation: columns p,q of A and of the accumulator
                for (int i = 0; i < 4; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = cth * aip - sth * std::conj(phase) * aiq;
                    a(i, q) = sth * phase * aip + cth * aiq;
                    if (want_vectors) {
                        const cplx vip = v(i, p), viq = v(i, q);
                        v(i, p) = cth * vip - sth * std::conj(phase) * viq;
                        v(i, q) = sth * phase * vip + cth * viq;
                    }
                }
                // row rotation (conjugate transpose of the same unitary)
                for (int j = 0; j < 4; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = cth * apj - sth * phase * aqj;
                    a(q, j) = sth * std::conj(phase) * apj + cth * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    if (sweep == kMaxSweeps && offdiag_frobenius(a) >= kOffTol)
        throw ConvergenceError("jacobi_hermitian4: no convergence after 100 sweeps");

    EigenSystem4 out;
    std::array<int, 4> order = {0, 1, 2, 3};
    std::array<double, 4> d;
    for (int i = 0; i < 4; ++i) d[i] = a(i, i).real();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (d[order[j]] < d[order[i]]) std::swap(order[i], order[j]);
    for (int i = 0; i < 4; ++i) {
        out.values[i] = d[order[i]];
        if (want_vectors)
            for (int r = 0; r < 4; ++r) out.vectors(r, i) = v(r, order[i]);
    }
    return out;
}

}  // namespace detail

inline void require_hermitian(const Hermitian4& a, const char* who) {
    if (!a.is_hermitian(1e-12 * std::max(1.0, a.max_abs())))
        throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
}

// Real spectrum of a Hermitian 4x4, ascending.
inline std::array<double, 4> hermitian_eigenvalues(const Hermitian4& a) {
    require_hermitian(a, "hermitian_eigenvalues");
    return detail::jacobi_hermitian4(a, false).values;
}

inline EigenSystem4 hermitian_eigensystem(const Hermitian4& a) {
    require_hermitian(a, "hermitian_eigensystem");
    return detail::jacobi_hermitian4(a, true);
}

// Schatten 1-norm of a Hermitian operator: sum of absolute eigenvalues.
// Eigenvalues below 1e-12 in magnitude are treated as exact zeros.
inline double trace_norm(const Hermitian4& a) {
    require_hermitian(a, "trace_norm");
    const auto lam = detail::jacobi_hermitian4(a, false).values;
    double s = 0.0;
    for (double l : lam)
        if (std::fabs(l) >= 1e-12) s += std::fabs(l);
    return s;
}

}  // namespace qcorr
