#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/hermitian.hpp"  // ConvergenceError
#include "qcorr/random.hpp"

namespace qcorr {

// ---------------------------------------------------------------------------
// Dense real-symmetric eigensolver (cyclic Jacobi with thresholding).
// Used for small Hamiltonian sectors; templated scalar so callers needing
// derivative-grade eigenvalues can run it in long double.
// ---------------------------------------------------------------------------

template <typename T>
struct DenseEig {
    std::vector<T> values;   // ascending
    std::vector<T> vectors;  // n x n row-major; column k is eigenvector k
};

template <typename T>
DenseEig<T> jacobi_symmetric(std::vector<T> a, int n, bool want_vectors = true) {
    if (static_cast<int>(a.size()) != n * n)
        throw std::invalid_argument("jacobi_symmetric: size mismatch");
    auto at = [&](int r, int c) -> T& { return a[static_cast<std::size_t>(r) * n + c]; };

    std::vector<T> v;
    if (want_vectors) {
        v.assign(static_cast<std::size_t>(n) * n, T(0));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = T(1);
    }

    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        T off = T(0);
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off += std::fabs(at(p, q));
        if (off == T(0)) break;

        const T thresh = sweep < 3 ? T(0.2) * off / (T(n) * T(n)) : T(0);
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const T apq = at(p, q);
                const T g = T(100) * std::fabs(apq);
                // entries negligible at working precision are zeroed outright
                if (sweep > 3 && std::fabs(at(p, p)) + g == std::fabs(at(p, p)) &&
                    std::fabs(at(q, q)) + g == std::fabs(at(q, q))) {
                    at(p, q) = T(0);
                    at(q, p) = T(0);
                    continue;
                }
                if (std::fabs(apq) <= thresh) continue;

                const T h = at(q, q) - at(p, p);
                T t;
                if (std::fabs(h) + g == std::fabs(h)) {
                    t = apq / h;
                } else {
                    const T theta = h / (T(2) * apq);
                    t = T(1) / (std::fabs(theta) + std::sqrt(T(1) + theta * theta));
                    if (theta < T(0)) t = -t;
                }
                const T cth = T(1) / std::sqrt(T(1) + t * t);
                const T sth = t * cth;
                const T tau = sth / (T(1) + cth);
                const T delta = t * apq;

                at(p, p) -= delta;
                at(q, q) += delta;
                at(p, q) = T(0);
                at(q, p) = T(0);
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const T aip = at(i, p), aiq = at(i, q);
                    at(i, p) = aip - sth * (aiq + tau * aip);
                    at(p, i) = at(i, p);
                    at(i, q) = aiq + sth * (aip - tau * aiq);
                    at(q, i) = at(i, q);
                }
                if (want_vectors) {
                    for (int i = 0; i < n; ++i) {
                        T* row = &v[static_cast<std::size_t>(i) * n];
                        const T vip = row[p], viq = row[q];
                        row[p] = vip - sth * (viq + tau * vip);
                        row[q] = viq + sth * (vip - tau * viq);
                    }
                }
            }
        }
    }
    if (sweep == kMaxSweeps) throw ConvergenceError("jacobi_symmetric: too many sweeps");

    DenseEig<T> out;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return at(x, x) < at(y, y); });

    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = at(order[i], order[i]);
    if (want_vectors) {
        out.vectors.assign(static_cast<std::size_t>(n) * n, T(0));
        for (int k = 0; k < n; ++k)
            for (int r = 0; r < n; ++r)
                out.vectors[static_cast<std::size_t>(r) * n + k] =
                    v[static_cast<std::size_t>(r) * n + order[k]];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Symmetric tridiagonal: implicit-shift QL eigenvalues and an inverse-
// iteration ground vector. Backend for the Lanczos Ritz step.
// ---------------------------------------------------------------------------

// d: diagonal (size k); e: subdiagonal with e[i] coupling rows i-1 and i
// (e[0] unused). Returns ascending eigenvalues.
inline std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return {};
    e.erase(e.begin());  // e[i] now couples d[i], d[i+1]
    e.push_back(0.0);

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) + dd == dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw ConvergenceError("tridiag_eigenvalues: stalled");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
                double s = 1.0, c = 1.0, p = 0.0;
                bool early = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        early = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (early) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

namespace detail {

// LU with partial pivoting of a tridiagonal matrix (LAPACK dgttrf/dgttrs
// layout: one extra superdiagonal of fill), then one solve.
struct TridiagLU {
    int n = 0;
    std::vector<double> dl, dm, du, du2;
    std::vector<char> swapped;

    TridiagLU(const std::vector<double>& d, const std::vector<double>& e, double shift) {
        n = static_cast<int>(d.size());
        dm.resize(n);
        dl.assign(std::max(0, n - 1), 0.0);
        du.assign(std::max(0, n - 1), 0.0);
        du2.assign(std::max(0, n - 2), 0.0);
        swapped.assign(std::max(0, n - 1), 0);
        for (int i = 0; i < n; ++i) dm[i] = d[i] - shift;
        for (int i = 0; i + 1 < n; ++i) {
            du[i] = e[i + 1];
            dl[i] = e[i + 1];
        }
        for (int i = 0; i + 1 < n; ++i) {
            if (std::fabs(dm[i]) >= std::fabs(dl[i])) {
                if (dm[i] == 0.0) dm[i] = 1e-300;
                const double fact = dl[i] / dm[i];
                dl[i] = fact;
                dm[i + 1] -= fact * du[i];
                if (i + 2 < n) du2[i] = 0.0;
            } else {
                swapped[i] = 1;
                const double fact = dm[i] / dl[i];
                dm[i] = dl[i];
                dl[i] = fact;
                const double tmp = du[i];
                du[i] = dm[i + 1];
                dm[i + 1] = tmp - fact * dm[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
            }
        }
        if (dm[n - 1] == 0.0) dm[n - 1] = 1e-300;
    }

    void solve(std::vector<double>& b) const {
        for (int i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double tmp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tmp - dl[i] * b[i];
            }
        }
        b[n - 1] /= dm[n - 1];
        if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dm[n - 2];
        for (int i = n - 3; i >= 0; --i)
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dm[i];
    }
};

}  // namespace detail

// Eigenvector of a symmetric tridiagonal for the eigenvalue `lambda`
// (inverse iteration at a slightly detuned shift).
inline std::vector<double> tridiag_eigenvector(const std::vector<double>& d,
                                               const std::vector<double>& e, double lambda) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return {1.0};
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        scale = std::max(scale, std::fabs(d[i]) + (i ? std::fabs(e[i]) : 0.0));
    const double shift = lambda - 64.0 * 2.220446049250313e-16 * std::max(1.0, scale);
    const detail::TridiagLU lu(d, e, shift);

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int pass = 0; pass < 3; ++pass) {
        lu.solve(x);
        double norm = 0.0;
        for (double t : x) norm += t * t;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw ConvergenceError("tridiag_eigenvector: zero iterate");
        for (double& t : x) t /= norm;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Sparse symmetric matrix (CSR off-diagonal + dense diagonal) and Lanczos.
// ---------------------------------------------------------------------------

struct SparseSym {
    int dim = 0;
    std::vector<double> diag;
    std::vector<std::size_t> row_ptr;  // size dim+1
    std::vector<int> cols;
    std::vector<double> vals;

    void multiply(const double* x, double* y) const {
        for (int r = 0; r < dim; ++r) {
            double acc = diag[r] * x[r];
            for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += vals[k] * x[cols[k]];
            y[r] = acc;
        }
    }

    std::vector<double> dense() const {
        std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int r = 0; r < dim; ++r) {
            a[static_cast<std::size_t>(r) * dim + r] = diag[r];
            for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
                a[static_cast<std::size_t>(r) * dim + cols[k]] += vals[k];
        }
        return a;
    }
};

struct LanczosResult {
    double value = 0.0;
    std::vector<double> vector;
    int iterations = 0;
};

namespace detail {

inline void orthogonalize_against(std::vector<double>& w,
                                  const std::vector<std::vector<double>>& basis) {
    for (const auto& q : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) dot += q[i] * w[i];
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= dot * q[i];
    }
}

inline double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s += t * t;
    return std::sqrt(s);
}

}  // namespace detail

// Lowest eigenpair of h restricted to the orthogonal complement of
// `deflate` (assumed orthonormal). Full reorthogonalization against the
// stored Krylov basis keeps the recurrence honest near degeneracies; the
// start vector is deterministic in `seed`.
inline LanczosResult lanczos_lowest(const SparseSym& h, std::uint64_t seed,
                                    const std::vector<std::vector<double>>& deflate = {},
                                    double tol = 1e-10, int max_iter = 500) {
    const int n = h.dim;
    const int space = n - static_cast<int>(deflate.size());
    if (space <= 0) throw std::invalid_argument("lanczos_lowest: deflated space is empty");
    const int m_cap = std::min(max_iter, space);

    SplitMix64 rng = stream_for(seed, static_cast<std::uint64_t>(n));
    std::vector<double> q0(n);
    for (double& t : q0) t = rng.next_symmetric() + 0.25;  // biased toward positive ground states
    detail::orthogonalize_against(q0, deflate);
    const double q0n = detail::norm2(q0);
    if (q0n == 0.0) throw ConvergenceError("lanczos_lowest: degenerate start vector");
    for (double& t : q0) t /= q0n;

    std::vector<std::vector<double>> basis;
    basis.push_back(std::move(q0));
    std::vector<double> alpha, beta;  // beta[k] couples q_k and q_{k+1}
    std::vector<double> w(n);

    for (int k = 0; k < m_cap; ++k) {
        h.multiply(basis[k].data(), w.data());
        detail::orthogonalize_against(w, deflate);
        double a = 0.0;
        for (int i = 0; i < n; ++i) a += basis[k][i] * w[i];
        alpha.push_back(a);
        detail::orthogonalize_against(w, basis);
        detail::orthogonalize_against(w, basis);
        const double b = detail::norm2(w);

        std::vector<double> dvec = alpha, evec(alpha.size(), 0.0);
        for (std::size_t i = 1; i < alpha.size(); ++i) evec[i] = beta[i - 1];
        const auto theta = tridiag_eigenvalues(dvec, evec);
        const double scale = std::max(1.0, std::fabs(theta.front()));
        const auto s = tridiag_eigenvector(dvec, evec, theta.front());
        const double resid_bound = b * std::fabs(s.back());

        const bool exhausted = b <= 1e-14 * scale || k + 1 == space;
        if (resid_bound <= tol * scale || exhausted || k + 1 == m_cap) {
            if (resid_bound > tol * scale && !exhausted)
                throw ConvergenceError("lanczos_lowest: no convergence after " +
                                       std::to_string(k + 1) + " iterations");
            LanczosResult out;
            out.value = theta.front();
            out.iterations = k + 1;
            out.vector.assign(n, 0.0);
            for (std::size_t j = 0; j < basis.size(); ++j)
                for (int i = 0; i < n; ++i) out.vector[i] += s[j] * basis[j][i];
            const double vn = detail::norm2(out.vector);
            for (double& t : out.vector) t /= vn;
            return out;
        }

        beta.push_back(b);
        for (double& t : w) t /= b;
        basis.push_back(w);
    }
    throw ConvergenceError("lanczos_lowest: iteration cap reached");
}

struct LowestEigenpairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

// All eigenpairs within `window` of the minimum. Dense Jacobi in long
// double below `dense_cutoff` (derivative-grade eigenvalues for the
// Hellmann-Feynman checks), deflated Lanczos above it.
inline LowestEigenpairs lowest_eigenpairs(const SparseSym& h, double window, std::uint64_t seed,
                                          int dense_cutoff = 96, int max_lanczos_iter = 500) {
    LowestEigenpairs out;
    if (h.dim <= dense_cutoff) {
        const auto dense_d = h.dense();
        std::vector<long double> a(dense_d.begin(), dense_d.end());
        const auto eig = jacobi_symmetric<long double>(std::move(a), h.dim, true);
        const double e0 = static_cast<double>(eig.values[0]);
        for (int k = 0; k < h.dim; ++k) {
            const double ek = static_cast<double>(eig.values[k]);
            if (ek > e0 + window) break;
            out.values.push_back(ek);
            std::vector<double> v(h.dim);
            for (int r = 0; r < h.dim; ++r)
                v[r] = static_cast<double>(eig.vectors[static_cast<std::size_t>(r) * h.dim + k]);
            out.vectors.push_back(std::move(v));
        }
        return out;
    }

    std::vector<std::vector<double>> found;
    constexpr int kMaxMultiplicity = 8;
    for (int k = 0; k < kMaxMultiplicity; ++k) {
        const LanczosResult r =
            lanczos_lowest(h, seed + static_cast<std::uint64_t>(k), found, 1e-10, max_lanczos_iter);
        if (!out.values.empty() && r.value > out.values.front() + window) break;
        out.values.push_back(r.value);
        found.push_back(r.vector);
        out.vectors.push_back(r.vector);
        if (static_cast<int>(found.size()) >= h.dim) break;
    }
    return out;
}

}  // namespace qcorr
