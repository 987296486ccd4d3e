#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace qcorr {

// Correlation triple (c1, c2, c3) with c_i = <sigma_i (x) sigma_i>.
// Fully parameterizes a two-qubit Bell-diagonal state.
struct CorrelationVector {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    double operator[](int axis) const {
        switch (axis) {
            case 1: return c1;
            case 2: return c2;
            case 3: return c3;
        }
        throw std::out_of_range("CorrelationVector axis must be 1, 2 or 3");
    }
};

inline std::string to_string(const CorrelationVector& c) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "(%.17g, %.17g, %.17g)", c.c1, c.c2, c.c3);
    return buf;
}

// Eigenvalues of the Bell-diagonal density operator, index order
// (lambda_00, lambda_01, lambda_10, lambda_11):
//   lambda_ij = 1/4 [1 + (-1)^i c1 - (-1)^{i+j} c2 + (-1)^j c3]
inline std::array<double, 4> spectrum_bell(const CorrelationVector& c) {
    return {
        0.25 * (1.0 + c.c1 - c.c2 + c.c3),  // lambda_00
        0.25 * (1.0 + c.c1 + c.c2 - c.c3),  // lambda_01
        0.25 * (1.0 - c.c1 + c.c2 + c.c3),  // lambda_10
        0.25 * (1.0 - c.c1 - c.c2 - c.c3),  // lambda_11
    };
}

// Tolerance absorbing roundoff at the faces of the physical tetrahedron.
inline constexpr double kPhysicalTol = 1e-12;

inline bool is_physical(const CorrelationVector& c) {
    const auto lam = spectrum_bell(c);
    for (double l : lam)
        if (l < -kPhysicalTol) return false;
    return true;
}

// Raised when an operation requiring a physical Bell-diagonal state is
// handed a point outside the tetrahedron. Names the violating eigenvalue.
class UnphysicalStateError : public std::domain_error {
  public:
    UnphysicalStateError(const CorrelationVector& c, int i, int j, double lambda)
        : std::domain_error(format(c, i, j, lambda)), state(c), index_i(i), index_j(j),
          lambda_value(lambda) {}

    CorrelationVector state;
    int index_i;
    int index_j;
    double lambda_value;

  private:
    static std::string format(const CorrelationVector& c, int i, int j, double lambda) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "unphysical state %s: lambda_%d%d = %.6g < 0",
                      to_string(c).c_str(), i, j, lambda);
        return buf;
    }
};

inline void require_physical(const CorrelationVector& c) {
    const auto lam = spectrum_bell(c);
    int worst = 0;
    for (int k = 1; k < 4; ++k)
        if (lam[k] < lam[worst]) worst = k;
    if (lam[worst] < -kPhysicalTol)
        throw UnphysicalStateError(c, worst >> 1, worst & 1, lam[worst]);
}

// (c+, c0, c-): absolute correlation values sorted descending, plus an
// axis index j in {1,2,3} with |c_j| = c+ (ties -> smallest index).
struct OrderedMagnitudes {
    double c_plus = 0.0;
    double c_mid = 0.0;
    double c_minus = 0.0;
    int axis = 1;
};

inline OrderedMagnitudes order_magnitudes(const CorrelationVector& c) {
    const std::array<double, 3> a = {std::fabs(c.c1), std::fabs(c.c2), std::fabs(c.c3)};
    OrderedMagnitudes out;
    out.axis = 1;
    for (int k = 1; k < 3; ++k)
        if (a[k] > a[out.axis - 1]) out.axis = k + 1;
    std::array<double, 3> s = a;
    // 3-element sorting network, descending
    if (s[0] < s[1]) std::swap(s[0], s[1]);
    if (s[1] < s[2]) std::swap(s[1], s[2]);
    if (s[0] < s[1]) std::swap(s[0], s[1]);
    out.c_plus = s[0];
    out.c_mid = s[1];
    out.c_minus = s[2];
    return out;
}

}  // namespace qcorr
