#pragma once

#include <cmath>

#include "qcorr/hermitian.hpp"

namespace test_util {

inline double max_entry_diff(const qcorr::Hermitian4& a, const qcorr::Hermitian4& b) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

inline bool is_diag(const qcorr::Hermitian4& a, double d0, double d1, double d2, double d3,
                    double tol = 1e-12) {
    qcorr::Hermitian4 expect;
    expect(0, 0) = d0;
    expect(1, 1) = d1;
    expect(2, 2) = d2;
    expect(3, 3) = d3;
    return max_entry_diff(a, expect) <= tol;
}

}  // namespace test_util
