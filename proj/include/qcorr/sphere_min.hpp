#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace qcorr {

struct SphereMinimum {
    double value = 0.0;
    std::array<double, 3> direction{0.0, 0.0, 1.0};
};

// Two-stage minimization of f(n) over unit vectors n. The objective is
// even in n (it depends on n only through u = (n1^2, n2^2, n3^2)), so the
// search is restricted to the upper hemisphere n3 >= 0. Stage one is a
// latitude/longitude grid with n_theta divisions of [0, pi/2]; stage two
// runs three local 11x11 refinement rounds, shrinking the window by 10x
// per round. Grid nodes hit the coordinate axes exactly.
template <typename F>
SphereMinimum minimize_over_sphere(F&& f, int n_theta) {
    using std::numbers::pi;
    const int n_phi = 4 * n_theta;

    auto eval = [&](double theta, double phi) {
        const double st = std::sin(theta);
        return f(st * std::cos(phi), st * std::sin(phi), std::cos(theta));
    };

    double best_theta = 0.0, best_phi = 0.0;
    double best = eval(0.0, 0.0);
    for (int i = 0; i <= n_theta; ++i) {
        const double theta = (pi / 2.0) * i / n_theta;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = (2.0 * pi) * j / n_phi;
            const double v = eval(theta, phi);
            if (v < best) {
                best = v;
                best_theta = theta;
                best_phi = phi;
            }
        }
    }

    double half_theta = (pi / 2.0) / n_theta;
    double half_phi = (2.0 * pi) / n_phi;
    for (int round = 0; round < 3; ++round) {
        const double t0 = best_theta, p0 = best_phi;
        for (int a = -5; a <= 5; ++a) {
            const double theta = std::clamp(t0 + half_theta * a / 5.0, 0.0, pi / 2.0);
            for (int b = -5; b <= 5; ++b) {
                const double phi = p0 + half_phi * b / 5.0;
                const double v = eval(theta, phi);
                if (v < best) {
                    best = v;
                    best_theta = theta;
                    best_phi = phi;
                }
            }
        }
        half_theta /= 10.0;
        half_phi /= 10.0;
    }

    SphereMinimum out;
    out.value = best;
    const double st = std::sin(best_theta);
    out.direction = {st * std::cos(best_phi), st * std::sin(best_phi), std::cos(best_theta)};
    return out;
}

}  // namespace qcorr
