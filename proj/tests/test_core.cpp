#include <algorithm>

#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "qcorr/core.hpp"
#include "qcorr/hermitian.hpp"
#include "qcorr/random.hpp"
#include "qcorr/states.hpp"

using namespace qcorr;

TEST_CASE("bell_density basic states") {
    SECTION("maximally mixed") {
        CHECK(test_util::is_diag(bell_density({0, 0, 0}), 0.25, 0.25, 0.25, 0.25));
    }
    SECTION("Bell vertex (1,-1,1) is a pure projector") {
        const auto eig = hermitian_eigenvalues(bell_density({1, -1, 1}));
        CHECK(eig[0] == Approx(0.0).margin(1e-12));
        CHECK(eig[1] == Approx(0.0).margin(1e-12));
        CHECK(eig[2] == Approx(0.0).margin(1e-12));
        CHECK(eig[3] == Approx(1.0).margin(1e-12));
    }
    SECTION("generic state has the advertised spectrum") {
        const auto eig = hermitian_eigenvalues(bell_density({0.5, -0.4, 0.3}));
        CHECK(eig[0] == Approx(0.10).margin(1e-12));
        CHECK(eig[1] == Approx(0.15).margin(1e-12));
        CHECK(eig[2] == Approx(0.20).margin(1e-12));
        CHECK(eig[3] == Approx(0.55).margin(1e-12));
    }
    SECTION("trace and hermiticity") {
        const auto rho = bell_density({0.5, -0.4, 0.3});
        CHECK(rho.trace().real() == Approx(1.0).margin(1e-14));
        CHECK(rho.is_hermitian());
    }
}

TEST_CASE("spectrum_bell closed form") {
    const auto flat = spectrum_bell({0, 0, 0});
    for (double l : flat) CHECK(l == 0.25);

    const auto vertex = spectrum_bell({1, -1, 1});
    CHECK(vertex[0] == Approx(1.0));
    CHECK(vertex[1] == Approx(0.0).margin(1e-15));
    CHECK(vertex[2] == Approx(0.0).margin(1e-15));
    CHECK(vertex[3] == Approx(0.0).margin(1e-15));

    const auto generic = spectrum_bell({0.5, -0.4, 0.3});
    CHECK(generic[0] == Approx(0.55));
    CHECK(generic[1] == Approx(0.20));
    CHECK(generic[2] == Approx(0.10));
    CHECK(generic[3] == Approx(0.15));
}

TEST_CASE("spectrum_bell sums to one everywhere") {
    SplitMix64 rng(7);
    for (int k = 0; k < 10000; ++k) {
        const CorrelationVector c{rng.next_symmetric(), rng.next_symmetric(),
                                  rng.next_symmetric()};
        const auto lam = spectrum_bell(c);
        CHECK(std::fabs(lam[0] + lam[1] + lam[2] + lam[3] - 1.0) < 1e-14);
    }
}

TEST_CASE("is_physical") {
    CHECK(is_physical({0, 0, 0}));
    CHECK_FALSE(is_physical({0.5, 0.4, 0.3}));  // lambda_11 = -0.05
    CHECK(is_physical({0.5, -0.4, 0.3}));
    CHECK(is_physical({1, -1, 1}));

    SECTION("require_physical names the violating eigenvalue") {
        try {
            require_physical({0.5, 0.4, 0.3});
            FAIL("expected UnphysicalStateError");
        } catch (const UnphysicalStateError& e) {
            CHECK(e.index_i == 1);
            CHECK(e.index_j == 1);
            CHECK(e.lambda_value == Approx(-0.05));
        }
    }
}

TEST_CASE("order_magnitudes") {
    const auto a = order_magnitudes({0.5, -0.4, 0.3});
    CHECK(a.c_plus == 0.5);
    CHECK(a.c_mid == 0.4);
    CHECK(a.c_minus == 0.3);
    CHECK(a.axis == 1);

    const auto tie = order_magnitudes({-0.8, -0.8, -0.8});
    CHECK(tie.c_plus == 0.8);
    CHECK(tie.axis == 1);

    const auto tie23 = order_magnitudes({0, 0.9, -0.9});
    CHECK(tie23.c_plus == 0.9);
    CHECK(tie23.c_mid == 0.9);
    CHECK(tie23.c_minus == 0.0);
    CHECK(tie23.axis == 2);
}

TEST_CASE("apply_measurement") {
    SECTION("maximally mixed state is a fixed point") {
        const auto rho = bell_density({0, 0, 0});
        const auto m = apply_measurement(rho, MeasurementDirection::normalized(1, 2, -1));
        CHECK(test_util::max_entry_diff(m, rho) < 1e-14);
    }
    SECTION("axis measurements keep only that correlation") {
        const CorrelationVector c{0.5, -0.4, 0.3};
        const auto rho = bell_density(c);
        const auto mx = apply_measurement(rho, MeasurementDirection::axis(1));
        CHECK(test_util::max_entry_diff(mx, bell_density({0.5, 0, 0})) < 1e-12);
        const auto mz = apply_measurement(rho, MeasurementDirection::axis(3));
        CHECK(test_util::max_entry_diff(mz, bell_density({0, 0, 0.3})) < 1e-12);
    }
    SECTION("non-unit direction is rejected") {
        CHECK_THROWS_AS(MeasurementDirection(0.5, 0.5, 0.5), std::invalid_argument);
    }
    SECTION("idempotent and trace preserving on random states") {
        SplitMix64 rng(11);
        for (int k = 0; k < 1000; ++k) {
            SplitMix64 stream = stream_for(11, k);
            const auto c = sample_physical_one(stream);
            const auto n = MeasurementDirection::normalized(
                rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric() + 1e-3);
            const auto rho = bell_density(c);
            const auto m1 = apply_measurement(rho, n);
            const auto m2 = apply_measurement(m1, n);
            CHECK(test_util::max_entry_diff(m2, m1) < 1e-12);
            CHECK(std::abs(m1.trace() - cplx(1.0)) < 1e-12);
        }
    }
    SECTION("axis identity for all three axes") {
        for (int k = 0; k < 200; ++k) {
            SplitMix64 stream = stream_for(13, k);
            const auto c = sample_physical_one(stream);
            const auto rho = bell_density(c);
            CorrelationVector axis_only[3] = {{c.c1, 0, 0}, {0, c.c2, 0}, {0, 0, c.c3}};
            for (int j = 1; j <= 3; ++j) {
                const auto m = apply_measurement(rho, MeasurementDirection::axis(j));
                CHECK(test_util::max_entry_diff(m, bell_density(axis_only[j - 1])) < 1e-12);
            }
        }
    }
}

TEST_CASE("product_of_marginals") {
    SECTION("Bell-diagonal states give the normalized identity") {
        const auto pi1 = product_of_marginals(bell_density({0.5, -0.4, 0.3}));
        CHECK(test_util::is_diag(pi1, 0.25, 0.25, 0.25, 0.25));
        const auto pi2 = product_of_marginals(bell_density({1, -1, 1}));
        CHECK(test_util::is_diag(pi2, 0.25, 0.25, 0.25, 0.25));
    }
    SECTION("product states are fixed points") {
        Hermitian4 rho;
        rho(0, 0) = 0.5;
        rho(1, 1) = 0.5;  // |0><0| (x) I/2
        const auto pi = product_of_marginals(rho);
        CHECK(test_util::max_entry_diff(pi, rho) < 1e-14);
    }
}

TEST_CASE("trace_norm") {
    CHECK(trace_norm(Hermitian4::zero()) == 0.0);

    const CorrelationVector c{0.5, -0.4, 0.3};
    const auto rho = bell_density(c);
    CHECK(trace_norm(rho - product_of_marginals(rho)) == Approx(0.6).margin(1e-12));

    Hermitian4 d;
    d(0, 0) = 0.5;
    d(1, 1) = -0.5;
    CHECK(trace_norm(d) == Approx(1.0).margin(1e-14));

    SECTION("non-Hermitian input rejected") {
        Hermitian4 bad;
        bad(0, 1) = 1.0;  // conjugate partner missing
        CHECK_THROWS_AS(trace_norm(bad), std::invalid_argument);
    }

    SECTION("matches the lambda arithmetic on random states") {
        for (int k = 0; k < 10000; ++k) {
            SplitMix64 stream = stream_for(17, k);
            const auto cr = sample_physical_one(stream);
            const auto lam = spectrum_bell(cr);
            double expect = 0.0;
            for (double l : lam) expect += std::fabs(l - 0.25);
            const auto rho_r = bell_density(cr);
            CHECK(std::fabs(trace_norm(rho_r - product_of_marginals(rho_r)) - expect) < 1e-10);
        }
    }
}

TEST_CASE("hermitian_eigenvalues") {
    SECTION("identity/4") {
        const auto eig = hermitian_eigenvalues(0.25 * Hermitian4::identity());
        for (double l : eig) CHECK(l == Approx(0.25).margin(1e-14));
    }
    SECTION("near-diagonal perturbation") {
        Hermitian4 a;
        a(0, 0) = 3.0;
        a(1, 1) = 1.0;
        a(2, 2) = -1.0;
        a(3, 3) = -3.0;
        a(0, 1) = 1e-14;
        a(1, 0) = 1e-14;
        const auto eig = hermitian_eigenvalues(a);
        CHECK(eig[0] == Approx(-3.0).margin(1e-12));
        CHECK(eig[1] == Approx(-1.0).margin(1e-12));
        CHECK(eig[2] == Approx(1.0).margin(1e-12));
        CHECK(eig[3] == Approx(3.0).margin(1e-12));
    }
    SECTION("matches spectrum_bell on random physical states") {
        for (int k = 0; k < 10000; ++k) {
            SplitMix64 stream = stream_for(19, k);
            const auto c = sample_physical_one(stream);
            auto lam = spectrum_bell(c);
            std::sort(lam.begin(), lam.end());
            const auto eig = hermitian_eigenvalues(bell_density(c));
            for (int i = 0; i < 4; ++i) CHECK(std::fabs(eig[i] - lam[i]) < 1e-10);
        }
    }
    SECTION("eigenvector reconstruction residual") {
        SplitMix64 rng(23);
        for (int k = 0; k < 200; ++k) {
            Hermitian4 a;
            for (int i = 0; i < 4; ++i) {
                a(i, i) = rng.next_symmetric();
                for (int j = i + 1; j < 4; ++j) {
                    const cplx z(rng.next_symmetric(), rng.next_symmetric());
                    a(i, j) = z;
                    a(j, i) = std::conj(z);
                }
            }
            const auto es = hermitian_eigensystem(a);
            Hermitian4 lam;
            for (int i = 0; i < 4; ++i) lam(i, i) = es.values[i];
            const auto rebuilt = es.vectors * lam * es.vectors.adjoint();
            CHECK(test_util::max_entry_diff(rebuilt, a) < 1e-10);
        }
    }
}

TEST_CASE("sample_physical") {
    SECTION("deterministic per seed") {
        const auto a = sample_physical(1, 64);
        const auto b = sample_physical(1, 64);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].c1 == b[i].c1);
            CHECK(a[i].c2 == b[i].c2);
            CHECK(a[i].c3 == b[i].c3);
        }
    }
    SECTION("every sample is physical") {
        for (const auto& c : sample_physical(1, 10000)) {
            REQUIRE(is_physical(c));
        }
    }
    SECTION("acceptance ratio near the tetrahedron/cube volume ratio") {
        const auto stats = sample_physical_stats(1, 100000);
        CHECK(stats.acceptance_ratio() > 0.30);
        CHECK(stats.acceptance_ratio() < 0.37);
    }
}
