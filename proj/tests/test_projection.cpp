#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <graphmatch/permutation.hpp>
#include <graphmatch/projection.hpp>
#include <graphmatch/random.hpp>

#include "testutil.hpp"

using namespace gm;
using gmtest::rel_err;

TEST_CASE("dual value on worked examples") {
    SUBCASE("all zeros") {
        CHECK(dual_value(Matrix::Zero(3, 3), Vector::Zero(3), Vector::Zero(3)) == 0.0);
    }
    SUBCASE("rank-one shift") {
        // y = e, z = 0, C = 0: P+(y e^T) is all ones, 1/2*4 - 2 = 0
        CHECK(dual_value(Matrix::Zero(2, 2), Vector::Ones(2), Vector::Zero(2)) == doctest::Approx(0.0));
    }
    SUBCASE("scalar case") {
        for (double c : {-2.0, 0.0, 1.5}) {
            Matrix C(1, 1);
            C << c;
            CHECK(dual_value(C, Vector::Zero(1), Vector::Zero(1)) ==
                  doctest::Approx(0.5 * std::max(c, 0.0) * std::max(c, 0.0)));
        }
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(dual_value(Matrix::Zero(2, 2), Vector::Zero(3), Vector::Zero(2)), std::invalid_argument);
    }
}

TEST_CASE("dual gradient") {
    SUBCASE("identity is already feasible") {
        const auto [gy, gz] = dual_gradient(Matrix::Identity(2, 2), Vector::Zero(2), Vector::Zero(2));
        CHECK(gy.norm() == 0.0);
        CHECK(gz.norm() == 0.0);
    }
    SUBCASE("matches finite differences at nondegenerate points") {
        SplitMix64 rng(31);
        int checked = 0;
        while (checked < 20) {
            const int n = 3 + static_cast<int>(rng.next_below(3));
            const Matrix C = random_matrix(n, rng, -2, 2);
            Vector y(n), z(n);
            for (int i = 0; i < n; ++i) {
                y[i] = rng.next_double() - 0.5;
                z[i] = rng.next_double() - 0.5;
            }
            // skip configurations with entries near the clamping kink
            Matrix M = C;
            M.colwise() += y;
            M.rowwise() += z.transpose();
            if (M.cwiseAbs().minCoeff() < 1e-3) continue;
            ++checked;
            const auto [gy, gz] = dual_gradient(C, y, z);
            const double h = 1e-6;
            for (int i = 0; i < n; ++i) {
                Vector yp = y, ym = y;
                yp[i] += h;
                ym[i] -= h;
                const double numeric = (dual_value(C, yp, z) - dual_value(C, ym, z)) / (2 * h);
                CHECK(rel_err(gy[i], numeric) <= 1e-5);
            }
            for (int i = 0; i < n; ++i) {
                Vector zp = z, zm = z;
                zp[i] += h;
                zm[i] -= h;
                const double numeric = (dual_value(C, y, zp) - dual_value(C, y, zm)) / (2 * h);
                CHECK(rel_err(gz[i], numeric) <= 1e-5);
            }
        }
    }
}

TEST_CASE("projection fixed points and closed forms") {
    SUBCASE("identity projects to itself") {
        const auto res = project_birkhoff(Matrix::Identity(4, 4));
        CHECK(res.converged);
        CHECK((res.X - Matrix::Identity(4, 4)).norm() <= 1e-8);
    }
    SUBCASE("all-ones projects to the barycenter") {
        const auto res = project_birkhoff(Matrix::Ones(5, 5));
        CHECK(res.converged);
        CHECK((res.X - uniform_barycenter(5)).norm() <= 1e-7);
    }
    SUBCASE("closed-form 2x2 case") {
        Matrix C(2, 2);
        C << 2, 0, 0, 0;
        const auto res = project_birkhoff(C);
        CHECK(res.converged);
        CHECK((res.X - Matrix::Identity(2, 2)).norm() <= 1e-7);
    }
    SUBCASE("non-finite input is rejected") {
        Matrix C = Matrix::Zero(2, 2);
        C(0, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(project_birkhoff(C), std::invalid_argument);
    }
    SUBCASE("iteration cap returns a flagged best iterate") {
        SplitMix64 rng(33);
        const auto res = project_birkhoff(random_matrix(6, rng, -2, 2), 1e-10, 2);
        CHECK_FALSE(res.converged);
        CHECK(res.X.rows() == 6);
        CHECK(std::isfinite(res.grad_norm));
    }
}

TEST_CASE("dykstra oracle agrees with the dual method") {
    SplitMix64 rng(35);
    for (int n : {3, 5, 10}) {
        for (int trial = 0; trial < 25; ++trial) {
            const Matrix C = random_matrix(n, rng, -2, 2);
            const auto res = project_birkhoff(C, 1e-9, 100000);
            REQUIRE(res.converged);
            const Matrix ref = project_birkhoff_oracle(C, 1e-10);
            CHECK((res.X - ref).norm() <= 1e-6);
        }
    }
}

TEST_CASE("dykstra oracle fixed points") {
    SplitMix64 rng(37);
    SUBCASE("feasible points survive") {
        const Matrix X = gmtest::random_doubly_stochastic(5, rng);
        CHECK((project_birkhoff_oracle(X, 1e-11) - X).norm() <= 1e-8);
    }
    SUBCASE("vertices survive") {
        const Matrix P = random_permutation(6, rng).to_matrix();
        CHECK((project_birkhoff_oracle(P, 1e-11) - P).norm() <= 1e-8);
    }
}

TEST_CASE("projection properties") {
    SplitMix64 rng(39);
    SUBCASE("nonexpansiveness") {
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix C1 = random_matrix(6, rng, -2, 2);
            const Matrix C2 = random_matrix(6, rng, -2, 2);
            const Matrix X1 = project_birkhoff(C1, 1e-9, 100000).X;
            const Matrix X2 = project_birkhoff(C2, 1e-9, 100000).X;
            CHECK((X1 - X2).norm() <= (C1 - C2).norm() + 1e-7);
        }
    }
    SUBCASE("idempotence") {
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix C = random_matrix(5, rng, -2, 2);
            const Matrix X = project_birkhoff(C, 1e-9, 100000).X;
            const Matrix XX = project_birkhoff(X, 1e-9, 100000).X;
            CHECK((XX - X).norm() <= 2e-9 * 3);
        }
    }
    SUBCASE("variational inequality certificate") {
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 4 + static_cast<int>(rng.next_below(4));
            const Matrix C = random_matrix(n, rng, -2, 2);
            const Matrix X = project_birkhoff(C, 1e-9, 100000).X;
            for (int s = 0; s < 50; ++s) {
                const Matrix Y = gmtest::random_doubly_stochastic(n, rng);
                CHECK((C - X).cwiseProduct(Y - X).sum() <= 1e-6);
            }
        }
    }
    SUBCASE("primal recovery is bit-exact") {
        const Matrix C = random_matrix(7, rng, -2, 2);
        const auto res = project_birkhoff(C, 1e-8, 100000);
        REQUIRE(res.converged);
        Matrix M = C;
        M.colwise() += res.dual.y;
        M.rowwise() += res.dual.z.transpose();
        CHECK(res.X == M.cwiseMax(0.0));
    }
    SUBCASE("feasibility at the scaled tolerance") {
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix C = random_matrix(9, rng, -2, 2);
            const auto res = project_birkhoff(C, 1e-8, 100000);
            REQUIRE(res.converged);
            CHECK(is_doubly_stochastic(res.X, 1e-8 * 3.0));
        }
    }
}

TEST_CASE("warm starts cut the total iteration count on projection chains") {
    // single calls can go either way; the win is over a drifting sequence
    // like the one a projected-gradient run produces
    SplitMix64 rng(41);
    Matrix C = random_matrix(12, rng, -2, 2);
    BirkhoffProjector warm(1e-9, 200000);
    long warm_total = 0, cold_total = 0;
    for (int k = 0; k < 15; ++k) {
        C += random_matrix(12, rng, -0.02, 0.02);
        const auto w = warm.project(C);
        const auto c = project_birkhoff(C, 1e-9, 200000);
        REQUIRE(w.converged);
        REQUIRE(c.converged);
        CHECK((w.X - c.X).norm() <= 1e-6);
        warm_total += w.iterations;
        cold_total += c.iterations;
    }
    CHECK(warm_total < cold_total);
}
