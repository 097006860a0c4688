#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "resonance/nonlinearity.hpp"
#include "resonance/quadrature.hpp"
#include "resonance/sampling.hpp"
#include "resonance/spectral.hpp"

using namespace resonance;
using Catch::Approx;

TEST_CASE("1-D Dirichlet Laplacian spectrum on (0, pi)", "[spectral]") {
    const auto es = build_laplacian_1d(8, EigenSystem::pi());
    REQUIRE(es.n_modes() == 8);
    REQUIRE(es.n_distinct() == 8);
    for (int j = 1; j <= 8; ++j) {
        const double expected = static_cast<double>(j) * static_cast<double>(j);
        CHECK(es.mode_eigenvalue[static_cast<std::size_t>(j - 1)] ==
              Approx(expected).margin(1e-12));
        CHECK(es.multiplicities[static_cast<std::size_t>(j - 1)] == 1);
    }
    SECTION("general length scales as (j pi / L)^2") {
        const double L = 2.5;
        const auto esl = build_laplacian_1d(4, L);
        for (int j = 1; j <= 4; ++j) {
            const double w = j * EigenSystem::pi() / L;
            CHECK(esl.mode_eigenvalue[static_cast<std::size_t>(j - 1)] == Approx(w * w));
        }
    }
}

TEST_CASE("decomposition around the resonant eigenvalue", "[spectral]") {
    SECTION("simple eigenvalue, k = 2 on (0, pi)") {
        const auto es = build_laplacian_1d(6, EigenSystem::pi());
        const auto d = decompose(es, 2);
        CHECK(d.lambda == Approx(4.0).margin(1e-12));
        REQUIRE(d.idx0 == std::vector<int>{1});
        REQUIRE(d.idx_minus == std::vector<int>{0});
        REQUIRE(d.idx_plus == std::vector<int>{2, 3, 4, 5});
        CHECK(d.dim_X0 == 1);
        CHECK(d.dim_Xminus == 1);
        CHECK(d.d_k == 2);
        CHECK(d.d_km1 == 1);
        // min(4 - 1, 9 - 4)
        CHECK(d.spectral_gap_c == Approx(3.0).margin(1e-12));
    }
    SECTION("k = 1 has empty X-") {
        const auto es = build_laplacian_1d(6, EigenSystem::pi());
        const auto d = decompose(es, 1);
        CHECK(d.idx_minus.empty());
        CHECK(d.d_km1 == 0);
        CHECK(d.d_k == 1);
        CHECK(d.spectral_gap_c == Approx(3.0).margin(1e-12));
    }
    SECTION("repeated eigenvalues accumulate in d_k") {
        const auto es = make_abstract_system({1.0, 4.0}, {2, 3});
        const auto d = decompose(es, 2);
        CHECK(d.dim_X0 == 3);
        CHECK(d.dim_Xminus == 2);
        CHECK(d.d_k == 5);
        CHECK(d.d_km1 == 2);
        CHECK(d.spectral_gap_c == Approx(3.0));
    }
    SECTION("single distinct eigenvalue has no finite gap") {
        const auto es = make_abstract_system({2.0}, {3});
        const auto d = decompose(es, 1);
        CHECK(std::isinf(d.spectral_gap_c));
    }
    SECTION("k out of range is rejected") {
        const auto es = build_laplacian_1d(3, 1.0);
        CHECK_THROWS_AS(decompose(es, 0), std::invalid_argument);
        CHECK_THROWS_AS(decompose(es, 4), std::invalid_argument);
    }
}

TEST_CASE("projections split states orthogonally", "[spectral]") {
    const auto es = build_laplacian_1d(16, EigenSystem::pi());
    const auto d = decompose(es, 3);
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        SpectralState u(es.n_modes());
        for (auto& v : u.c) v = rng.normal();
        const auto p = project(u, d, Part::P);
        const auto qp = project(u, d, Part::QPlus);
        const auto qm = project(u, d, Part::QMinus);
        const auto q = project(u, d, Part::Q);

        SpectralState recon = sum(sum(p, qp), qm);
        for (std::size_t i = 0; i < u.size(); ++i) {
            REQUIRE(recon.c[i] == Approx(u.c[i]).margin(1e-10));
            REQUIRE(q.c[i] == Approx(qp.c[i] + qm.c[i]).margin(1e-15));
        }
        REQUIRE(std::abs(dot(p, qp)) < 1e-10);
        REQUIRE(std::abs(dot(p, qm)) < 1e-10);
        REQUIRE(std::abs(dot(qp, qm)) < 1e-10);

        // idempotence and unit operator norm
        const auto pp = project(p, d, Part::P);
        for (std::size_t i = 0; i < u.size(); ++i) REQUIRE(pp.c[i] == p.c[i]);
        REQUIRE(l2_norm(p) <= l2_norm(u) + 1e-12);
        REQUIRE(l2_norm(q) <= l2_norm(u) + 1e-12);
    }
}

TEST_CASE("fractional norm weights modes by (lambda + delta)^alpha", "[spectral]") {
    const auto es = build_laplacian_1d(8, EigenSystem::pi());
    SECTION("second mode at alpha = 0.8") {
        const auto u = SpectralState::unit(es.n_modes(), 1);
        const double expected = std::pow(4.0, 0.8);
        CHECK(fractional_norm(u, es, 0.8, 0.0) == Approx(expected).epsilon(1e-12));
        CHECK(expected == Approx(3.0314).margin(5e-4));
    }
    SECTION("alpha -> 0 with delta = 0 recovers the plain norm") {
        Rng rng(5);
        SpectralState u(es.n_modes());
        for (auto& v : u.c) v = rng.normal();
        CHECK(fractional_norm(u, es, 1e-12, 0.0) == Approx(l2_norm(u)).epsilon(1e-9));
    }
    SECTION("invalid operator shift is rejected") {
        const auto neg = make_abstract_system({-2.0, 1.0}, {1, 1});
        const SpectralState u(neg.n_modes());
        CHECK_THROWS_AS(fractional_norm(u, neg, 0.8, 0.0), std::invalid_argument);
        CHECK_NOTHROW(fractional_norm(u, neg, 0.8, 3.0));
    }
    SECTION("bundle overload agrees") {
        const auto d = decompose(es, 2);
        const auto cb = ConstantsBundle::for_model(es, d, 0.8, 0.0);
        const auto u = SpectralState::unit(es.n_modes(), 1);
        CHECK(fractional_norm(u, es, cb) == Approx(fractional_norm(u, es, 0.8, 0.0)));
        CHECK(cb.M == 1.0);
        CHECK(cb.c == Approx(3.0));
    }
}

TEST_CASE("constants bundle validates its ranges", "[spectral]") {
    CHECK_THROWS_AS(ConstantsBundle(0.5, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ConstantsBundle(1.0, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ConstantsBundle(0.8, -0.1, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ConstantsBundle(0.8, 0.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ConstantsBundle(0.8, 0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_NOTHROW(ConstantsBundle(0.8, 0.0, 1.0, 3.0));

    const auto neg = make_abstract_system({-1.0, 2.0}, {1, 1});
    const auto d = decompose(neg, 1);
    CHECK_THROWS_AS(ConstantsBundle::for_model(neg, d, 0.8, 0.0), std::invalid_argument);
    CHECK_NOTHROW(ConstantsBundle::for_model(neg, d, 0.8, 2.0));
}

TEST_CASE("shifted semigroup is diagonal and exact", "[spectral]") {
    const auto es = build_laplacian_1d(8, EigenSystem::pi());
    const double lambda = es.distinct_eigenvalues[1];  // resonance at the second mode

    SECTION("decay on the stable part: factor e^{-5t} for phi_3") {
        const auto u = SpectralState::unit(es.n_modes(), 2);
        for (double t : {0.1, 0.5, 1.0, 2.0}) {
            const auto v = shifted_semigroup_apply(u, es, lambda, t);
            CHECK(l2_norm(v) == Approx(std::exp(-5.0 * t)).epsilon(1e-12));
        }
    }
    SECTION("kernel mode is fixed") {
        const auto u = SpectralState::unit(es.n_modes(), 1);
        const auto v = shifted_semigroup_apply(u, es, lambda, 10.0);
        CHECK(v.c[1] == 1.0);
        CHECK(l2_norm(difference(v, u)) == 0.0);
    }
    SECTION("backward evolution on X- matches the exact exponential") {
        const auto u = SpectralState::unit(es.n_modes(), 0);
        const double t = -2.0;
        const auto v = shifted_semigroup_apply(u, es, lambda, t);
        CHECK(v.c[0] == Approx(std::exp(3.0 * t)).epsilon(1e-12));
    }
    SECTION("backward evolution with mass on X+ is rejected") {
        auto u = SpectralState::unit(es.n_modes(), 2);
        CHECK_THROWS_AS(shifted_semigroup_apply(u, es, lambda, -0.5), BackwardFlowError);
        u.c[2] = 0.0;
        u.c[0] = 1.0;
        u.c[1] = 2.0;
        CHECK_NOTHROW(shifted_semigroup_apply(u, es, lambda, -0.5));
    }
    SECTION("semigroup property S(t) S(s) = S(t + s)") {
        Rng rng(7);
        SpectralState u(es.n_modes());
        for (auto& v : u.c) v = rng.normal();
        const auto one_step = shifted_semigroup_apply(u, es, lambda, 0.7);
        const auto two_step =
            shifted_semigroup_apply(shifted_semigroup_apply(u, es, lambda, 0.3), es, lambda, 0.4);
        for (std::size_t i = 0; i < u.size(); ++i) {
            REQUIRE(two_step.c[i] == Approx(one_step.c[i]).epsilon(1e-12).margin(1e-300));
        }
    }
    SECTION("decay and growth estimates with M = 1, c = gap") {
        const auto d = decompose(es, 2);
        Rng rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            SpectralState u(es.n_modes());
            for (auto& v : u.c) v = rng.normal();
            const auto xplus = project(u, d, Part::QPlus);
            for (double t : {0.1, 1.0, 10.0}) {
                const auto img = shifted_semigroup_apply(xplus, es, lambda, t);
                REQUIRE(l2_norm(img) <= std::exp(-d.spectral_gap_c * t) * l2_norm(xplus) + 1e-12);
            }
            const auto xminus = project(u, d, Part::QMinus);
            for (double t : {-0.1, -1.0, -10.0}) {
                const auto img = shifted_semigroup_apply(xminus, es, lambda, t);
                REQUIRE(l2_norm(img) <= std::exp(d.spectral_gap_c * t) * l2_norm(xminus) + 1e-12);
            }
        }
    }
}

TEST_CASE("sine eigenfunctions are orthonormal under quadrature", "[spectral]") {
    const auto es = build_laplacian_1d(64, EigenSystem::pi());
    const auto grid = make_composite_gauss(EigenSystem::pi(), 8, 32);  // 256 nodes
    REQUIRE(grid.size() == 256);
    const SynthesisTable table(es, grid);

    // Gram matrix via the tabulated eigenfunctions.
    for (std::size_t a : {0ul, 1ul, 2ul, 10ul, 40ul, 63ul}) {
        for (std::size_t b : {0ul, 1ul, 2ul, 10ul, 40ul, 63ul}) {
            double g = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                g += grid.weights[i] * table.phi[i * table.n_modes + a] *
                     table.phi[i * table.n_modes + b];
            }
            const double expected = (a == b) ? 1.0 : 0.0;
            REQUIRE(g == Approx(expected).margin(1e-10));
        }
    }
}

TEST_CASE("abstract systems refuse pointwise evaluation", "[spectral]") {
    const auto es = make_abstract_system({1.0, 4.0}, {1, 1});
    CHECK_THROWS_AS(es.eigenfunction(1, 0.5), UnsupportedBasisError);
    const auto grid = make_composite_gauss(1.0, 4, 4);
    CHECK_THROWS_AS(SynthesisTable(es, grid), UnsupportedBasisError);
}
