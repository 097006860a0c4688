#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "resonance/conley.hpp"

namespace {

using namespace resonance;

struct Setup {
    EigenSystem es = build_laplacian_1d(16, EigenSystem::pi());
    Decomposition d;
    ConstantsBundle cb;
    QuadratureGrid grid = default_grid(EigenSystem::pi());

    Setup() : d(decompose(es, 2)), cb(ConstantsBundle::for_model(es, d, 0.8, 0.0)) {}
};

const Setup& setup() {
    static const Setup s;
    return s;
}

ConditionVerdict holding(Condition c) {
    ConditionVerdict v;
    v.condition = c;
    v.holds = true;
    v.margin = 1.0;
    return v;
}

}  // namespace

TEST_CASE("invariant-set index is a sphere counting modes up to or below resonance",
          "[conley]") {
    const auto& s = setup();
    CHECK(index_of_bounded_invariant_set(s.d, holding(Condition::G1)) ==
          HomotopyType::sphere(2));
    CHECK(index_of_bounded_invariant_set(s.d, holding(Condition::G2)) ==
          HomotopyType::sphere(1));
    // Sign conditions enter through their geometric consequences.
    CHECK(index_of_bounded_invariant_set(s.d, holding(Condition::LL1)) ==
          HomotopyType::sphere(2));
    CHECK(index_of_bounded_invariant_set(s.d, holding(Condition::SR2)) ==
          HomotopyType::sphere(1));
}

TEST_CASE("invariant-set index refuses unverified or absent conditions", "[conley]") {
    const auto& s = setup();
    ConditionVerdict none;
    CHECK_THROWS_AS(index_of_bounded_invariant_set(s.d, none), std::invalid_argument);
    ConditionVerdict failed = holding(Condition::G1);
    failed.holds = false;
    CHECK_THROWS_AS(index_of_bounded_invariant_set(s.d, failed), std::invalid_argument);
}

TEST_CASE("origin index counts spectrum strictly below the shifted level", "[conley]") {
    const auto& s = setup();
    CHECK(index_of_origin(s.es, 4.0, -1.5) == HomotopyType::sphere(1));
    CHECK(index_of_origin(s.es, 4.0, -4.0) == HomotopyType::sphere(0));
    CHECK(index_of_origin(s.es, 4.0, 1.0) == HomotopyType::sphere(2));
    CHECK(index_of_origin(s.es, 4.0, 5.5) == HomotopyType::sphere(3));
}

TEST_CASE("origin index rejects levels on or too near the spectrum", "[conley]") {
    const auto& s = setup();
    CHECK_THROWS_AS(index_of_origin(s.es, 4.0, 0.0), NonhyperbolicOriginError);
    CHECK_THROWS_AS(index_of_origin(s.es, 4.0, 5.0), NonhyperbolicOriginError);
    CHECK_THROWS_AS(index_of_origin(s.es, 4.0, 1e-10), NonhyperbolicOriginError);
    try {
        (void)index_of_origin(s.es, 4.0, 0.0);
    } catch (const NonhyperbolicOriginError& e) {
        CHECK(e.lambda_plus_nu() == 4.0);
    }
    // Levels past the retained spectrum are a truncation problem, not a
    // hyperbolicity one.
    CHECK_THROWS_AS(index_of_origin(s.es, 4.0, 300.0), std::invalid_argument);
}

TEST_CASE("connection criterion matches the interval cases and compares indices",
          "[conley]") {
    const auto& s = setup();

    SECTION("level between two lower eigenvalues, kernel-exit condition") {
        const auto rec = connecting_orbit_criterion(s.es, 2, -1.5, holding(Condition::LL1));
        CHECK(rec.k == 2);
        CHECK(rec.lambda == 4.0);
        CHECK(rec.condition_used == Condition::G1);
        CHECK(rec.provenance == "LL1 => G1");
        CHECK(rec.h_K == HomotopyType::sphere(2));
        CHECK(rec.h_0 == HomotopyType::sphere(1));
        CHECK(rec.case_id == ConnectionCase::I);
        CHECK(rec.existence == Existence::EXISTS);
        CHECK(rec.failed_hypothesis.empty());
    }
    SECTION("level under the whole spectrum, kernel-exit condition") {
        const auto rec = connecting_orbit_criterion(s.es, 2, -3.5, holding(Condition::G1));
        CHECK(rec.provenance == "G1");
        CHECK(rec.h_0 == HomotopyType::sphere(0));
        CHECK(rec.case_id == ConnectionCase::II);
        CHECK(rec.existence == Existence::EXISTS);
    }
    SECTION("level above resonance, no-exit condition") {
        const auto rec = connecting_orbit_criterion(s.es, 2, 1.0, holding(Condition::G2));
        CHECK(rec.h_K == HomotopyType::sphere(1));
        CHECK(rec.h_0 == HomotopyType::sphere(2));
        CHECK(rec.case_id == ConnectionCase::III);
        CHECK(rec.existence == Existence::EXISTS);
    }
    SECTION("level under the whole spectrum, no-exit condition") {
        const auto rec = connecting_orbit_criterion(s.es, 2, -4.0, holding(Condition::SR2));
        CHECK(rec.provenance == "SR2 => G2");
        CHECK(rec.h_K == HomotopyType::sphere(1));
        CHECK(rec.h_0 == HomotopyType::sphere(0));
        CHECK(rec.case_id == ConnectionCase::IV);
        CHECK(rec.existence == Existence::EXISTS);
    }
}

TEST_CASE("connection criterion names the interval hypothesis that fails", "[conley]") {
    const auto& s = setup();

    SECTION("level just above the resonant eigenvalue with kernel exit") {
        const auto rec = connecting_orbit_criterion(s.es, 2, 1.0, holding(Condition::G1));
        CHECK(rec.case_id == ConnectionCase::NONE);
        CHECK(rec.existence == Existence::INCONCLUSIVE);
        CHECK(rec.failed_hypothesis == "lambda_l != lambda");
    }
    SECTION("level just below the resonant eigenvalue without kernel exit") {
        const auto rec = connecting_orbit_criterion(s.es, 2, -1.5, holding(Condition::G2));
        CHECK(rec.failed_hypothesis == "lambda != lambda_{l+1}");
        CHECK(rec.existence == Existence::INCONCLUSIVE);
    }
    SECTION("resonance at the bottom of the spectrum without kernel exit") {
        const auto rec = connecting_orbit_criterion(s.es, 1, -0.5, holding(Condition::G2));
        CHECK(rec.failed_hypothesis == "lambda != lambda_1");
        CHECK(rec.existence == Existence::INCONCLUSIVE);
    }
    SECTION("no verified condition at all") {
        ConditionVerdict none;
        const auto rec = connecting_orbit_criterion(s.es, 2, -1.5, none);
        CHECK(rec.failed_hypothesis == "no geometric condition verified");
        CHECK(rec.condition_used == Condition::NONE);
    }
    SECTION("nonhyperbolic level propagates") {
        CHECK_THROWS_AS(connecting_orbit_criterion(s.es, 2, 0.0, holding(Condition::G1)),
                        NonhyperbolicOriginError);
    }
}

TEST_CASE("invariant-set index factors through the linear part and the kernel sphere",
          "[conley]") {
    const auto& s = setup();
    const auto linear = linear_index_check(s.es, s.d, 4.0);
    CHECK(linear.index == HomotopyType::sphere(s.d.dim_Xminus));
    CHECK(index_of_bounded_invariant_set(s.d, holding(Condition::G1)) ==
          smash(linear.index, HomotopyType::sphere(s.d.dim_X0)));
    CHECK(index_of_bounded_invariant_set(s.d, holding(Condition::G2)) ==
          smash(linear.index, HomotopyType::sphere(0)));
}

TEST_CASE("linear cross-check confirms the growth and decay split", "[conley]") {
    const auto& s = setup();
    const auto rep = linear_index_check(s.es, s.d, 4.0, 1.0);
    CHECK(rep.growth_consistent);
    CHECK(rep.n_growing == 1);
    CHECK(rep.min_growth_factor == Catch::Approx(std::exp(3.0)).epsilon(1e-13));
    CHECK(rep.max_decay_factor == Catch::Approx(std::exp(-5.0)).epsilon(1e-13));
    CHECK_THROWS_AS(linear_index_check(s.es, s.d, 4.0, 0.0), std::invalid_argument);
}

TEST_CASE("block verification reads a uniform boundary sign from the field", "[conley]") {
    const auto& s = setup();
    IsolatingNeighborhood nbhd;
    nbhd.R_Q = 5.0;
    nbhd.R_P = 1.5;
    const std::vector<double> s_values = {0.0, 0.5, 1.0};

    SECTION("outward field marks the whole kernel boundary as exit set") {
        const auto model = make_builtin("linear", {1.0}, EigenSystem::pi());
        const auto rep = verify_isolating_block(model, s.es, s.d, s.cb, s.grid, nbhd,
                                                s_values, 8);
        CHECK(rep.verified);
        CHECK(rep.exit_set == ExitSet::FULL_BOUNDARY);
        CHECK(rep.samples == 24);
        CHECK(rep.mixed_witnesses.empty());
        CHECK(rep.min_abs_derivative ==
              Catch::Approx(2.0 * nbhd.R_P * nbhd.R_P).epsilon(1e-9));
    }
    SECTION("inward field leaves the exit set empty") {
        const auto model = make_builtin("linear", {-1.0}, EigenSystem::pi());
        const auto rep = verify_isolating_block(model, s.es, s.d, s.cb, s.grid, nbhd,
                                                s_values, 8);
        CHECK(rep.verified);
        CHECK(rep.exit_set == ExitSet::EMPTY);
    }
    SECTION("sign-ambivalent field is rejected with witnesses") {
        const auto model = make_builtin("const_kernel", {2.0}, EigenSystem::pi());
        const auto rep = verify_isolating_block(model, s.es, s.d, s.cb, s.grid, nbhd,
                                                s_values, 8);
        CHECK_FALSE(rep.verified);
        CHECK_FALSE(rep.mixed_witnesses.empty());
        CHECK(rep.mixed_witnesses.size() <= 8);
    }
    SECTION("argument validation") {
        const auto model = make_builtin("linear", {1.0}, EigenSystem::pi());
        CHECK_THROWS_AS(verify_isolating_block(model, s.es, s.d, s.cb, s.grid, nbhd, {}, 8),
                        std::invalid_argument);
        CHECK_THROWS_AS(verify_isolating_block(model, s.es, s.d, s.cb, s.grid, nbhd,
                                               s_values, 0),
                        std::invalid_argument);
    }
}

TEST_CASE("connection case names match their report spellings", "[conley]") {
    CHECK(std::string(connection_case_name(ConnectionCase::NONE)) == "none");
    CHECK(std::string(connection_case_name(ConnectionCase::I)) == "i");
    CHECK(std::string(connection_case_name(ConnectionCase::IV)) == "iv");
}
