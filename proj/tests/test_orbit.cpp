#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "resonance/orbit.hpp"

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

SpectralState unit_mode(std::size_t i) {
    auto u = SpectralState::zeros(16);
    u.c[i] = 1.0;
    return u;
}

IsolatingNeighborhood box(double R_Q, double R_P) {
    IsolatingNeighborhood nbhd;
    nbhd.R_Q = R_Q;
    nbhd.R_P = R_P;
    return nbhd;
}

}  // namespace

TEST_CASE("unstable directions are the modes under the shifted level", "[orbit]") {
    const auto& s = setup();
    SECTION("one growing mode") {
        const auto u = unstable_directions(s.es, 4.0, -1.5);
        REQUIRE(u.dimension == 1);
        CHECK(u.indices == std::vector<int>{0});
    }
    SECTION("no growing modes") {
        const auto u = unstable_directions(s.es, 4.0, -4.0);
        CHECK(u.dimension == 0);
        CHECK(u.indices.empty());
    }
    SECTION("kernel joins the unstable set above resonance") {
        const auto u = unstable_directions(s.es, 4.0, 1.0);
        CHECK(u.indices == std::vector<int>{0, 1});
    }
    SECTION("guards") {
        CHECK_THROWS_AS(unstable_directions(s.es, 4.0, 0.0), NonhyperbolicOriginError);
        CHECK_THROWS_AS(unstable_directions(s.es, 4.0, 300.0), std::invalid_argument);
    }
}

TEST_CASE("the neighborhood monitor splits norms along the decomposition", "[orbit]") {
    const auto& s = setup();
    const detail::NeighborhoodMonitor mon(s.es, s.d, s.cb, box(10.0, 2.0));

    auto u = SpectralState::zeros(16);
    u.c[1] = 1.5;
    CHECK(mon.p_norm(u) == 1.5);
    CHECK(mon.q_alpha_norm(u) == 0.0);
    CHECK(mon.inside(u));

    u.c[2] = 1.0;  // eigenvalue 9 carries weight 9^alpha
    CHECK(mon.q_alpha_norm(u) == Catch::Approx(std::pow(9.0, 0.8)).epsilon(1e-14));
    auto q_only = SpectralState::zeros(16);
    q_only.c[2] = 1.0;
    CHECK(mon.q_alpha_norm(q_only) ==
          Catch::Approx(fractional_norm(q_only, s.es, s.cb)).epsilon(1e-14));

    u.c[1] = 2.5;
    CHECK_FALSE(mon.inside(u));
    const auto stop = mon.exit_monitor();
    CHECK(stop(0.0, u));
    u.c[1] = 0.5;
    u.c[2] = 0.1;
    CHECK_FALSE(stop(0.0, u));
}

TEST_CASE("tail statistics look only at the trailing window", "[orbit]") {
    Trajectory traj;
    for (int t = 0; t <= 5; ++t) {
        traj.times.push_back(static_cast<double>(t));
        traj.states.push_back(unit_mode(1));
        traj.alpha_norms.push_back(1.0);
        traj.H_norm_P_part.push_back(1.0);
    }
    // An excursion at t = 1 sits outside a window of length 2.
    traj.states[1].c[1] = 7.0;
    traj.alpha_norms[1] = 21.0;
    CHECK(detail::tail_wander(traj, 2.0) == 0.0);
    CHECK(detail::tail_peak_alpha(traj, 2.0) == 1.0);
    CHECK(detail::tail_wander(traj, 100.0) == 6.0);
    CHECK(detail::tail_peak_alpha(traj, 100.0) == 21.0);
}

TEST_CASE("shots validate their offset and direction", "[orbit]") {
    const auto& s = setup();
    const auto model = make_builtin("arctan", {}, EigenSystem::pi());
    const auto nbhd = box(10.0, 2.0);
    IntegratorConfig cfg;
    ShotSpec spec;

    spec.epsilon = 0.5;  // far above R_P / 1000
    CHECK_THROWS_AS(shoot_from_origin(model, s.es, s.d, s.cb, s.grid, 4.0, nbhd, unit_mode(1),
                                      spec, cfg),
                    std::invalid_argument);
    spec.epsilon = 0.0;
    CHECK_THROWS_AS(shoot_from_origin(model, s.es, s.d, s.cb, s.grid, 4.0, nbhd, unit_mode(1),
                                      spec, cfg),
                    std::invalid_argument);
    spec.epsilon = 1e-4;
    CHECK_THROWS_AS(shoot_from_origin(model, s.es, s.d, s.cb, s.grid, 4.0, nbhd,
                                      SpectralState::zeros(16), spec, cfg),
                    std::invalid_argument);
}

TEST_CASE("a kernel shot under strong damping collapses back to the origin", "[orbit]") {
    const auto& s = setup();
    const auto model = make_builtin("strong_res", {-4.0}, EigenSystem::pi());
    IntegratorConfig cfg;
    cfg.t_end = 40.0;
    cfg.step_h = 1e-2;
    cfg.save_stride = 10;
    ShotSpec spec;
    const auto rep = shoot_from_origin(model, s.es, s.d, s.cb, s.grid, 4.0, box(30.0, 10.0),
                                       unit_mode(1), spec, cfg);
    CHECK(rep.fate == OrbitFate::CONVERGES_TO_ZERO);
    CHECK(rep.final_alpha_norm < 1e-6);
    CHECK_FALSE(rep.settled_to_nonzero_equilibrium);
}

TEST_CASE("a kernel shot toward a stable branch climbs onto the nonzero rest point",
          "[orbit]") {
    const auto& s = setup();
    // Slope +1.5 at zero pushes the shot outward along the resonant axis; the
    // saturating tails park it near the rest point at |c_2| ~ 1.66.  The rest
    // point repels in the first mode, so round-off seeded into that mode grows
    // at rate ~2.3 and would eject the orbit near t ~ 13.  The horizon stays
    // below that so the run reports the approach, not the round-off escape.
    const auto model = make_builtin("arctan_minus_gauss", {-1.0, -2.5}, EigenSystem::pi());
    IntegratorConfig cfg;
    cfg.t_end = 8.0;
    cfg.step_h = 1e-2;
    cfg.save_stride = 20;
    ShotSpec spec;
    spec.epsilon = 5e-3;
    const auto rep = shoot_from_origin(model, s.es, s.d, s.cb, s.grid, 4.0, box(20.0, 6.0),
                                       unit_mode(1), spec, cfg);
    CHECK(rep.fate == OrbitFate::BOUNDED_IN_N);
    CHECK(rep.final_P_norm > 1.0);
    CHECK(rep.final_P_norm < 2.2);
    CHECK(rep.trajectory.stop_reason == StopReason::COMPLETED);
    CHECK(rep.final_time == Catch::Approx(8.0));
}

TEST_CASE("a shot along a linearly growing mode leaves the neighborhood", "[orbit]") {
    const auto& s = setup();
    const auto model = make_builtin("arctan_minus_gauss", {1.0, 2.5}, EigenSystem::pi());
    IntegratorConfig cfg;
    cfg.t_end = 20.0;
    cfg.step_h = 1e-2;
    cfg.save_stride = 10;
    ShotSpec spec;
    const auto rep = shoot_from_origin(model, s.es, s.d, s.cb, s.grid, 4.0, box(29.3, 32.0),
                                       unit_mode(0), spec, cfg);
    CHECK(rep.fate == OrbitFate::EXITS_N);
    CHECK(rep.exit_time > 0.0);
    CHECK(rep.exit_time < 15.0);
    CHECK(rep.trajectory.stop_reason == StopReason::STOPPED);
}

TEST_CASE("attraction search inside a small contracting box finds witnesses everywhere",
          "[orbit]") {
    const auto& s = setup();
    const auto model = make_builtin("strong_res", {-4.0}, EigenSystem::pi());
    const auto nbhd = box(1.2, 0.5);
    SearchSpec spec;
    spec.n_starts = 12;
    IntegratorConfig cfg;
    cfg.t_end = 30.0;
    cfg.step_h = 1e-2;
    cfg.save_stride = 10;

    const auto rep =
        forward_attraction_search(model, s.es, s.d, s.cb, s.grid, 4.0, nbhd, spec, cfg);
    CHECK(rep.n_starts == 12);
    CHECK(rep.hits.size() == 12);
    CHECK(rep.n_exited + rep.n_converged_to_zero + rep.n_long_resident == rep.n_starts);
    CHECK(rep.n_converged_to_zero == 12);
    CHECK(rep.connecting_witnesses.size() == 12);
    REQUIRE(rep.best_witness.has_value());
    const double best = rep.hits[static_cast<std::size_t>(*rep.best_witness)].start_P_norm;
    for (const auto& h : rep.hits) {
        CHECK(h.start_P_norm <= best);
        CHECK(h.fate == StartFate::CONVERGED_TO_ZERO);
    }

    // Same seed, same findings.
    const auto again =
        forward_attraction_search(model, s.es, s.d, s.cb, s.grid, 4.0, nbhd, spec, cfg);
    CHECK(again.connecting_witnesses == rep.connecting_witnesses);
    CHECK(again.best_witness == rep.best_witness);
    for (std::size_t i = 0; i < rep.hits.size(); ++i) {
        CHECK(again.hits[i].start_P_norm == rep.hits[i].start_P_norm);
    }
}

TEST_CASE("attraction search reports exits when the kernel pushes outward", "[orbit]") {
    const auto& s = setup();
    const auto model = make_builtin("arctan", {}, EigenSystem::pi());
    SearchSpec spec;
    spec.n_starts = 8;
    IntegratorConfig cfg;
    cfg.t_end = 30.0;
    cfg.step_h = 1e-2;
    cfg.save_stride = 10;
    const auto rep = forward_attraction_search(model, s.es, s.d, s.cb, s.grid, 4.0,
                                               box(3.0, 1.0), spec, cfg);
    CHECK(rep.n_exited == rep.n_starts);
    CHECK(rep.connecting_witnesses.empty());
    CHECK_FALSE(rep.best_witness.has_value());
    for (const auto& h : rep.hits) CHECK(h.exit_time > 0.0);
}

TEST_CASE("attraction search needs at least one start", "[orbit]") {
    const auto& s = setup();
    const auto model = make_builtin("arctan", {}, EigenSystem::pi());
    SearchSpec spec;
    spec.n_starts = 0;
    CHECK_THROWS_AS(forward_attraction_search(model, s.es, s.d, s.cb, s.grid, 4.0,
                                              box(3.0, 1.0), spec, IntegratorConfig{}),
                    std::invalid_argument);
}

TEST_CASE("start and orbit fates have stable report names", "[orbit]") {
    CHECK(std::string(orbit_fate_name(OrbitFate::EXITS_N)) == "exits-neighborhood");
    CHECK(std::string(orbit_fate_name(OrbitFate::BOUNDED_IN_N)) == "bounded-in-neighborhood");
    CHECK(std::string(orbit_fate_name(OrbitFate::CONVERGES_TO_ZERO)) == "converges-to-zero");
    CHECK(std::string(start_fate_name(StartFate::EXITED)) == "exited");
    CHECK(std::string(start_fate_name(StartFate::LONG_RESIDENT)) == "long-resident");
}
