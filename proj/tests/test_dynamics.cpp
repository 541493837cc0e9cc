#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <doublon/dynamics.hpp>

using namespace doublon;
using Catch::Approx;

namespace {

LatticeSpec base_spec() {
    LatticeSpec s = LatticeSpec::fibonacci_ring(10); // L = 55
    s.kappa = 3;
    s.U = -5.0;
    return s;
}

EmitterSpec pair_at(double two_omega_e, double g, int site) {
    EmitterSpec em;
    em.N = 2;
    em.omega_e = two_omega_e / 2.0;
    em.g = g;
    em.n1 = em.n2 = site;
    return em;
}

} // namespace

TEST_CASE("initial_state") {
    const LatticeSpec s = base_spec();
    const EmitterSpec em = pair_at(-5.77, 0.1, 1);
    const QuantumState psi = initial_state(s, em, Sector::two_excitation);
    CHECK(psi.amplitudes.size() == 1651);
    CHECK(std::abs(psi.amplitudes(0)) == Approx(1.0));
    CHECK(psi.norm() == Approx(1.0));

    EmitterSpec single = em;
    single.N = 1;
    const QuantumState psi1 = initial_state(s, single, Sector::one_excitation);
    CHECK(psi1.amplitudes.size() == 56);
    CHECK(std::abs(psi1.amplitudes(0)) == Approx(1.0));
}

TEST_CASE("log_time_grid") {
    const auto t = log_time_grid(2e4, 400);
    REQUIRE(t.size() == 400);
    CHECK(t.back() == Approx(2e4));
    CHECK(std::is_sorted(t.begin(), t.end()));
    CHECK(t.front() > 0.0);
}

TEST_CASE("evolve basics") {
    LatticeSpec s = base_spec();
    s.L = 13;
    s.omega_num = 8;
    s.omega_den = 13;

    SECTION("g = 0 freezes the head") {
        const EmitterSpec em = pair_at(-5.77, 0.0, 1);
        const HamiltonianMatrix h = build_emitter_h(s, em, Sector::two_excitation);
        const QuantumState psi0 = initial_state(s, em, Sector::two_excitation);
        const Trajectory traj = evolve(h, psi0, log_time_grid(100.0, 50));
        for (double p : traj.pe) CHECK(p == Approx(1.0).margin(1e-12));
    }
    SECTION("norm and energy conservation") {
        const EmitterSpec em = pair_at(-5.77, 0.25, 1);
        const HamiltonianMatrix h = build_emitter_h(s, em, Sector::two_excitation);
        const EigenDecomposition d = eigensolve(h);
        const QuantumState psi0 = initial_state(s, em, Sector::two_excitation);
        const auto states = evolve_states(d, psi0, {0.0, 3.7, 21.0, 400.0});
        const double e0 = std::real(
            (psi0.amplitudes.adjoint() * h.entries * psi0.amplitudes)(0, 0));
        for (const auto& st : states) {
            CHECK(std::abs(st.norm() - 1.0) < 1e-10);
            const double e = std::real(
                (st.amplitudes.adjoint() * h.entries * st.amplitudes)(0, 0));
            CHECK(e == Approx(e0).epsilon(1e-9));
        }
    }
    SECTION("time reversal returns the initial state") {
        const EmitterSpec em = pair_at(-5.77, 0.3, 2);
        const EigenDecomposition d = eigensolve(build_emitter_h(s, em, Sector::two_excitation));
        const QuantumState psi0 = initial_state(s, em, Sector::two_excitation);
        auto forward = evolve_states(d, psi0, {137.0});
        auto back = evolve_states(d, forward[0], {-137.0});
        CHECK((back[0].amplitudes - psi0.amplitudes).norm() < 1e-9);
    }
    SECTION("unnormalized initial state rejected") {
        const EmitterSpec em = pair_at(-5.77, 0.1, 1);
        const HamiltonianMatrix h = build_emitter_h(s, em, Sector::two_excitation);
        QuantumState bad = initial_state(s, em, Sector::two_excitation);
        bad.amplitudes *= 2.0;
        CHECK_THROWS_AS(evolve(h, bad, log_time_grid(10.0, 5)), std::invalid_argument);
    }
}

TEST_CASE("sparse evolution agrees with the dense spectral path") {
    LatticeSpec s = base_spec();
    s.L = 21;
    s.omega_num = 13;
    s.omega_den = 21;
    s.lambda = 0.45;
    const EmitterSpec em = pair_at(-5.77, 0.3, 1);
    const QuantumState psi0 = initial_state(s, em, Sector::two_excitation);
    const auto times = log_time_grid(300.0, 80);
    const Trajectory dense = evolve(build_emitter_h(s, em, Sector::two_excitation), psi0, times);
    const Trajectory sparse =
        evolve_sparse(build_sparse_emitter_h(s, em, Sector::two_excitation), psi0, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(sparse.pe[i] == Approx(dense.pe[i]).margin(1e-10));
    }
}

TEST_CASE("single emitter below the band keeps its excitation") {
    const LatticeSpec s = base_spec(); // lambda = 0
    EmitterSpec em = pair_at(-5.77, 0.1, 1);
    em.N = 1;
    const HamiltonianMatrix h = build_emitter_h(s, em, Sector::one_excitation);
    const QuantumState psi0 = initial_state(s, em, Sector::one_excitation);
    const Trajectory traj = evolve(h, psi0, log_time_grid(500.0, 100));
    CHECK(pf(traj, 500.0) > 0.9);
}

TEST_CASE("pf and tail_mean") {
    Trajectory traj;
    for (int i = 0; i <= 100; ++i) {
        traj.times.push_back(i);
        traj.pe.push_back(i < 50 ? 1.0 : 0.25);
    }
    CHECK(pf(traj, 100.0) == 0.25);
    CHECK(pf(traj, 0.0) == 1.0);
    CHECK(tail_mean(traj, 0.6) == Approx(0.25));
    CHECK_THROWS_AS(pf(Trajectory{}, 1.0), std::invalid_argument);
}

TEST_CASE("fit_decay_rate") {
    SECTION("synthetic exponential") {
        Trajectory traj;
        for (int i = 1; i <= 200; ++i) {
            const double t = i * 5.0;
            traj.times.push_back(t);
            traj.pe.push_back(std::exp(-0.01 * t));
        }
        const DecayFit f = fit_decay_rate(traj, 5.0, 1000.0);
        CHECK(f.gamma == Approx(0.01).epsilon(1e-10));
        CHECK(f.r_squared == Approx(1.0).margin(1e-12));
    }
    SECTION("constant trajectory has zero rate") {
        Trajectory traj;
        for (int i = 1; i <= 50; ++i) {
            traj.times.push_back(i);
            traj.pe.push_back(0.7);
        }
        const DecayFit f = fit_decay_rate(traj, 1.0, 50.0);
        CHECK(f.gamma == Approx(0.0).margin(1e-12));
    }
    SECTION("non-positive samples rejected") {
        Trajectory traj;
        traj.times = {1.0, 2.0, 3.0, 4.0};
        traj.pe = {0.5, 0.0, 0.2, 0.1};
        CHECK_THROWS_AS(fit_decay_rate(traj, 0.5, 4.5), std::domain_error);
    }
}

TEST_CASE("lambda_c_scan degenerate cases") {
    LatticeSpec s = base_spec();
    s.L = 13;
    s.omega_num = 8;
    s.omega_den = 13;

    SECTION("g = 0 keeps pf at 1 and flags the scan") {
        const EmitterSpec em = pair_at(-5.77, 0.0, 1);
        ScanOptions opt;
        opt.t_final = 100.0;
        opt.samples = 40;
        const PfScan scan = lambda_c_scan(s, em, {0.0, 0.2, 0.4}, opt);
        for (double p : scan.pf) CHECK(p == Approx(1.0).margin(1e-12));
        CHECK(scan.degenerate);
        CHECK_FALSE(scan.lambda_c.has_value());
    }
    SECTION("unsorted grid rejected") {
        const EmitterSpec em = pair_at(-5.77, 0.1, 1);
        CHECK_THROWS_AS(lambda_c_scan(s, em, {0.4, 0.2}, {}), std::invalid_argument);
    }
}

TEST_CASE("onset detection rule") {
    using doublon::detail::detect_onset;
    SECTION("clean onset with persistence") {
        const std::vector<double> lam{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
        const std::vector<double> val{0.02, 0.03, 0.15, 0.2, 0.3, 0.4};
        const auto [lc, degen] = detect_onset(lam, val, 0.1);
        REQUIRE(lc.has_value());
        CHECK(*lc == 0.3);
        CHECK_FALSE(degen);
    }
    SECTION("isolated blip is ignored") {
        const std::vector<double> lam{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
        const std::vector<double> val{0.02, 0.15, 0.03, 0.02, 0.04, 0.05};
        const auto [lc, degen] = detect_onset(lam, val, 0.1);
        CHECK_FALSE(lc.has_value());
        CHECK_FALSE(degen);
    }
    SECTION("already above threshold at the first point is degenerate") {
        const std::vector<double> lam{0.1, 0.2};
        const std::vector<double> val{0.5, 0.6};
        const auto [lc, degen] = detect_onset(lam, val, 0.1);
        CHECK(degen);
        CHECK_FALSE(lc.has_value());
    }
}

TEST_CASE("choose_coupling_site picks peak and off-peak locations") {
    LatticeSpec s = base_spec();
    s.lambda = 0.8; // localized regime at 2 omega_e = -5.77
    const int peak = choose_coupling_site(s, -5.77, CouplingSiteMode::peak);
    const int off = choose_coupling_site(s, -5.77, CouplingSiteMode::offpeak);
    REQUIRE(peak >= 0);
    REQUIRE(off >= 0);
    CHECK(off % s.kappa == 0); // off-peak lives on a mosaic site
    CHECK(peak != off);

    const EigenDecomposition d = eigensolve(build_two_photon_h(s));
    int best = 0;
    for (int i = 1; i < d.values.size(); ++i) {
        if (std::abs(d.values(i) + 5.77) < std::abs(d.values(best) + 5.77)) best = i;
    }
    const SpatialProfile prof =
        spatial_profile(d.vectors.col(best), build_two_photon_basis(s.L));
    CHECK(prof.weight[static_cast<std::size_t>(peak)] >
          10.0 * prof.weight[static_cast<std::size_t>(off)]);
}

TEST_CASE("me_from_dynamics attaches the analytic inversion") {
    LatticeSpec s = base_spec();
    s.L = 13;
    s.omega_num = 8;
    s.omega_den = 13;
    const EmitterSpec em = pair_at(-5.77, 0.0, 1); // g = 0: scans are degenerate but cheap
    ScanOptions opt;
    opt.t_final = 50.0;
    opt.samples = 20;
    const auto pts = me_from_dynamics(s, em, {-5.77, doublon_zero_energy(s)}, {0.0, 0.3}, opt);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].lambda_c_analytic.has_value());
    CHECK(*pts[0].lambda_c_analytic == Approx(0.3500238217992337).epsilon(1e-12));
    CHECK_FALSE(pts[1].lambda_c_analytic.has_value()); // band center: no crossing
}
