#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <doublon/bands.hpp>

using namespace doublon;
using Catch::Approx;

namespace {

LatticeSpec spec_u(double U) {
    LatticeSpec s = LatticeSpec::fibonacci_ring(10);
    s.U = U;
    return s;
}

} // namespace

TEST_CASE("scattering_energy") {
    const LatticeSpec s = spec_u(-5.0);
    CHECK(scattering_energy(0.0, 0.0, s) == Approx(-4.0));
    CHECK(scattering_energy(pi, 0.37, s) == Approx(0.0).margin(1e-12));

    double lo = 1e9, hi = -1e9;
    for (int i = 0; i <= 200; ++i) {
        for (int j = 0; j <= 200; ++j) {
            const double K = -pi + 2 * pi * i / 200.0;
            const double k = -pi + 2 * pi * j / 200.0;
            const double E = scattering_energy(K, k, s);
            lo = std::min(lo, E);
            hi = std::max(hi, E);
        }
    }
    CHECK(hi - lo == Approx(8.0)); // bandwidth E_S = 8J
}

TEST_CASE("bound_energy") {
    const LatticeSpec s = spec_u(4.0);
    CHECK(bound_energy(pi, s, +1) == Approx(4.0));
    CHECK(bound_energy(pi, s, -1) == Approx(-4.0));
    CHECK(bound_energy(0.0, s, +1) == Approx(std::sqrt(32.0)));
    CHECK(bound_energy(0.0, s, -1) == Approx(-std::sqrt(32.0)));
    for (double K = 0.0; K <= pi; K += 0.1) {
        CHECK(std::abs(bound_energy(K, s, +1)) >= std::abs(s.U) - 1e-12);
    }
}

TEST_CASE("j_eff") {
    CHECK(j_eff(spec_u(0.0)) == Approx(1.0 / std::sqrt(2.0)));
    CHECK(j_eff(spec_u(-5.0)) == Approx(2.0 / std::sqrt(33.0)).epsilon(1e-14));
    CHECK(j_eff(spec_u(-25.0)) == Approx(2.0 / 25.0).epsilon(0.01)); // large-U asymptote
}

TEST_CASE("doublon_zero_energy") {
    CHECK(doublon_zero_energy(spec_u(0.0)) == Approx(-2.0 * std::sqrt(2.0)));
    CHECK(doublon_zero_energy(spec_u(-5.0)) == Approx(-std::sqrt(33.0)).epsilon(1e-14));
    const LatticeSpec s = spec_u(-7.3);
    CHECK(doublon_zero_energy(s) == Approx(bound_energy(pi / 2.0, s, -1)).epsilon(1e-14));
}

TEST_CASE("mobility_edges") {
    SECTION("kappa=2") {
        LatticeSpec s = spec_u(-5.0);
        s.kappa = 2;
        s.lambda = 1.0;
        const MobilityEdgePair me = mobility_edges(s);
        const double E0 = -std::sqrt(33.0), Jf = 2.0 / std::sqrt(33.0);
        REQUIRE(me.branches.size() == 2);
        CHECK(me.branches[0] == Approx(E0 - Jf).epsilon(1e-14));
        CHECK(me.branches[1] == Approx(E0 + Jf).epsilon(1e-14));
        // symmetric about E0 to machine precision
        CHECK(me.branches[0] + me.branches[1] == Approx(2.0 * E0).margin(1e-12));
    }
    SECTION("kappa=3 branch count and large-lambda limit") {
        LatticeSpec s = spec_u(-5.0);
        s.kappa = 3;
        s.lambda = 0.2; // J_eff / lambda > 1: inner branches are complex
        CHECK(mobility_edges(s).branches.size() == 2);
        s.lambda = 1.0;
        CHECK(mobility_edges(s).branches.size() == 4);
        s.lambda = 1e9;
        const MobilityEdgePair me = mobility_edges(s);
        const double E0 = me.E0, Jf = me.J_eff;
        CHECK(me.branches.front() == Approx(E0 - Jf).epsilon(1e-6));
        CHECK(me.branches.back() == Approx(E0 + Jf).epsilon(1e-6));
    }
    SECTION("kappa=1 and kappa=4 unsupported") {
        LatticeSpec s = spec_u(-5.0);
        s.lambda = 1.0;
        s.kappa = 1;
        CHECK_THROWS_AS(mobility_edges(s), std::invalid_argument);
        s.kappa = 4;
        CHECK_THROWS_AS(mobility_edges(s), std::invalid_argument);
    }
}

TEST_CASE("critical_lambda") {
    LatticeSpec s = spec_u(-5.0);
    s.kappa = 3;
    SECTION("paper point: 2 omega_e = -5.77 gives 0.35") {
        const auto lc = critical_lambda(-5.77, s);
        REQUIRE(lc.has_value());
        CHECK(*lc == Approx(0.3500238217992337).epsilon(1e-12));
    }
    SECTION("kappa=2 inverse consistency") {
        LatticeSpec s2 = s;
        s2.kappa = 2;
        const double E0 = doublon_zero_energy(s2), Jf = j_eff(s2);
        for (double lam : {0.4, 0.9, 1.7}) {
            const auto lc = critical_lambda(E0 + Jf / lam, s2);
            REQUIRE(lc.has_value());
            CHECK(*lc == Approx(lam).epsilon(1e-12));
        }
    }
    SECTION("kappa=3 outer-branch inversion") {
        const double E0 = doublon_zero_energy(s), Jf = j_eff(s);
        for (double lam : {0.5, 1.2}) {
            const double edge = E0 - Jf * std::sqrt(1.0 + Jf / lam);
            const auto lc = critical_lambda(edge, s);
            REQUIRE(lc.has_value());
            CHECK(*lc == Approx(lam).epsilon(1e-10));
        }
    }
    SECTION("band center has no finite crossing") {
        CHECK_FALSE(critical_lambda(doublon_zero_energy(s), s).has_value());
    }
    SECTION("outside the band is a domain error") {
        CHECK_THROWS_AS(critical_lambda(-4.0, s), std::domain_error);
        CHECK_THROWS_AS(critical_lambda(-7.0, s), std::domain_error);
    }
}

TEST_CASE("group_velocity") {
    const LatticeSpec s = spec_u(-5.0);
    CHECK(group_velocity(pi, s) == Approx(0.0).margin(1e-12));
    CHECK(group_velocity(pi / 2.0, s) == Approx(2.0 * j_eff(s)).epsilon(1e-12));

    // finite difference of bound_energy
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.15, pi - 0.15);
    for (int i = 0; i < 10; ++i) {
        const double K = dist(rng);
        const double h = 1e-6;
        const double fd = (bound_energy(K + h, s, -1) - bound_energy(K - h, s, -1)) / (2.0 * h);
        CHECK(group_velocity(K, s) == Approx(std::abs(fd)).epsilon(1e-5));
    }
}

TEST_CASE("decay_rate") {
    const LatticeSpec s = spec_u(-5.0);
    SECTION("quartic coupling scaling") {
        const DecayPrediction a = decay_rate_at(-5.77, 0.1, s);
        const DecayPrediction b = decay_rate_at(-5.77, 0.2, s);
        CHECK(b.Gamma / a.Gamma == Approx(16.0).epsilon(1e-12));
    }
    SECTION("root condition") {
        const DecayPrediction p = decay_rate_at(-5.77, 0.1, s);
        CHECK(bound_energy(p.K0, s, -1) == Approx(-5.77).margin(1e-10));
    }
    SECTION("off-resonant frequencies are rejected") {
        CHECK_THROWS_AS(decay_rate_at(-4.2, 0.1, s), std::domain_error);
        CHECK_THROWS_AS(decay_rate_at(-8.0, 0.1, s), std::domain_error);
    }
    SECTION("EmitterSpec overload and f scaling") {
        EmitterSpec em;
        em.omega_e = -5.77 / 2.0;
        em.g = 0.1;
        const DecayPrediction p1 = decay_rate(s, em, 1.0);
        const DecayPrediction p2 = decay_rate(s, em, 2.0);
        CHECK(p2.Gamma == Approx(4.0 * p1.Gamma).epsilon(1e-12));
    }
}

TEST_CASE("greens_function_r0") {
    const LatticeSpec s = spec_u(-5.0);
    SECTION("bound-state condition 1/U = G at the Eq.-(9) roots") {
        for (double K : {0.3, 1.1, 2.2}) {
            const double E = bound_energy(K, s, -1);
            CHECK(greens_function_r0(E, K, s) == Approx(1.0 / s.U).epsilon(1e-12));
            const double Ep = bound_energy(K, s, +1);
            CHECK(greens_function_r0(Ep, K, s) == Approx(-1.0 / s.U).epsilon(1e-12));
        }
    }
    SECTION("free limit G -> 1/(E - 2 w_c)") {
        CHECK(greens_function_r0(500.0, 1.0, s) == Approx(1.0 / 500.0).epsilon(1e-3));
    }
    SECTION("quadrature oracle at random (E, K)") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> kd(0.1, pi - 0.4);
        std::uniform_real_distribution<double> ed(0.3, 4.0);
        for (int i = 0; i < 10; ++i) {
            const double K = kd(rng);
            const double JK = 2.0 * std::cos(K / 2.0);
            const double E = -(2.0 * JK + ed(rng)); // below the continuum at this K
            const int n = 100000;
            double acc = 0.0;
            for (int q = 0; q < n; ++q) {
                const double x = -pi + 2.0 * pi * (q + 0.5) / n;
                acc += 1.0 / (E + 2.0 * JK * std::cos(x));
            }
            acc /= n;
            CHECK(greens_function_r0(E, K, s) == Approx(acc).epsilon(1e-6));
        }
    }
    SECTION("inside the continuum is a branch-cut error") {
        CHECK_THROWS_AS(greens_function_r0(0.0, 0.3, s), std::domain_error);
    }
}

TEST_CASE("bound_wavefunction") {
    SECTION("decay factor at K=0, U=-4") {
        const LatticeSpec s = spec_u(-4.0);
        const BoundWavefunction b = bound_state_profile(0.0, s);
        CHECK(b.rho == Approx(0.41421356237309515).epsilon(1e-12));
    }
    SECTION("normalization and exact geometric decay") {
        const LatticeSpec s = spec_u(-5.0);
        double norm = 0.0;
        for (int r = -60; r <= 60; ++r) {
            const double a = bound_wavefunction(r, 0.8, s);
            norm += a * a;
        }
        CHECK(norm == Approx(1.0).epsilon(1e-10));
        const BoundWavefunction b = bound_state_profile(0.8, s);
        for (int r = 0; r < 6; ++r) {
            CHECK(bound_wavefunction(r + 1, 0.8, s) / bound_wavefunction(r, 0.8, s) ==
                  Approx(b.rho).epsilon(1e-12));
        }
    }
    SECTION("U -> infinity pins the pair") {
        const LatticeSpec s = spec_u(-4000.0);
        CHECK(bound_wavefunction(0, 0.5, s) == Approx(1.0).epsilon(1e-5));
        CHECK(std::abs(bound_wavefunction(1, 0.5, s)) < 1e-3);
    }
    SECTION("U=0 is not normalizable") {
        const LatticeSpec s = spec_u(0.0);
        CHECK_FALSE(bound_state_profile(0.7, s).normalizable);
        CHECK_THROWS_AS(bound_wavefunction(1, 0.7, s), std::domain_error);
    }
    SECTION("K=pi degenerates to a single site") {
        const LatticeSpec s = spec_u(-5.0);
        CHECK(bound_wavefunction(0, pi, s) == 1.0);
        CHECK(bound_wavefunction(3, pi, s) == 0.0);
    }
}

TEST_CASE("scattering_wavefunction") {
    const LatticeSpec s = spec_u(-5.0);
    SECTION("U=0 reduces to a pure cosine") {
        const LatticeSpec free = spec_u(0.0);
        for (int r : {-3, 0, 2, 7}) {
            CHECK(scattering_wavefunction(r, 0.9, 0.7, free) == Approx(std::cos(0.9 * r)));
        }
    }
    SECTION("r=0 returns the overall amplitude") {
        CHECK(scattering_wavefunction(0, 1.1, 0.4, s, 2.5) == Approx(2.5));
    }
    SECTION("satisfies the relative-coordinate equation everywhere") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> kd(0.2, pi - 0.2);
        for (int trial = 0; trial < 8; ++trial) {
            const double k = kd(rng);
            const double K = kd(rng);
            const double E = scattering_energy(K, k, s);
            const double JK = s.J * std::cos(K / 2.0);
            for (int r : {0, 1, 2, 5, 9}) {
                const double lhs = 2.0 * s.omega_c * scattering_wavefunction(r, k, K, s) -
                                   2.0 * JK * (scattering_wavefunction(r + 1, k, K, s) +
                                               scattering_wavefunction(r - 1, k, K, s)) +
                                   (r == 0 ? s.U * scattering_wavefunction(0, k, K, s) : 0.0);
                CHECK(lhs == Approx(E * scattering_wavefunction(r, k, K, s)).margin(1e-10));
            }
        }
    }
    SECTION("singular parameters are rejected") {
        CHECK_THROWS_AS(scattering_wavefunction(1, 0.0, 0.5, s), std::domain_error);
        CHECK_THROWS_AS(scattering_wavefunction(1, 0.5, pi, s), std::domain_error);
    }
}

TEST_CASE("attractive doublon lies below the scattering continuum") {
    const LatticeSpec s = spec_u(-5.0);
    for (double K = 0.0; K <= pi + 1e-9; K += pi / 40.0) {
        double scat_min = 1e9;
        for (double k = 0.0; k <= pi + 1e-9; k += pi / 200.0) {
            scat_min = std::min(scat_min, scattering_energy(K, k, s));
        }
        CHECK(bound_energy(K, s, -1) < scat_min + 1e-12);
    }
}
