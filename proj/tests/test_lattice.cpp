#include <catch2/catch_amalgamated.hpp>

#include <doublon/lattice.hpp>

using namespace doublon;
using Catch::Approx;

TEST_CASE("fibonacci, standard indexing") {
    CHECK(fibonacci(1) == 1);
    CHECK(fibonacci(2) == 1);
    CHECK(fibonacci(3) == 2);
    CHECK(fibonacci(10) == 55);   // L = F_10 = 55
    CHECK(fibonacci(16) == 987);  // L = F_16 = 987
    CHECK(fibonacci(18) == 2584); // L = F_18 = 2584
    CHECK(fibonacci(40) == 102334155);
    CHECK_THROWS_AS(fibonacci(-1), std::out_of_range);
    CHECK_THROWS_AS(fibonacci(41), std::out_of_range);
}

TEST_CASE("fibonacci_ring sets the rational approximant") {
    const LatticeSpec s = LatticeSpec::fibonacci_ring(10);
    CHECK(s.L == 55);
    CHECK(s.omega_num == 34);
    CHECK(s.omega_den == 55);
    CHECK(s.omega() == Approx(34.0 / 55.0));
    s.validate();
}

TEST_CASE("mosaic_potential") {
    LatticeSpec s = LatticeSpec::fibonacci_ring(10);
    s.kappa = 2;
    s.lambda = 1.0;
    s.theta = 0.0;

    SECTION("zero on non-mosaic sites") {
        CHECK(mosaic_potential(1, s) == 0.0);
        CHECK(mosaic_potential(3, s) == 0.0);
    }
    SECTION("cos(0) = 1 at the origin") {
        CHECK(mosaic_potential(0, s) == Approx(s.lambda));
    }
    SECTION("j = 34 on the 34/55 approximant") {
        // cos(2 pi * 34 * 34/55)
        CHECK(mosaic_potential(34, s) == Approx(0.9934817353485499).epsilon(1e-12));
    }
    SECTION("vanishes on exactly L - ceil(L/kappa) sites") {
        for (int kappa : {1, 2, 3, 5}) {
            s.kappa = kappa;
            int zeros = 0;
            for (int j = 0; j < s.L; ++j) {
                if (j % kappa != 0) {
                    CHECK(mosaic_potential(j, s) == 0.0);
                    ++zeros;
                }
            }
            CHECK(zeros == s.L - (s.L + kappa - 1) / kappa);
        }
    }
    SECTION("out of range site") {
        CHECK_THROWS_AS(mosaic_potential(-1, s), std::out_of_range);
        CHECK_THROWS_AS(mosaic_potential(s.L, s), std::out_of_range);
    }
}

TEST_CASE("LatticeSpec validation") {
    LatticeSpec s = LatticeSpec::fibonacci_ring(10);
    s.validate();

    LatticeSpec bad = s;
    bad.L = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = s;
    bad.kappa = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = s;
    bad.c_mod = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = s;
    bad.omega_den = 13; // periodic boundary demands omega_den == L
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.boundary = Boundary::open;
    bad.validate();
}

TEST_CASE("EmitterSpec validation") {
    const LatticeSpec lat = LatticeSpec::fibonacci_ring(10);
    EmitterSpec em;
    em.N = 2;
    em.n1 = em.n2 = 5;
    em.validate(lat);
    em.N = 3;
    CHECK_THROWS_AS(em.validate(lat), std::invalid_argument);
    em.N = 2;
    em.n1 = lat.L;
    CHECK_THROWS_AS(em.validate(lat), std::invalid_argument);
}
