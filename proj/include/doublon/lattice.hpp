// lattice.hpp — waveguide parameters, Fibonacci approximants, mosaic potential

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace doublon {

inline constexpr double pi = 3.14159265358979323846;

enum class Boundary { periodic, open };

// Fibonacci numbers F_0 = 0, F_1 = 1 (so F_10 = 55, F_16 = 987, F_18 = 2584).
// The text convention "F_0 = F_1 = 1" is inconsistent with the sizes it is
// used to produce (55, 987, 2584); the standard indexing is what delivers them.
inline std::int64_t fibonacci(int n) {
    if (n < 0 || n > 40) {
        throw std::out_of_range("fibonacci: index must be in [0, 40], got " + std::to_string(n));
    }
    std::int64_t a = 0, b = 1;
    for (int i = 0; i < n; ++i) {
        std::int64_t c = a + b;
        a = b;
        b = c;
    }
    return a;
}

struct FibonacciIndex {
    int n{0};
    std::int64_t value{0};

    static FibonacciIndex at(int n) { return {n, fibonacci(n)}; }
};

// All waveguide / quasiperiodic-potential parameters. Energies in units of J,
// times in 1/J (hbar = 1).
struct LatticeSpec {
    int L{55};                 // site count
    int kappa{2};              // mosaic period: potential acts on sites j = 0 mod kappa
    std::int64_t omega_num{34};// rational approximant omega = omega_num / omega_den
    std::int64_t omega_den{55};
    double theta{0.0};         // phase offset
    double lambda{0.0};        // potential amplitude
    double omega_c{0.0};       // cavity frequency
    double J{1.0};             // nearest-neighbor hopping
    double U{-5.0};            // on-site photon-photon interaction
    double c_mod{1.0};         // H_lambda = c_mod * sum_j lambda_j n_j(n_j - 1)
    Boundary boundary{Boundary::periodic};

    double omega() const { return static_cast<double>(omega_num) / static_cast<double>(omega_den); }

    // L = F_n ring with omega = F_{n-1}/F_n (the rational-approximant rule)
    static LatticeSpec fibonacci_ring(int n) {
        LatticeSpec s;
        s.L = static_cast<int>(fibonacci(n));
        s.omega_num = fibonacci(n - 1);
        s.omega_den = s.L;
        return s;
    }

    void validate() const {
        if (L < 2) throw std::invalid_argument("LatticeSpec: L must be >= 2");
        if (kappa < 1) throw std::invalid_argument("LatticeSpec: kappa must be >= 1");
        if (omega_den <= 0) throw std::invalid_argument("LatticeSpec: omega_den must be positive");
        if (c_mod <= 0) throw std::invalid_argument("LatticeSpec: c_mod must be positive");
        if (J <= 0) throw std::invalid_argument("LatticeSpec: J must be positive");
        if (boundary == Boundary::periodic && omega_den != L) {
            throw std::invalid_argument(
                "LatticeSpec: periodic boundary requires omega_den == L (rational approximant)");
        }
        if (!(std::isfinite(lambda) && std::isfinite(theta) && std::isfinite(omega_c) && std::isfinite(U))) {
            throw std::invalid_argument("LatticeSpec: non-finite parameter");
        }
    }
};

// lambda_j of the mosaic potential: lambda * cos(2 pi (omega j + theta)) on
// every kappa-th site, zero elsewhere.
inline double mosaic_potential(int j, const LatticeSpec& spec) {
    if (j < 0 || j >= spec.L) {
        throw std::out_of_range("mosaic_potential: site index out of range");
    }
    if (j % spec.kappa != 0) return 0.0;
    return spec.lambda * std::cos(2.0 * pi * (spec.omega() * j + spec.theta));
}

struct EmitterSpec {
    int N{2};            // number of emitters
    double omega_e{0.0}; // transition frequency; pair energy is 2 omega_e
    double g{0.1};       // emitter-waveguide coupling
    int n1{0};           // coupling sites (paper: n1 == n2)
    int n2{0};

    void validate(const LatticeSpec& lat) const {
        if (N != 1 && N != 2) throw std::invalid_argument("EmitterSpec: N must be 1 or 2");
        if (n1 < 0 || n1 >= lat.L || n2 < 0 || n2 >= lat.L) {
            throw std::invalid_argument("EmitterSpec: coupling site out of range");
        }
        if (!(std::isfinite(omega_e) && std::isfinite(g))) {
            throw std::invalid_argument("EmitterSpec: non-finite parameter");
        }
    }
};

} // namespace doublon
