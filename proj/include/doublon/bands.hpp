// bands.hpp — closed forms: two-photon bands, effective hopping, mobility
// edges, decay rate, lattice Green's function, appendix wavefunctions

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "doublon/lattice.hpp"

namespace doublon {

struct BandPoint {
    double K{0.0}; // center-of-mass momentum
    double k{0.0}; // relative momentum
    double E{0.0};
};

// E_S(K, k) = 2 w_c - 4 J cos(K/2) cos(k); scattering continuum, width 8J
inline double scattering_energy(double K, double k, const LatticeSpec& spec) {
    return 2.0 * spec.omega_c - 4.0 * spec.J * std::cos(K / 2.0) * std::cos(k);
}

// E_B_pm(K) = 2 w_c +- sqrt(U^2 + [4 J cos(K/2)]^2); the doublon bands
inline double bound_energy(double K, const LatticeSpec& spec, int sign = -1) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("bound_energy: sign must be +-1");
    const double c = 4.0 * spec.J * std::cos(K / 2.0);
    return 2.0 * spec.omega_c + sign * std::sqrt(spec.U * spec.U + c * c);
}

// J_eff = 2 J^2 / sqrt(U^2 + 8 J^2); second-order pair hopping
inline double j_eff(const LatticeSpec& spec) {
    return 2.0 * spec.J * spec.J / std::sqrt(spec.U * spec.U + 8.0 * spec.J * spec.J);
}

// E_0 = 2 w_c - sqrt(U^2 + 8 J^2); the K = pi/2 point of the lower doublon band
inline double doublon_zero_energy(const LatticeSpec& spec) {
    return 2.0 * spec.omega_c - std::sqrt(spec.U * spec.U + 8.0 * spec.J * spec.J);
}

struct MobilityEdgePair {
    int kappa{2};
    std::vector<double> branches; // real critical energies, ascending
    double E0{0.0};
    double J_eff{0.0};
};

// kappa = 2: E_c = E_0 +- J_eff / lambda
// kappa = 3: E_c = E_0 +- J_eff sqrt(1 +- J_eff / lambda), real branches only
inline MobilityEdgePair mobility_edges(const LatticeSpec& spec) {
    if (spec.kappa != 2 && spec.kappa != 3) {
        throw std::invalid_argument("mobility_edges: closed forms exist only for kappa in {2, 3}");
    }
    if (!(spec.lambda > 0)) {
        throw std::invalid_argument("mobility_edges: requires lambda > 0");
    }
    MobilityEdgePair me;
    me.kappa = spec.kappa;
    me.E0 = doublon_zero_energy(spec);
    me.J_eff = j_eff(spec);
    if (spec.kappa == 2) {
        const double d = me.J_eff * spec.J / spec.lambda;
        me.branches = {me.E0 - d, me.E0 + d};
    } else {
        const double r = me.J_eff * spec.J / spec.lambda;
        me.branches.push_back(me.E0 - me.J_eff * std::sqrt(1.0 + r));
        if (r <= 1.0) {
            me.branches.push_back(me.E0 - me.J_eff * std::sqrt(1.0 - r));
            me.branches.push_back(me.E0 + me.J_eff * std::sqrt(1.0 - r));
        }
        me.branches.push_back(me.E0 + me.J_eff * std::sqrt(1.0 + r));
    }
    return me;
}

// Smallest lambda > 0 at which a real mobility-edge branch reaches the energy
// two_omega_e. Inverts the kappa = 2 / kappa = 3 expressions. Returns nullopt
// for the band-center line (no branch ever reaches E_0 at finite lambda).
inline std::optional<double> critical_lambda(double two_omega_e, const LatticeSpec& spec) {
    if (spec.kappa != 2 && spec.kappa != 3) {
        throw std::invalid_argument("critical_lambda: closed forms exist only for kappa in {2, 3}");
    }
    const double Emin = 2.0 * spec.omega_c - std::sqrt(spec.U * spec.U + 16.0 * spec.J * spec.J);
    const double Emax = 2.0 * spec.omega_c - std::abs(spec.U);
    if (!(two_omega_e > Emin && two_omega_e < Emax)) {
        throw std::domain_error("critical_lambda: two_omega_e must lie strictly inside the doublon band");
    }
    const double Jf = j_eff(spec);
    const double x = (two_omega_e - doublon_zero_energy(spec)) / Jf;
    if (x == 0.0) return std::nullopt; // always-extended band-center line
    if (spec.kappa == 2) {
        return spec.J / std::abs(x); // J_eff / lambda_c = |2 omega_e - E_0|
    }
    const double x2 = x * x;
    if (std::abs(x2 - 1.0) < 1e-14) return std::nullopt; // branches only reach |x| = 1 as lambda -> inf
    if (x2 < 1.0) return Jf * spec.J / (1.0 - x2);       // inner branch
    return Jf * spec.J / (x2 - 1.0);                     // outer branch
}

// v_g(K) = 4 J^2 sin(K) / sqrt(U^2 + 16 J^2 cos^2(K/2)); group velocity on the
// doublon band (magnitude is branch independent)
inline double group_velocity(double K, const LatticeSpec& spec) {
    const double c = std::cos(K / 2.0);
    return 4.0 * spec.J * spec.J * std::sin(K) /
           std::sqrt(spec.U * spec.U + 16.0 * spec.J * spec.J * c * c);
}

struct DecayPrediction {
    double Gamma{0.0};
    double K0{0.0};
    double v_g{0.0};
    double f_factor{1.0};
};

namespace detail {
inline double resonant_momentum(double two_omega_e, const LatticeSpec& spec) {
    const double d = two_omega_e - 2.0 * spec.omega_c;
    const double c2 = (d * d - spec.U * spec.U) / (16.0 * spec.J * spec.J);
    if (!(c2 > 0.0 && c2 < 1.0)) {
        throw std::domain_error("decay_rate: 2 omega_e is not resonant with the doublon band");
    }
    return 2.0 * std::acos(std::sqrt(c2)); // K0 in (0, pi)
}
} // namespace detail

// Gamma = (2 g^4 / J^3) * rho(K0) * f^2 with rho(K) = J / v_g(K); K0 solves
// 2 omega_e = E_B(K0). The interference factor f defaults to 1 for co-located
// emitters and is caller-injectable.
inline DecayPrediction decay_rate_at(double two_omega_e, double g, const LatticeSpec& spec,
                                     double f_factor = 1.0) {
    DecayPrediction p;
    p.K0 = detail::resonant_momentum(two_omega_e, spec);
    p.v_g = std::abs(group_velocity(p.K0, spec));
    p.f_factor = f_factor;
    const double rho = spec.J / p.v_g;
    const double g2 = g * g;
    p.Gamma = 2.0 * g2 * g2 / (spec.J * spec.J * spec.J) * rho * f_factor * f_factor;
    return p;
}

inline DecayPrediction decay_rate(const LatticeSpec& spec, const EmitterSpec& em,
                                  double f_factor = 1.0) {
    return decay_rate_at(2.0 * em.omega_e, em.g, spec, f_factor);
}

// Closed-form relative-coordinate Green's function at r = 0, valid outside the
// scattering continuum at this K. Sign chosen so the U < 0 bound state solves
// 1/U = G below the band.
inline double greens_function_r0(double E, double K, const LatticeSpec& spec) {
    const double d = E - 2.0 * spec.omega_c;
    const double JK = 2.0 * spec.J * std::cos(K / 2.0); // half the continuum width at this K
    const double disc = d * d - 4.0 * JK * JK;
    if (disc <= 0.0) {
        throw std::domain_error("greens_function_r0: E is inside the scattering continuum (branch cut)");
    }
    return (d >= 0.0 ? 1.0 : -1.0) / std::sqrt(disc);
}

struct BoundWavefunction {
    double rho{0.0};       // decay factor per site, |psi(r)| = psi0 * rho^|r|
    double psi0{0.0};      // normalized on-site amplitude
    bool normalizable{true};
};

// psi_K^B(r) = psi0 * rho^|r|, rho = (sqrt(U^2 + 16 J_K^2) - |U|) / (4 J_K),
// J_K = J cos(K/2); normalized so sum_r |psi|^2 = 1.
inline BoundWavefunction bound_state_profile(double K, const LatticeSpec& spec) {
    BoundWavefunction b;
    const double JK = spec.J * std::cos(K / 2.0);
    if (std::abs(JK) < 1e-15) { // K = pi: flat band, doublon pinned to one site
        b.rho = 0.0;
        b.psi0 = 1.0;
        return b;
    }
    b.rho = (std::sqrt(spec.U * spec.U + 16.0 * JK * JK) - std::abs(spec.U)) / (4.0 * std::abs(JK));
    if (b.rho >= 1.0) { // U = 0: no binding
        b.normalizable = false;
        b.psi0 = 0.0;
        return b;
    }
    const double r2 = b.rho * b.rho;
    b.psi0 = std::sqrt((1.0 - r2) / (1.0 + r2));
    return b;
}

inline double bound_wavefunction(int r, double K, const LatticeSpec& spec) {
    const BoundWavefunction b = bound_state_profile(K, spec);
    if (!b.normalizable) {
        throw std::domain_error("bound_wavefunction: state is not normalizable (U = 0, rho = 1)");
    }
    if (b.rho == 0.0) return r == 0 ? 1.0 : 0.0;
    return b.psi0 * std::pow(b.rho, std::abs(r));
}

// psi_K^S(r) = A [cos(k r) + U sin(k |r|) / (4 J sin(k) cos(K/2))]
inline double scattering_wavefunction(int r, double k, double K, const LatticeSpec& spec,
                                      double A = 1.0) {
    const double sk = std::sin(k);
    const double cK = std::cos(K / 2.0);
    if (std::abs(sk) < 1e-12 || std::abs(cK) < 1e-12) {
        throw std::domain_error("scattering_wavefunction: singular parameters (sin k or cos K/2 vanishes)");
    }
    const double ar = std::abs(r);
    return A * (std::cos(k * r) + spec.U * std::sin(k * ar) / (4.0 * spec.J * sk * cK));
}

} // namespace doublon
