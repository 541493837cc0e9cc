// hamiltonian.hpp — dense Hamiltonians for the photon and emitter sectors
//
// All builders funnel through one element enumeration per sector so the dense
// matrices and the sparse copies (sparse.hpp) cannot drift apart.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

#include "doublon/basis.hpp"
#include "doublon/lattice.hpp"

namespace doublon {

enum class BasisTag { single_photon, two_photon, doublon_chain, one_excitation, two_excitation };

inline const char* to_string(BasisTag t) {
    switch (t) {
        case BasisTag::single_photon: return "single-photon";
        case BasisTag::two_photon: return "two-photon";
        case BasisTag::doublon_chain: return "doublon-chain";
        case BasisTag::one_excitation: return "one-excitation";
        case BasisTag::two_excitation: return "two-excitation";
    }
    return "?";
}

struct HamiltonianMatrix {
    int dim{0};
    Eigen::MatrixXd entries;
    BasisTag basis_tag{BasisTag::single_photon};

    double symmetry_defect() const {
        return (entries - entries.transpose()).cwiseAbs().maxCoeff();
    }
};

enum class Sector { one_excitation, two_excitation };

namespace detail {

// Emit every directed element (i <- j with amplitude v) exactly once via
// sink(i, j, v); diagonals once. Periodic L=2 accumulates the doubled bond.
template <class Sink>
void enumerate_single_photon(const LatticeSpec& spec, Sink&& sink, int offset = 0,
                             double diag_shift = 0.0) {
    const int L = spec.L;
    const int nb = (spec.boundary == Boundary::periodic) ? L : L - 1;
    for (int j = 0; j < L; ++j) sink(offset + j, offset + j, spec.omega_c + diag_shift);
    for (int b = 0; b < nb; ++b) {
        const int s = b, d = (b + 1) % L;
        sink(offset + d, offset + s, -spec.J);
        sink(offset + s, offset + d, -spec.J);
    }
}

template <class Sink>
void enumerate_two_photon(const LatticeSpec& spec, const TwoPhotonBasis& basis, Sink&& sink,
                          int offset = 0, double diag_shift = 0.0) {
    const int L = spec.L;
    const int nb = (spec.boundary == Boundary::periodic) ? L : L - 1;
    const double sqrt2 = std::sqrt(2.0);
    for (int row = 0; row < static_cast<int>(basis.size()); ++row) {
        const auto [m, n] = basis.pairs[static_cast<std::size_t>(row)];
        double diag = 2.0 * spec.omega_c + diag_shift;
        if (m == n) diag += spec.U + 2.0 * spec.c_mod * mosaic_potential(m, spec);
        sink(offset + row, offset + row, diag);
        // directed hops of either photon across each bond
        for (int b = 0; b < nb; ++b) {
            for (int dir = 0; dir < 2; ++dir) {
                const int src = dir == 0 ? b : (b + 1) % L;
                const int dst = dir == 0 ? (b + 1) % L : b;
                if (src != m && src != n) continue;
                const int keep = (src == m) ? n : m;
                const int fm = std::min(dst, keep), fn = std::max(dst, keep);
                double amp = -spec.J;
                if (m == n) amp *= sqrt2;        // annihilating the doubly occupied site
                if (fm == fn) amp *= sqrt2;      // creating a doubly occupied site
                sink(offset + basis.index_of(fm, fn), offset + row, amp);
            }
        }
    }
}

// Sector layout: head excited state(s) first, then photon blocks.
//   one-excitation (N=1): [0] |e;vac>, [1..L] |g;1_j>
//   two-excitation (N=2): [0] |ee;vac>, [1..L] |eg;1_j>, [L+1..2L] |ge;1_j>,
//                         [2L+1..] |gg;(m,n)>
template <class Sink>
void enumerate_emitter(const LatticeSpec& spec, const EmitterSpec& em, Sector sector,
                       const TwoPhotonBasis& basis, Sink&& sink) {
    const int L = spec.L;
    const double g = em.g;
    const double sqrt2 = std::sqrt(2.0);
    if (sector == Sector::one_excitation) {
        sink(0, 0, em.omega_e);
        enumerate_single_photon(spec, sink, 1);
        sink(0, 1 + em.n1, g);
        sink(1 + em.n1, 0, g);
        return;
    }
    sink(0, 0, 2.0 * em.omega_e);
    enumerate_single_photon(spec, sink, 1, em.omega_e);      // |eg;1_j>
    enumerate_single_photon(spec, sink, 1 + L, em.omega_e);  // |ge;1_j>
    enumerate_two_photon(spec, basis, sink, 1 + 2 * L);      // |gg;(m,n)>
    // |ee;vac> <-> one photon at the partner emitter's site
    sink(0, 1 + em.n2, g);
    sink(1 + em.n2, 0, g);
    sink(0, 1 + L + em.n1, g);
    sink(1 + L + em.n1, 0, g);
    // |eg;1_j> -> |gg;(j,n1)> (emitter 1 emits), |ge;1_j> -> |gg;(j,n2)>
    const int pair0 = 1 + 2 * L;
    for (int j = 0; j < L; ++j) {
        {
            const int f = pair0 + basis.index_of(std::min(j, em.n1), std::max(j, em.n1));
            const double amp = g * (j == em.n1 ? sqrt2 : 1.0);
            sink(f, 1 + j, amp);
            sink(1 + j, f, amp);
        }
        {
            const int f = pair0 + basis.index_of(std::min(j, em.n2), std::max(j, em.n2));
            const double amp = g * (j == em.n2 ? sqrt2 : 1.0);
            sink(f, 1 + L + j, amp);
            sink(1 + L + j, f, amp);
        }
    }
}

} // namespace detail

inline int sector_dimension(int L, Sector sector) {
    return sector == Sector::one_excitation ? 1 + L : 1 + 2 * L + L * (L + 1) / 2;
}

inline HamiltonianMatrix build_single_photon_h(const LatticeSpec& spec) {
    spec.validate();
    HamiltonianMatrix h;
    h.dim = spec.L;
    h.basis_tag = BasisTag::single_photon;
    h.entries = Eigen::MatrixXd::Zero(h.dim, h.dim);
    detail::enumerate_single_photon(spec, [&](int i, int j, double v) { h.entries(i, j) += v; });
    return h;
}

inline HamiltonianMatrix build_two_photon_h(const LatticeSpec& spec) {
    spec.validate();
    const TwoPhotonBasis basis = build_two_photon_basis(spec.L);
    HamiltonianMatrix h;
    h.dim = static_cast<int>(basis.size());
    h.basis_tag = BasisTag::two_photon;
    h.entries = Eigen::MatrixXd::Zero(h.dim, h.dim);
    detail::enumerate_two_photon(spec, basis, [&](int i, int j, double v) { h.entries(i, j) += v; });
    return h;
}

inline HamiltonianMatrix build_emitter_h(const LatticeSpec& spec, const EmitterSpec& em,
                                         Sector sector) {
    spec.validate();
    em.validate(spec);
    if (sector == Sector::one_excitation && em.N != 1) {
        throw std::invalid_argument("build_emitter_h: one-excitation sector requires N = 1");
    }
    if (sector == Sector::two_excitation && em.N != 2) {
        throw std::invalid_argument("build_emitter_h: two-excitation sector requires N = 2");
    }
    const TwoPhotonBasis basis =
        sector == Sector::two_excitation ? build_two_photon_basis(spec.L) : TwoPhotonBasis{};
    HamiltonianMatrix h;
    h.dim = sector_dimension(spec.L, sector);
    h.basis_tag = sector == Sector::one_excitation ? BasisTag::one_excitation
                                                   : BasisTag::two_excitation;
    h.entries = Eigen::MatrixXd::Zero(h.dim, h.dim);
    detail::enumerate_emitter(spec, em, sector, basis,
                              [&](int i, int j, double v) { h.entries(i, j) += v; });
    return h;
}

} // namespace doublon
