// doublon_chain.hpp — effective single-particle chain for the bound pair and
// the chi calibration against the full two-photon model

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "doublon/bands.hpp"
#include "doublon/hamiltonian.hpp"
#include "doublon/spectral.hpp"

namespace doublon {

struct DoublonChainSpec {
    LatticeSpec base;
    double chi{2.0}; // on-site doublon shift = chi * lambda_j

    void validate() const {
        base.validate();
        if (!(chi > 0.0)) throw std::invalid_argument("DoublonChainSpec: chi must be positive");
    }
};

// L x L chain: diagonal (2 w_c + U - 2 J_eff) + chi * lambda_j, hopping -J_eff.
// Identical to the single-photon mosaic matrix under (J -> J_eff,
// w_c -> 2 w_c + U - 2 J_eff, lambda -> chi lambda).
inline HamiltonianMatrix build_doublon_h(const DoublonChainSpec& dspec) {
    dspec.validate();
    const LatticeSpec& b = dspec.base;
    const double Jf = j_eff(b);
    const double center = 2.0 * b.omega_c + b.U - 2.0 * Jf;
    HamiltonianMatrix h;
    h.dim = b.L;
    h.basis_tag = BasisTag::doublon_chain;
    h.entries = Eigen::MatrixXd::Zero(b.L, b.L);
    const int nb = (b.boundary == Boundary::periodic) ? b.L : b.L - 1;
    for (int j = 0; j < b.L; ++j) {
        h.entries(j, j) = center + dspec.chi * mosaic_potential(j, b);
    }
    for (int bond = 0; bond < nb; ++bond) {
        const int s = bond, d = (bond + 1) % b.L;
        h.entries(d, s) += -Jf;
        h.entries(s, d) += -Jf;
    }
    return h;
}

struct CalibrationResult {
    std::optional<double> chi;     // empty when candidates are indistinguishable
    std::vector<double> residuals; // one per candidate, same order
    bool ambiguous{false};
};

// Pick the chi whose chain F_d-vs-energy curve best matches the doublon band
// of the full two-photon diagonalization (least squares over sorted-energy
// pairs). Full-model states are reduced to their doublon site profile first so
// both curves use the chain length as L_eff; residuals within 5% of each other
// are reported as ambiguous.
inline CalibrationResult calibrate_chi(const LatticeSpec& base,
                                       const std::vector<double>& candidates) {
    base.validate();
    if (candidates.empty()) throw std::invalid_argument("calibrate_chi: no candidates");
    if (base.L > 89) {
        throw ResourceError("calibrate_chi: full two-photon reference needs L <= 89");
    }
    const TwoPhotonBasis basis = build_two_photon_basis(base.L);
    const EigenDecomposition full = eigensolve(build_two_photon_h(base));
    const double E0 = doublon_zero_energy(base);
    const std::vector<int> band = detail::doublon_band_selection(full.values, E0, base.L);
    std::vector<double> fd_full;
    fd_full.reserve(band.size());
    for (int idx : band) {
        double mass = 0.0, sum4 = 0.0;
        for (int m = 0; m < base.L; ++m) {
            const double a = full.vectors(basis.index_of(m, m), idx);
            mass += a * a;
        }
        if (mass < 1e-12) {
            fd_full.push_back(1.0); // no doublon weight: not a bound-band state
            continue;
        }
        for (int m = 0; m < base.L; ++m) {
            const double w = full.vectors(basis.index_of(m, m), idx) *
                             full.vectors(basis.index_of(m, m), idx) / mass;
            sum4 += w * w;
        }
        fd_full.push_back(fractal_dim(sum4, static_cast<double>(base.L)));
    }

    CalibrationResult result;
    result.residuals.reserve(candidates.size());
    for (double chi : candidates) {
        DoublonChainSpec d{base, chi};
        const EigenDecomposition chain = eigensolve(build_doublon_h(d));
        double res = 0.0;
        for (std::size_t i = 0; i < fd_full.size(); ++i) {
            const double fd_chain =
                fractal_dim(chain.vectors.col(static_cast<int>(i)).array().square().square().sum(),
                            static_cast<double>(base.L));
            const double diff = fd_full[i] - fd_chain;
            res += diff * diff;
        }
        result.residuals.push_back(res);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.residuals.size(); ++i) {
        if (result.residuals[i] < result.residuals[best]) best = i;
    }
    for (std::size_t i = 0; i < result.residuals.size(); ++i) {
        if (i == best) continue;
        const double hi = std::max(result.residuals[i], result.residuals[best]);
        if (hi <= 0.0 || (result.residuals[i] - result.residuals[best]) <= 0.05 * hi) {
            result.ambiguous = true;
        }
    }
    if (!result.ambiguous) result.chi = candidates[best];
    return result;
}

// Chain variant of the fd map; L_eff is the chain length.
inline std::vector<FdRecord> fd_map(const DoublonChainSpec& dspec,
                                    const std::vector<double>& lambdas, FdMapOptions opt = {}) {
    if (!std::is_sorted(lambdas.begin(), lambdas.end())) {
        throw std::invalid_argument("fd_map: lambda grid must be sorted ascending");
    }
    std::vector<std::vector<FdRecord>> slots(lambdas.size());
    parallel_for(lambdas.size(), opt.threads, [&](std::size_t i) {
        DoublonChainSpec d = dspec;
        d.base.lambda = lambdas[i];
        const HamiltonianMatrix h = build_doublon_h(d);
        const EigenDecomposition dec = eigensolve(h);
        std::vector<int> sel(static_cast<std::size_t>(h.dim));
        std::iota(sel.begin(), sel.end(), 0);
        slots[i] = detail::records_from_decomposition(dec, lambdas[i], h.dim, sel, opt.thresholds);
    });
    std::vector<FdRecord> out;
    for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
    return out;
}

} // namespace doublon
