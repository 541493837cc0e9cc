// spectral.hpp — dense diagonalization, IPR / fractal-dimension maps,
// localization classes, numerical mobility-edge extraction, spatial profiles

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "doublon/bands.hpp"
#include "doublon/basis.hpp"
#include "doublon/hamiltonian.hpp"
#include "doublon/parallel.hpp"

#if defined(DOUBLON_USE_LAPACKE)
#include <lapacke.h>
#endif

namespace doublon {

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kDenseDimLimit = 5000;

struct EigenDecomposition {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // columns, orthonormal
    BasisTag basis_tag{BasisTag::single_photon};
};

namespace detail {

inline void check_dense_budget(int dim) {
    if (dim > kDenseDimLimit) {
        throw ResourceError("dense eigensolve refused: dim " + std::to_string(dim) + " exceeds " +
                            std::to_string(kDenseDimLimit) +
                            "; use the sparse propagator (dynamics) or a smaller lattice");
    }
}

} // namespace detail

inline EigenDecomposition eigensolve(const HamiltonianMatrix& h) {
    detail::check_dense_budget(h.dim);
    EigenDecomposition d;
    d.basis_tag = h.basis_tag;
#if defined(DOUBLON_USE_LAPACKE)
    d.vectors = h.entries;
    d.values.resize(h.dim);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', h.dim, d.vectors.data(),
                                           h.dim, d.values.data());
    if (info != 0) throw std::runtime_error("eigensolve: dsyevd failed, info=" + std::to_string(info));
#else
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.entries);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolve: decomposition failed");
    d.values = es.eigenvalues();
    d.vectors = es.eigenvectors();
#endif
    return d;
}

inline Eigen::VectorXd eigenvalues_only(const HamiltonianMatrix& h) {
    detail::check_dense_budget(h.dim);
#if defined(DOUBLON_USE_LAPACKE)
    Eigen::MatrixXd work = h.entries;
    Eigen::VectorXd w(h.dim);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', h.dim, work.data(), h.dim, w.data());
    if (info != 0) throw std::runtime_error("eigenvalues_only: dsyevd failed, info=" + std::to_string(info));
    return w;
#else
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.entries, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues_only: decomposition failed");
    return es.eigenvalues();
#endif
}

// IPR = sum_j |u_j|^4 for a normalized amplitude vector
inline double ipr(const Eigen::VectorXd& v) {
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > 1e-6) {
        throw std::invalid_argument("ipr: input vector is not normalized (|v| = " +
                                    std::to_string(norm) + ")");
    }
    return v.array().square().square().sum();
}

// F_d = -ln(IPR) / ln(L_eff), clamped to [0, 1]
inline double fractal_dim(double ipr_value, double L_eff) {
    if (!(ipr_value > 0.0) || !(L_eff > 1.0)) {
        throw std::invalid_argument("fractal_dim: need ipr > 0 and L_eff > 1");
    }
    const double fd = -std::log(ipr_value) / std::log(L_eff);
    return std::clamp(fd, 0.0, 1.0);
}

enum class LocalizationClass { localized, margin, extended };

inline const char* to_string(LocalizationClass c) {
    switch (c) {
        case LocalizationClass::localized: return "localized";
        case LocalizationClass::margin: return "margin";
        case LocalizationClass::extended: return "extended";
    }
    return "?";
}

struct ClassifyThresholds {
    double lo{0.2};
    double hi{0.8};
};

inline LocalizationClass classify(double fd, ClassifyThresholds t = {}) {
    if (fd < 0.0 || fd > 1.0) throw std::invalid_argument("classify: fd must be in [0, 1]");
    if (fd < t.lo) return LocalizationClass::localized;
    if (fd > t.hi) return LocalizationClass::extended;
    return LocalizationClass::margin;
}

struct FdRecord {
    double lambda{0.0};
    double E{0.0};
    double ipr{0.0};
    double fd{0.0};
    LocalizationClass cls{LocalizationClass::margin};
};

namespace detail {

inline std::vector<FdRecord> records_from_decomposition(const EigenDecomposition& d, double lambda,
                                                        double L_eff,
                                                        const std::vector<int>& selection,
                                                        ClassifyThresholds thresholds) {
    std::vector<FdRecord> out;
    out.reserve(selection.size());
    for (int idx : selection) {
        FdRecord r;
        r.lambda = lambda;
        r.E = d.values(idx);
        r.ipr = d.vectors.col(idx).array().square().square().sum();
        r.fd = fractal_dim(r.ipr, L_eff);
        r.cls = classify(r.fd, thresholds);
        out.push_back(r);
    }
    return out;
}

// the L eigenvalues nearest E0, returned in ascending-energy order
inline std::vector<int> doublon_band_selection(const Eigen::VectorXd& values, double E0, int count) {
    std::vector<int> idx(static_cast<std::size_t>(values.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(values(a) - E0) < std::abs(values(b) - E0);
    });
    idx.resize(static_cast<std::size_t>(std::min<std::ptrdiff_t>(count, values.size())));
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return values(a) < values(b); });
    return idx;
}

} // namespace detail

struct FdMapOptions {
    bool doublon_window{true}; // full model: keep only the L states nearest E_0
    ClassifyThresholds thresholds{};
    int threads{0};
};

// Full two-photon model: one diagonalization per lambda. L_eff is the basis
// dimension for full two-photon states.
inline std::vector<FdRecord> fd_map(const LatticeSpec& spec, const std::vector<double>& lambdas,
                                    FdMapOptions opt = {}) {
    if (!std::is_sorted(lambdas.begin(), lambdas.end())) {
        throw std::invalid_argument("fd_map: lambda grid must be sorted ascending");
    }
    std::vector<std::vector<FdRecord>> slots(lambdas.size());
    parallel_for(lambdas.size(), opt.threads, [&](std::size_t i) {
        LatticeSpec s = spec;
        s.lambda = lambdas[i];
        const HamiltonianMatrix h = build_two_photon_h(s);
        const EigenDecomposition d = eigensolve(h);
        std::vector<int> sel;
        if (opt.doublon_window) {
            sel = detail::doublon_band_selection(d.values, doublon_zero_energy(s), s.L);
        } else {
            sel.resize(static_cast<std::size_t>(h.dim));
            std::iota(sel.begin(), sel.end(), 0);
        }
        slots[i] = detail::records_from_decomposition(d, lambdas[i], h.dim, sel, opt.thresholds);
    });
    std::vector<FdRecord> out;
    for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
    return out;
}

// Mobility-edge boundaries per lambda: midpoints of flanking eigenvalues where
// the class flips between localized and extended along the sorted spectrum.
struct MeCurvePoint {
    double lambda{0.0};
    std::vector<double> boundaries;
};

inline std::vector<MeCurvePoint> numerical_me(const std::vector<FdRecord>& records) {
    std::vector<MeCurvePoint> out;
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        while (j < records.size() && records[j].lambda == records[i].lambda) ++j;
        std::vector<const FdRecord*> sorted;
        sorted.reserve(j - i);
        for (std::size_t k = i; k < j; ++k) sorted.push_back(&records[k]);
        std::sort(sorted.begin(), sorted.end(),
                  [](const FdRecord* a, const FdRecord* b) { return a->E < b->E; });
        MeCurvePoint pt;
        pt.lambda = records[i].lambda;
        const FdRecord* last = nullptr; // last non-margin state
        for (const FdRecord* r : sorted) {
            if (r->cls == LocalizationClass::margin) continue;
            if (last && r->cls != last->cls) {
                pt.boundaries.push_back(0.5 * (last->E + r->E));
            }
            last = r;
        }
        out.push_back(std::move(pt));
        i = j;
    }
    return out;
}

struct SpatialProfile {
    std::vector<double> weight; // per-site doublon occupancy, sums to 1
};

// |amplitude(j, j)|^2 renormalized over the diagonal: where the photon pair sits
inline SpatialProfile spatial_profile(const Eigen::VectorXd& state, const TwoPhotonBasis& basis) {
    if (state.size() != static_cast<Eigen::Index>(basis.size())) {
        throw std::invalid_argument("spatial_profile: state/basis size mismatch");
    }
    SpatialProfile p;
    p.weight.resize(static_cast<std::size_t>(basis.L));
    double mass = 0.0;
    for (int m = 0; m < basis.L; ++m) {
        const double a = state(basis.index_of(m, m));
        p.weight[static_cast<std::size_t>(m)] = a * a;
        mass += a * a;
    }
    if (mass < 1e-12) {
        throw std::domain_error("spatial_profile: state carries no diagonal (doublon) weight");
    }
    for (double& w : p.weight) w /= mass;
    return p;
}

// participation number 1 / sum w^2: how many sites the profile spreads over
inline double participation(const SpatialProfile& p) {
    double s = 0.0;
    for (double w : p.weight) s += w * w;
    return 1.0 / s;
}

} // namespace doublon
