// dynamics.hpp — emitter-waveguide time evolution, P_f scans, lambda_c
// detection, and the dynamics-based mobility-edge fit

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "doublon/bands.hpp"
#include "doublon/chebyshev.hpp"
#include "doublon/hamiltonian.hpp"
#include "doublon/parallel.hpp"
#include "doublon/sparse.hpp"
#include "doublon/spectral.hpp"

namespace doublon {

struct QuantumState {
    Eigen::VectorXcd amplitudes;
    BasisTag basis_tag{BasisTag::two_excitation};
    double time{0.0};

    double norm() const { return amplitudes.norm(); }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> pe;
};

// unit amplitude on the fully excited head state (|ee;vac> or |e;vac>)
inline QuantumState initial_state(const LatticeSpec& spec, const EmitterSpec& em, Sector sector) {
    em.validate(spec);
    QuantumState s;
    s.basis_tag = sector == Sector::one_excitation ? BasisTag::one_excitation
                                                   : BasisTag::two_excitation;
    s.amplitudes = Eigen::VectorXcd::Zero(sector_dimension(spec.L, sector));
    s.amplitudes(0) = 1.0;
    return s;
}

// 400 logarithmically spaced samples resolve both the fast decay and the
// long-time plateau
inline std::vector<double> log_time_grid(double t_final, int samples = 400) {
    if (!(t_final > 0.0) || samples < 2) {
        throw std::invalid_argument("log_time_grid: need t_final > 0 and samples >= 2");
    }
    const double t_min = std::max(1e-3, t_final * 1e-5);
    std::vector<double> t(static_cast<std::size_t>(samples));
    const double r = std::log(t_final / t_min) / (samples - 1);
    for (int i = 0; i < samples; ++i) t[static_cast<std::size_t>(i)] = t_min * std::exp(r * i);
    t.back() = t_final;
    return t;
}

// P_e(t) = |<head| e^{-iHt} |psi0>|^2 via the spectral decomposition; only the
// head row of the eigenvector matrix enters, so each sample costs O(dim).
inline Trajectory evolve(const EigenDecomposition& d, const QuantumState& psi0,
                         const std::vector<double>& times) {
    if (psi0.amplitudes.size() != d.values.size()) {
        throw std::invalid_argument("evolve: state dimension mismatch");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("evolve: initial state is not normalized");
    }
    const Eigen::VectorXcd w = d.vectors.transpose() * psi0.amplitudes;
    const Eigen::VectorXd head = d.vectors.row(0).transpose();
    Trajectory traj;
    traj.times = times;
    traj.pe.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::complex<double> c{0.0, 0.0};
        for (Eigen::Index m = 0; m < d.values.size(); ++m) {
            c += head(m) * w(m) * std::polar(1.0, -d.values(m) * times[i]);
        }
        traj.pe[i] = std::norm(c);
    }
    return traj;
}

inline Trajectory evolve(const HamiltonianMatrix& h, const QuantumState& psi0,
                         const std::vector<double>& times) {
    return evolve(eigensolve(h), psi0, times);
}

// full states at each sample, for norm / energy / reversibility checks
inline std::vector<QuantumState> evolve_states(const EigenDecomposition& d,
                                               const QuantumState& psi0,
                                               const std::vector<double>& times) {
    const Eigen::VectorXcd w = d.vectors.transpose() * psi0.amplitudes;
    std::vector<QuantumState> out;
    out.reserve(times.size());
    for (double t : times) {
        Eigen::VectorXcd phased(w.size());
        for (Eigen::Index m = 0; m < w.size(); ++m) {
            phased(m) = w(m) * std::polar(1.0, -d.values(m) * t);
        }
        QuantumState s;
        s.amplitudes = d.vectors * phased;
        s.basis_tag = psi0.basis_tag;
        s.time = t;
        out.push_back(std::move(s));
    }
    return out;
}

// Chebyshev path for sector dimensions beyond the dense budget
inline Trajectory evolve_sparse(const SparseHamiltonian& h, const QuantumState& psi0,
                                const std::vector<double>& times) {
    if (psi0.amplitudes.size() != h.dim) {
        throw std::invalid_argument("evolve_sparse: state dimension mismatch");
    }
    ChebyshevPropagator prop(h);
    Eigen::VectorXcd psi = psi0.amplitudes;
    Trajectory traj;
    traj.times = times;
    traj.pe.resize(times.size());
    double t_now = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        prop.step(psi, times[i] - t_now);
        t_now = times[i];
        traj.pe[i] = std::norm(psi(0));
    }
    return traj;
}

// P_e at the sample nearest t_final
inline double pf(const Trajectory& traj, double t_final = 2e4) {
    if (traj.times.empty()) throw std::invalid_argument("pf: empty trajectory");
    std::size_t best = 0;
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        if (std::abs(traj.times[i] - t_final) < std::abs(traj.times[best] - t_final)) best = i;
    }
    return traj.pe[best];
}

// mean of P_e over the trailing window [frac * t_max, t_max]; averages out the
// quasi-periodic phase noise of a finite ring at large t
inline double tail_mean(const Trajectory& traj, double frac = 0.6) {
    if (traj.times.empty()) throw std::invalid_argument("tail_mean: empty trajectory");
    const double cut = frac * traj.times.back();
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] >= cut) { sum += traj.pe[i]; ++n; }
    }
    return n > 0 ? sum / n : traj.pe.back();
}

struct DecayFit {
    double gamma{0.0};
    double r_squared{0.0};
};

// least-squares slope of ln P_e over [t_lo, t_hi]
inline DecayFit fit_decay_rate(const Trajectory& traj, double t_lo, double t_hi) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t < t_lo || t > t_hi) continue;
        if (!(traj.pe[i] > 0.0)) {
            throw std::domain_error("fit_decay_rate: non-positive P_e inside the fit window");
        }
        xs.push_back(t);
        ys.push_back(std::log(traj.pe[i]));
    }
    if (xs.size() < 3) throw std::domain_error("fit_decay_rate: fewer than 3 samples in window");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw std::domain_error("fit_decay_rate: degenerate window");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double fit = slope * xs[i] + intercept;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    DecayFit f;
    f.gamma = -slope;
    f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

struct PfScan {
    std::vector<double> lambdas;
    std::vector<double> pf;         // sample nearest t_final (the paper's P_f)
    std::vector<double> pf_tail;    // trailing-window mean, used for onset detection
    std::optional<double> lambda_c;
    bool degenerate{false};
};

struct ScanOptions {
    double onset_threshold{0.1};
    double t_final{2e4};
    int samples{400};
    int threads{0};
    double tail_frac{0.6};
    int engine{0}; // 0 auto (dense when dim fits the budget), 1 dense, 2 sparse
};

namespace detail {

inline Trajectory evolve_two_excitation(const LatticeSpec& spec, const EmitterSpec& em,
                                        const std::vector<double>& times, int engine) {
    const int dim = sector_dimension(spec.L, Sector::two_excitation);
    const QuantumState psi0 = initial_state(spec, em, Sector::two_excitation);
    const bool dense = engine == 1 || (engine == 0 && dim <= kDenseDimLimit);
    if (dense) {
        return evolve(build_emitter_h(spec, em, Sector::two_excitation), psi0, times);
    }
    return evolve_sparse(build_sparse_emitter_h(spec, em, Sector::two_excitation), psi0, times);
}

inline std::pair<std::optional<double>, bool> detect_onset(const std::vector<double>& lambdas,
                                                           const std::vector<double>& value,
                                                           double threshold) {
    if (lambdas.empty()) return {std::nullopt, false};
    if (value[0] > threshold) return {std::nullopt, true}; // no baseline below threshold
    for (std::size_t i = 0; i + 2 < value.size(); ++i) {
        if (value[i] > threshold && value[i + 1] > threshold && value[i + 2] > threshold) {
            return {lambdas[i], false};
        }
    }
    return {std::nullopt, false};
}

} // namespace detail

// P_f per lambda; lambda_c = first grid point where the detection observable
// exceeds onset_threshold and persists over the next two grid points.
inline PfScan lambda_c_scan(const LatticeSpec& spec, const EmitterSpec& em,
                            const std::vector<double>& lambdas, ScanOptions opt = {}) {
    if (!std::is_sorted(lambdas.begin(), lambdas.end())) {
        throw std::invalid_argument("lambda_c_scan: lambda grid must be sorted ascending");
    }
    PfScan scan;
    scan.lambdas = lambdas;
    scan.pf.resize(lambdas.size());
    scan.pf_tail.resize(lambdas.size());
    const std::vector<double> times = log_time_grid(opt.t_final, opt.samples);
    parallel_for(lambdas.size(), opt.threads, [&](std::size_t i) {
        LatticeSpec s = spec;
        s.lambda = lambdas[i];
        const Trajectory traj = detail::evolve_two_excitation(s, em, times, opt.engine);
        scan.pf[i] = pf(traj, opt.t_final);
        scan.pf_tail[i] = tail_mean(traj, opt.tail_frac);
    });
    auto [lc, degen] = detail::detect_onset(lambdas, scan.pf_tail, opt.onset_threshold);
    scan.lambda_c = lc;
    scan.degenerate = degen;
    return scan;
}

struct MeFitPoint {
    double two_omega_e{0.0};
    std::optional<double> lambda_c_numeric;
    std::optional<double> lambda_c_analytic;
};

// one lambda_c_scan per emitter frequency; overlays the dynamics-detected
// onsets against the closed-form critical lambda
inline std::vector<MeFitPoint> me_from_dynamics(const LatticeSpec& spec, const EmitterSpec& em,
                                                const std::vector<double>& two_omega_e_grid,
                                                const std::vector<double>& lambdas,
                                                ScanOptions opt = {}) {
    std::vector<MeFitPoint> out(two_omega_e_grid.size());
    for (std::size_t i = 0; i < two_omega_e_grid.size(); ++i) {
        EmitterSpec e = em;
        e.omega_e = two_omega_e_grid[i] / 2.0;
        const PfScan scan = lambda_c_scan(spec, e, lambdas, opt);
        out[i].two_omega_e = two_omega_e_grid[i];
        out[i].lambda_c_numeric = scan.lambda_c;
        out[i].lambda_c_analytic = critical_lambda(two_omega_e_grid[i], spec);
    }
    return out;
}

enum class CouplingSiteMode { peak, offpeak };

// Fig. 7(c)-style site selection: couple at the maximum of the resonant
// eigenstate's doublon profile, or at a mosaic site where it is negligible.
inline int choose_coupling_site(const LatticeSpec& spec, double two_omega_e,
                                CouplingSiteMode mode) {
    const HamiltonianMatrix h = build_two_photon_h(spec);
    const EigenDecomposition d = eigensolve(h);
    int best = 0;
    for (int i = 1; i < h.dim; ++i) {
        if (std::abs(d.values(i) - two_omega_e) < std::abs(d.values(best) - two_omega_e)) best = i;
    }
    const TwoPhotonBasis basis = build_two_photon_basis(spec.L);
    const SpatialProfile prof = spatial_profile(d.vectors.col(best), basis);
    if (mode == CouplingSiteMode::peak) {
        return static_cast<int>(std::max_element(prof.weight.begin(), prof.weight.end()) -
                                prof.weight.begin());
    }
    int site = -1;
    double w_min = 2.0;
    for (int j = 0; j < spec.L; ++j) {
        if (j % spec.kappa != 0) continue; // off-peak choice lives on a mosaic site
        if (prof.weight[static_cast<std::size_t>(j)] < w_min) {
            w_min = prof.weight[static_cast<std::size_t>(j)];
            site = j;
        }
    }
    return site;
}

} // namespace doublon
