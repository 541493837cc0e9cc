// runners.hpp — figure pipelines behind the CLI subcommands; each writes
// CSV + SVG + manifest.json into the configured output directory

#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "doublon/config.hpp"
#include "doublon/doublon_chain.hpp"
#include "doublon/dynamics.hpp"
#include "doublon/io.hpp"
#include "doublon/svg.hpp"

namespace doublon {

struct RunResult {
    std::vector<std::filesystem::path> files;
};

namespace detail {

class RunScope {
public:
    explicit RunScope(const ExperimentConfig& cfg) : cfg_(cfg), start_(clock::now()) {
        std::filesystem::create_directories(cfg.run.out_dir);
    }

    std::filesystem::path emit(const std::string& name, const std::string& content) {
        const std::filesystem::path p = std::filesystem::path(cfg_.run.out_dir) / name;
        io::atomic_write_text(p, content);
        files_.push_back(p);
        return p;
    }

    RunResult finish() {
        io::RunManifest m;
        m.config_hash = config_hash(cfg_);
        m.wall_seconds = std::chrono::duration<double>(clock::now() - start_).count();
        for (const auto& f : files_) m.outputs.push_back(f.filename().string());
        const std::filesystem::path p = std::filesystem::path(cfg_.run.out_dir) / "manifest.json";
        io::atomic_write_text(p, io::manifest_json(m));
        RunResult r;
        r.files = files_;
        r.files.push_back(p);
        return r;
    }

private:
    using clock = std::chrono::steady_clock;
    const ExperimentConfig& cfg_;
    clock::time_point start_;
    std::vector<std::filesystem::path> files_;
};

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return v;
}

} // namespace detail

// Fig. 2 geometry: scattering edges and both doublon branches over K
inline RunResult run_bands(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.run.k_points < 2) throw std::invalid_argument("run_bands: empty momentum grid");
    detail::RunScope scope(cfg);
    std::vector<io::BandRow> rows;
    const auto Ks = detail::linspace(-pi, pi, cfg.run.k_points);
    for (double K : Ks) {
        io::BandRow r;
        r.K = K;
        r.k = 0.0;
        r.E_S = scattering_energy(K, 0.0, cfg.lattice);
        r.E_B_plus = bound_energy(K, cfg.lattice, +1);
        r.E_B_minus = bound_energy(K, cfg.lattice, -1);
        rows.push_back(r);
    }
    scope.emit("bands.csv", io::bands_csv(rows));

    svg::Figure fig;
    fig.x_min = -pi; fig.x_max = pi;
    double ymin = rows.front().E_B_minus, ymax = rows.front().E_B_plus;
    for (const auto& r : rows) {
        ymin = std::min(ymin, r.E_B_minus);
        ymax = std::max(ymax, r.E_B_plus);
    }
    fig.y_min = ymin - 0.5; fig.y_max = ymax + 0.5;
    fig.x_label = "K"; fig.y_label = "E / J"; fig.title = "two-photon bands";
    std::vector<double> xs, ups, downs, smin, smax;
    for (const auto& r : rows) {
        xs.push_back(r.K);
        ups.push_back(r.E_B_plus);
        downs.push_back(r.E_B_minus);
        smin.push_back(scattering_energy(r.K, pi, cfg.lattice));
        smax.push_back(scattering_energy(r.K, 0.0, cfg.lattice));
    }
    fig.polyline(xs, smin, "#3060c0");
    fig.polyline(xs, smax, "#3060c0");
    fig.polyline(xs, ups, "#c03030");
    fig.polyline(xs, downs, "#c03030");
    scope.emit("bands.svg", fig.render());
    return scope.finish();
}

namespace detail {

inline void fd_scatter_svg(RunScope& scope, const ExperimentConfig& cfg,
                           const std::vector<FdRecord>& records) {
    if (records.empty()) return;
    svg::Figure fig;
    fig.x_min = cfg.run.lambda_min;
    fig.x_max = std::max(cfg.run.lambda_max, cfg.run.lambda_min + 1e-9);
    double ymin = records.front().E, ymax = records.front().E;
    for (const auto& r : records) {
        ymin = std::min(ymin, r.E);
        ymax = std::max(ymax, r.E);
    }
    const double padding = 0.05 * (ymax - ymin) + 1e-9;
    fig.y_min = ymin - padding; fig.y_max = ymax + padding;
    fig.x_label = "lambda"; fig.y_label = "E / J";
    fig.title = "eigenvalues colored by fractal dimension";
    std::vector<double> xs, ys;
    std::vector<std::string> colors;
    for (const auto& r : records) {
        xs.push_back(r.lambda);
        ys.push_back(r.E);
        colors.push_back(svg::fd_color(r.fd));
    }
    fig.scatter(xs, ys, colors, 1.6);
    // analytic mobility edges, where the closed forms exist
    if (cfg.lattice.kappa == 2 || cfg.lattice.kappa == 3) {
        const int nl = 160;
        std::vector<std::vector<double>> branch_x, branch_y;
        for (int i = 0; i < nl; ++i) {
            const double lam = fig.x_min + (fig.x_max - fig.x_min) * (i + 0.5) / nl;
            if (lam <= 0) continue;
            LatticeSpec s = cfg.lattice;
            s.lambda = lam;
            const MobilityEdgePair me = mobility_edges(s);
            for (std::size_t b = 0; b < me.branches.size(); ++b) {
                if (branch_x.size() <= b) { branch_x.resize(b + 1); branch_y.resize(b + 1); }
                branch_x[b].push_back(lam);
                branch_y[b].push_back(me.branches[b]);
            }
        }
        for (std::size_t b = 0; b < branch_x.size(); ++b) {
            fig.polyline(branch_x[b], branch_y[b], "black", 1.2, true);
        }
    }
    scope.emit("fdmap.svg", fig.render());
}

} // namespace detail

// Figs. 4-5: eigenvalue / fractal-dimension maps with analytic ME overlay
inline RunResult run_fdmap(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.lattice.kappa != 2 && cfg.lattice.kappa != 3) {
        throw std::invalid_argument("run_fdmap: kappa must be 2 or 3 (closed-form ME overlay)");
    }
    detail::RunScope scope(cfg);
    FdMapOptions opt;
    opt.doublon_window = cfg.run.doublon_window;
    opt.threads = cfg.run.threads;
    std::vector<FdRecord> records;
    std::vector<double> grid = cfg.lambda_grid();
    if (cfg.run.fdmap_model == "full") {
        records = fd_map(cfg.lattice, grid, opt);
    } else {
        DoublonChainSpec d{cfg.lattice, cfg.run.chi};
        records = fd_map(d, grid, opt);
    }
    scope.emit("fdmap.csv", io::fd_records_csv(records));
    detail::fd_scatter_svg(scope, cfg, records);
    return scope.finish();
}

// Fig. 6: diagonal wavefunction profiles for a set of lambdas
inline RunResult run_wavefunction(const ExperimentConfig& cfg) {
    cfg.validate();
    detail::RunScope scope(cfg);
    const TwoPhotonBasis basis = build_two_photon_basis(cfg.lattice.L);
    std::string csv = "lambda,site,weight\n";
    svg::Figure fig;
    fig.x_min = 0; fig.x_max = cfg.lattice.L - 1;
    fig.y_min = 0; fig.y_max = 1.0;
    fig.x_label = "site"; fig.y_label = "weight";
    fig.title = "doublon profile of the eigenstate nearest 2 omega_e";
    const std::vector<std::string> palette{"#3060c0", "#208040", "#c07020", "#c03030"};
    double peak = 0.0;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> curves;
    for (double lam : cfg.run.wavefunction_lambdas) {
        LatticeSpec s = cfg.lattice;
        s.lambda = lam;
        const EigenDecomposition d = eigensolve(build_two_photon_h(s));
        const double target = 2.0 * cfg.emitters.omega_e;
        int best = 0;
        for (int i = 1; i < d.values.size(); ++i) {
            if (std::abs(d.values(i) - target) < std::abs(d.values(best) - target)) best = i;
        }
        const SpatialProfile prof = spatial_profile(d.vectors.col(best), basis);
        std::vector<double> xs, ys;
        for (int j = 0; j < cfg.lattice.L; ++j) {
            csv += io::fmt(lam) + ',' + std::to_string(j) + ',' +
                   io::fmt(prof.weight[static_cast<std::size_t>(j)]) + '\n';
            xs.push_back(j);
            ys.push_back(prof.weight[static_cast<std::size_t>(j)]);
            peak = std::max(peak, ys.back());
        }
        curves.emplace_back(std::move(xs), std::move(ys));
    }
    fig.y_max = std::max(peak * 1.1, 1e-3);
    for (std::size_t i = 0; i < curves.size(); ++i) {
        fig.polyline(curves[i].first, curves[i].second, palette[i % palette.size()]);
    }
    scope.emit("wavefunction.csv", csv);
    scope.emit("wavefunction.svg", fig.render());
    return scope.finish();
}

// Fig. 7: P_e(t) for the configured emitters (N = 1 or 2)
inline RunResult run_dynamics(const ExperimentConfig& cfg) {
    cfg.validate();
    detail::RunScope scope(cfg);
    LatticeSpec s = cfg.lattice;
    EmitterSpec em = cfg.emitters;
    if (cfg.run.coupling_mode != "fixed") {
        const int site = choose_coupling_site(s, 2.0 * em.omega_e,
                                              cfg.run.coupling_mode == "peak"
                                                  ? CouplingSiteMode::peak
                                                  : CouplingSiteMode::offpeak);
        em.n1 = em.n2 = site;
    }
    const Sector sector = em.N == 1 ? Sector::one_excitation : Sector::two_excitation;
    const std::vector<double> times = log_time_grid(cfg.run.t_final, cfg.run.time_samples);
    const QuantumState psi0 = initial_state(s, em, sector);
    Trajectory traj;
    const int dim = sector_dimension(s.L, sector);
    const int engine = cfg.engine_code();
    if (engine == 1 || (engine == 0 && dim <= kDenseDimLimit)) {
        traj = evolve(build_emitter_h(s, em, sector), psi0, times);
    } else {
        traj = evolve_sparse(build_sparse_emitter_h(s, em, sector), psi0, times);
    }
    scope.emit("trajectory.csv", io::trajectory_csv(traj));
    svg::Figure fig;
    fig.log_x = true;
    fig.x_min = traj.times.front(); fig.x_max = traj.times.back();
    fig.y_min = 0.0; fig.y_max = 1.05;
    fig.x_label = "t J"; fig.y_label = "P_e"; fig.title = "emitter population";
    fig.polyline(traj.times, traj.pe, "#c03030");
    scope.emit("trajectory.svg", fig.render());
    return scope.finish();
}

// Fig. 8: P_f versus lambda with onset detection
inline RunResult run_pfscan(const ExperimentConfig& cfg) {
    cfg.validate();
    detail::RunScope scope(cfg);
    ScanOptions opt;
    opt.onset_threshold = cfg.run.onset_threshold;
    opt.t_final = cfg.run.t_final;
    opt.samples = cfg.run.time_samples;
    opt.threads = cfg.run.threads;
    opt.tail_frac = cfg.run.tail_frac;
    opt.engine = cfg.engine_code();
    const PfScan scan = lambda_c_scan(cfg.lattice, cfg.emitters, cfg.lambda_grid(), opt);
    scope.emit("pfscan.csv", io::pf_scan_csv(scan));
    svg::Figure fig;
    fig.x_min = cfg.run.lambda_min; fig.x_max = cfg.run.lambda_max;
    fig.y_min = 0; fig.y_max = 1.0;
    fig.x_label = "lambda"; fig.y_label = "P_f"; fig.title = "final population scan";
    fig.polyline(scan.lambdas, scan.pf, "#3060c0");
    fig.polyline(scan.lambdas, scan.pf_tail, "#c03030");
    if (scan.lambda_c) fig.vline(*scan.lambda_c, "#208040");
    scope.emit("pfscan.svg", fig.render());
    return scope.finish();
}

// Fig. 9: dynamics-detected lambda_c versus the analytic inversion
inline RunResult run_mefit(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.run.two_omega_e_steps < 1 || cfg.run.two_omega_e_max < cfg.run.two_omega_e_min) {
        throw std::invalid_argument("run_mefit: bad two_omega_e grid");
    }
    detail::RunScope scope(cfg);
    ScanOptions opt;
    opt.onset_threshold = cfg.run.onset_threshold;
    opt.t_final = cfg.run.t_final;
    opt.samples = cfg.run.time_samples;
    opt.threads = cfg.run.threads;
    opt.tail_frac = cfg.run.tail_frac;
    opt.engine = cfg.engine_code();
    const auto grid = detail::linspace(cfg.run.two_omega_e_min, cfg.run.two_omega_e_max,
                                       cfg.run.two_omega_e_steps);
    const auto pts = me_from_dynamics(cfg.lattice, cfg.emitters, grid, cfg.lambda_grid(), opt);
    scope.emit("mefit.csv", io::me_curve_csv(pts));
    svg::Figure fig;
    fig.x_min = cfg.run.two_omega_e_min; fig.x_max = cfg.run.two_omega_e_max;
    fig.y_min = 0; fig.y_max = cfg.run.lambda_max;
    fig.x_label = "2 omega_e"; fig.y_label = "lambda_c"; fig.title = "mobility edge from dynamics";
    std::vector<double> xs_n, ys_n, xs_a, ys_a;
    for (const auto& p : pts) {
        if (p.lambda_c_numeric) { xs_n.push_back(p.two_omega_e); ys_n.push_back(*p.lambda_c_numeric); }
        if (p.lambda_c_analytic) { xs_a.push_back(p.two_omega_e); ys_a.push_back(*p.lambda_c_analytic); }
    }
    fig.polyline(xs_a, ys_a, "black", 1.2, true);
    std::vector<std::string> colors(xs_n.size(), "#3060c0");
    fig.scatter(xs_n, ys_n, colors, 3.0);
    scope.emit("mefit.svg", fig.render());
    return scope.finish();
}

// chi calibration of the effective chain against the full model
inline RunResult run_calibrate(const ExperimentConfig& cfg) {
    cfg.validate();
    detail::RunScope scope(cfg);
    const CalibrationResult r = calibrate_chi(cfg.lattice, cfg.run.chi_candidates);
    std::string csv = "chi,residual\n";
    for (std::size_t i = 0; i < cfg.run.chi_candidates.size(); ++i) {
        csv += io::fmt(cfg.run.chi_candidates[i]) + ',' + io::fmt(r.residuals[i]) + '\n';
    }
    scope.emit("calibration.csv", csv);
    std::string summary = r.ambiguous
                              ? std::string("ambiguous: candidate residuals within 5%\n")
                              : "chi = " + io::fmt(*r.chi) + "\n";
    scope.emit("calibration.txt", summary);
    return scope.finish();
}

inline RunResult dispatch(const ExperimentConfig& cfg) {
    const std::string& cmd = cfg.run.command;
    if (cmd == "bands") return run_bands(cfg);
    if (cmd == "fdmap") return run_fdmap(cfg);
    if (cmd == "wavefunction") return run_wavefunction(cfg);
    if (cmd == "dynamics") return run_dynamics(cfg);
    if (cmd == "pfscan") return run_pfscan(cfg);
    if (cmd == "mefit") return run_mefit(cfg);
    if (cmd == "calibrate") return run_calibrate(cfg);
    throw std::invalid_argument("unknown command: " + cmd);
}

} // namespace doublon
