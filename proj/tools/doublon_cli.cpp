// doublon — simulate two-photon bound states in a quasiperiodic mosaic
// Bose-Hubbard waveguide: bands, mobility edges, emitter decay dynamics.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <doublon/runners.hpp>
#include <doublon/spectral.hpp>

#if defined(DOUBLON_USE_LAPACKE)
extern "C" void openblas_set_num_threads(int);
#endif

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<int> kappa;
    std::optional<double> u;
    std::optional<double> lambda;
    std::optional<double> lambda_min, lambda_max;
    std::optional<int> lambda_steps;
    std::optional<double> two_omega_e;
    std::optional<double> g;
    std::optional<int> l_index;
    std::optional<double> t_final;
    std::optional<double> c_mod;
    std::optional<double> chi;
    std::optional<int> threads;
    std::optional<std::string> engine;
    std::optional<int> site;
    std::optional<double> theta;
    std::optional<double> two_omega_e_min, two_omega_e_max;
    std::optional<int> two_omega_e_steps;
    std::optional<double> onset_threshold;
    std::optional<std::string> fdmap_model;
    std::optional<int> n_emitters;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config_path, "JSON config file");
    sub->add_option("--out", f.out_dir, "output directory");
    sub->add_option("--kappa", f.kappa, "mosaic period (2 or 3 for analytic MEs)");
    sub->add_option("--u", f.u, "on-site interaction U (units of J)");
    sub->add_option("--lambda", f.lambda, "potential amplitude");
    sub->add_option("--lambda-min", f.lambda_min, "sweep start");
    sub->add_option("--lambda-max", f.lambda_max, "sweep end");
    sub->add_option("--lambda-steps", f.lambda_steps, "sweep point count");
    sub->add_option("--two-omega-e", f.two_omega_e, "pair transition energy 2 omega_e");
    sub->add_option("--g", f.g, "emitter-waveguide coupling");
    sub->add_option("--l-index", f.l_index, "Fibonacci index n; L = F_n, omega = F_{n-1}/F_n");
    sub->add_option("--t-final", f.t_final, "evolution horizon (1/J)");
    sub->add_option("--c-mod", f.c_mod, "prefactor of the interaction modulation");
    sub->add_option("--chi", f.chi, "doublon-chain potential factor");
    sub->add_option("--threads", f.threads, "worker threads (0 = hardware)");
    sub->add_option("--engine", f.engine, "auto|dense|sparse evolution backend");
    sub->add_option("--site", f.site, "emitter coupling site n1 = n2");
    sub->add_option("--theta", f.theta, "potential phase offset");
    sub->add_option("--two-omega-e-min", f.two_omega_e_min, "mefit grid start");
    sub->add_option("--two-omega-e-max", f.two_omega_e_max, "mefit grid end");
    sub->add_option("--two-omega-e-steps", f.two_omega_e_steps, "mefit grid points");
    sub->add_option("--onset-threshold", f.onset_threshold, "lambda_c detection threshold");
    sub->add_option("--fdmap-model", f.fdmap_model, "chain|full");
    sub->add_option("--n-emitters", f.n_emitters, "1 or 2");
}

doublon::ExperimentConfig assemble(const CommonFlags& f, const std::string& command) {
    doublon::ExperimentConfig cfg;
    if (!f.config_path.empty()) cfg = doublon::load_config(f.config_path);
    cfg.run.command = command;
    if (!f.out_dir.empty()) cfg.run.out_dir = f.out_dir;
    if (f.l_index) {
        const auto keep = cfg.lattice;
        cfg.lattice = doublon::LatticeSpec::fibonacci_ring(*f.l_index);
        cfg.lattice.kappa = keep.kappa;
        cfg.lattice.theta = keep.theta;
        cfg.lattice.lambda = keep.lambda;
        cfg.lattice.omega_c = keep.omega_c;
        cfg.lattice.J = keep.J;
        cfg.lattice.U = keep.U;
        cfg.lattice.c_mod = keep.c_mod;
        cfg.lattice.boundary = keep.boundary;
    }
    if (f.kappa) cfg.lattice.kappa = *f.kappa;
    if (f.u) cfg.lattice.U = *f.u;
    if (f.lambda) cfg.lattice.lambda = *f.lambda;
    if (f.theta) cfg.lattice.theta = *f.theta;
    if (f.c_mod) cfg.lattice.c_mod = *f.c_mod;
    if (f.two_omega_e) cfg.emitters.omega_e = *f.two_omega_e / 2.0;
    if (f.g) cfg.emitters.g = *f.g;
    if (f.site) cfg.emitters.n1 = cfg.emitters.n2 = *f.site;
    if (f.n_emitters) cfg.emitters.N = *f.n_emitters;
    if (f.lambda_min) cfg.run.lambda_min = *f.lambda_min;
    if (f.lambda_max) cfg.run.lambda_max = *f.lambda_max;
    if (f.lambda_steps) cfg.run.lambda_steps = *f.lambda_steps;
    if (f.t_final) cfg.run.t_final = *f.t_final;
    if (f.chi) cfg.run.chi = *f.chi;
    if (f.threads) cfg.run.threads = *f.threads;
    if (f.engine) cfg.run.engine = *f.engine;
    if (f.two_omega_e_min) cfg.run.two_omega_e_min = *f.two_omega_e_min;
    if (f.two_omega_e_max) cfg.run.two_omega_e_max = *f.two_omega_e_max;
    if (f.two_omega_e_steps) cfg.run.two_omega_e_steps = *f.two_omega_e_steps;
    if (f.onset_threshold) cfg.run.onset_threshold = *f.onset_threshold;
    if (f.fdmap_model) cfg.run.fdmap_model = *f.fdmap_model;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
#if defined(DOUBLON_USE_LAPACKE)
    // sweeps parallelize over grid points; keep BLAS single-threaded underneath
    openblas_set_num_threads(1);
#endif
    CLI::App app{"doublon — mosaic-waveguide two-photon bound state simulator"};
    app.require_subcommand(1);

    const std::vector<std::string> commands{"bands",  "fdmap",  "wavefunction", "dynamics",
                                            "pfscan", "mefit",  "calibrate"};
    std::vector<CommonFlags> flags(commands.size());
    for (std::size_t i = 0; i < commands.size(); ++i) {
        add_common(app.add_subcommand(commands[i]), flags[i]);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < commands.size(); ++i) {
            if (app.get_subcommand(commands[i])->parsed()) {
                const auto cfg = assemble(flags[i], commands[i]);
                const auto result = doublon::dispatch(cfg);
                for (const auto& p : result.files) std::printf("wrote %s\n", p.string().c_str());
                return 0;
            }
        }
        std::fprintf(stderr, "no subcommand\n");
        return 2;
    } catch (const doublon::ResourceError& e) {
        std::fprintf(stderr, "resource error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
