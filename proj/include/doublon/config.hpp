// config.hpp — experiment configuration: one JSON file drives every pipeline

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "doublon/hamiltonian.hpp"
#include "doublon/io.hpp"
#include "doublon/lattice.hpp"

namespace doublon {

struct RunParams {
    std::string command{"bands"};
    std::string out_dir{"out"};
    double t_final{2e4};
    int time_samples{400};
    double lambda_min{0.0};
    double lambda_max{1.0};
    int lambda_steps{21};
    double onset_threshold{0.1};
    double tail_frac{0.6};
    int k_points{201};
    double chi{2.0};
    std::vector<double> chi_candidates{1.0, 2.0, 4.0};
    double two_omega_e_min{0.0};
    double two_omega_e_max{0.0};
    int two_omega_e_steps{5};
    std::string fdmap_model{"chain"};    // chain | full
    bool doublon_window{true};
    std::string coupling_mode{"fixed"};  // fixed | peak | offpeak
    std::string engine{"auto"};          // auto | dense | sparse
    int threads{0};
    std::vector<double> wavefunction_lambdas{0.3, 0.4, 0.6, 0.8};
};

struct ExperimentConfig {
    LatticeSpec lattice;
    EmitterSpec emitters;
    RunParams run;

    std::vector<double> lambda_grid() const {
        std::vector<double> g;
        const int n = run.lambda_steps;
        if (n < 1) throw std::invalid_argument("config: lambda_steps must be >= 1");
        for (int i = 0; i < n; ++i) {
            g.push_back(n == 1 ? run.lambda_min
                               : run.lambda_min +
                                     (run.lambda_max - run.lambda_min) * i / (n - 1));
        }
        return g;
    }

    int engine_code() const {
        if (run.engine == "auto") return 0;
        if (run.engine == "dense") return 1;
        if (run.engine == "sparse") return 2;
        throw std::invalid_argument("config: engine must be auto|dense|sparse");
    }

    void validate() const {
        lattice.validate();
        emitters.validate(lattice);
        if (run.lambda_max < run.lambda_min) {
            throw std::invalid_argument("config: lambda_max < lambda_min");
        }
        if (!(run.t_final > 0)) throw std::invalid_argument("config: t_final must be positive");
        if (run.time_samples < 2) throw std::invalid_argument("config: time_samples must be >= 2");
        if (run.k_points < 2) throw std::invalid_argument("config: k_points must be >= 2");
        if (!(run.chi > 0)) throw std::invalid_argument("config: chi must be positive");
        if (run.fdmap_model != "chain" && run.fdmap_model != "full") {
            throw std::invalid_argument("config: fdmap_model must be chain|full");
        }
        if (run.coupling_mode != "fixed" && run.coupling_mode != "peak" &&
            run.coupling_mode != "offpeak") {
            throw std::invalid_argument("config: coupling_mode must be fixed|peak|offpeak");
        }
        (void)engine_code();
    }
};

namespace detail {

inline Boundary boundary_from(const std::string& s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "open") return Boundary::open;
    throw std::invalid_argument("config: boundary must be periodic|open");
}

} // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    const auto lat = j.value("lattice", nlohmann::json::object());
    if (lat.contains("l_index")) {
        c.lattice = LatticeSpec::fibonacci_ring(lat.at("l_index").get<int>());
    } else {
        c.lattice.L = lat.value("L", c.lattice.L);
        c.lattice.omega_num = lat.value("omega_num", c.lattice.omega_num);
        c.lattice.omega_den = lat.value("omega_den", static_cast<std::int64_t>(c.lattice.L));
    }
    c.lattice.kappa = lat.value("kappa", c.lattice.kappa);
    c.lattice.theta = lat.value("theta", c.lattice.theta);
    c.lattice.lambda = lat.value("lambda", c.lattice.lambda);
    c.lattice.omega_c = lat.value("omega_c", c.lattice.omega_c);
    c.lattice.J = lat.value("J", c.lattice.J);
    c.lattice.U = lat.value("U", c.lattice.U);
    c.lattice.c_mod = lat.value("c_mod", c.lattice.c_mod);
    c.lattice.boundary = detail::boundary_from(lat.value("boundary", std::string("periodic")));

    const auto em = j.value("emitters", nlohmann::json::object());
    c.emitters.N = em.value("N", c.emitters.N);
    if (em.contains("two_omega_e")) {
        c.emitters.omega_e = em.at("two_omega_e").get<double>() / 2.0;
    } else {
        c.emitters.omega_e = em.value("omega_e", c.emitters.omega_e);
    }
    c.emitters.g = em.value("g", c.emitters.g);
    c.emitters.n1 = em.value("n1", c.emitters.n1);
    c.emitters.n2 = em.value("n2", c.emitters.n2);

    const auto run = j.value("run", nlohmann::json::object());
    c.run.command = run.value("command", c.run.command);
    c.run.out_dir = run.value("out_dir", c.run.out_dir);
    c.run.t_final = run.value("t_final", c.run.t_final);
    c.run.time_samples = run.value("time_samples", c.run.time_samples);
    c.run.lambda_min = run.value("lambda_min", c.run.lambda_min);
    c.run.lambda_max = run.value("lambda_max", c.run.lambda_max);
    c.run.lambda_steps = run.value("lambda_steps", c.run.lambda_steps);
    c.run.onset_threshold = run.value("onset_threshold", c.run.onset_threshold);
    c.run.tail_frac = run.value("tail_frac", c.run.tail_frac);
    c.run.k_points = run.value("k_points", c.run.k_points);
    c.run.chi = run.value("chi", c.run.chi);
    c.run.chi_candidates = run.value("chi_candidates", c.run.chi_candidates);
    c.run.two_omega_e_min = run.value("two_omega_e_min", c.run.two_omega_e_min);
    c.run.two_omega_e_max = run.value("two_omega_e_max", c.run.two_omega_e_max);
    c.run.two_omega_e_steps = run.value("two_omega_e_steps", c.run.two_omega_e_steps);
    c.run.fdmap_model = run.value("fdmap_model", c.run.fdmap_model);
    c.run.doublon_window = run.value("doublon_window", c.run.doublon_window);
    c.run.coupling_mode = run.value("coupling_mode", c.run.coupling_mode);
    c.run.engine = run.value("engine", c.run.engine);
    c.run.threads = run.value("threads", c.run.threads);
    c.run.wavefunction_lambdas = run.value("wavefunction_lambdas", c.run.wavefunction_lambdas);
    return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["lattice"] = {
        {"L", c.lattice.L},
        {"kappa", c.lattice.kappa},
        {"omega_num", c.lattice.omega_num},
        {"omega_den", c.lattice.omega_den},
        {"theta", c.lattice.theta},
        {"lambda", c.lattice.lambda},
        {"omega_c", c.lattice.omega_c},
        {"J", c.lattice.J},
        {"U", c.lattice.U},
        {"c_mod", c.lattice.c_mod},
        {"boundary", c.lattice.boundary == Boundary::periodic ? "periodic" : "open"},
    };
    j["emitters"] = {
        {"N", c.emitters.N}, {"omega_e", c.emitters.omega_e}, {"g", c.emitters.g},
        {"n1", c.emitters.n1}, {"n2", c.emitters.n2},
    };
    j["run"] = {
        {"command", c.run.command},
        {"out_dir", c.run.out_dir},
        {"t_final", c.run.t_final},
        {"time_samples", c.run.time_samples},
        {"lambda_min", c.run.lambda_min},
        {"lambda_max", c.run.lambda_max},
        {"lambda_steps", c.run.lambda_steps},
        {"onset_threshold", c.run.onset_threshold},
        {"tail_frac", c.run.tail_frac},
        {"k_points", c.run.k_points},
        {"chi", c.run.chi},
        {"chi_candidates", c.run.chi_candidates},
        {"two_omega_e_min", c.run.two_omega_e_min},
        {"two_omega_e_max", c.run.two_omega_e_max},
        {"two_omega_e_steps", c.run.two_omega_e_steps},
        {"fdmap_model", c.run.fdmap_model},
        {"doublon_window", c.run.doublon_window},
        {"coupling_mode", c.run.coupling_mode},
        {"engine", c.run.engine},
        {"threads", c.run.threads},
        {"wavefunction_lambdas", c.run.wavefunction_lambdas},
    };
    return j;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

inline std::uint64_t config_hash(const ExperimentConfig& c) {
    return io::fnv1a(config_to_json(c).dump());
}

} // namespace doublon
