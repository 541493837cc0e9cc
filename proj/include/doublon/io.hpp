// io.hpp — deterministic CSV emission/parsing and the run manifest

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doublon/dynamics.hpp"
#include "doublon/spectral.hpp"

namespace doublon::io {

inline constexpr const char* kVersion = "0.1.0";

// shortest round-trippable decimal
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lg", &back);
    if (back == v) {
        for (int prec = 1; prec < 17; ++prec) {
            char s[32];
            std::snprintf(s, sizeof(s), "%.*g", prec, v);
            std::sscanf(s, "%lg", &back);
            if (back == v) return s;
        }
    }
    return buf;
}

// write-then-rename so partial output never lands under the final name
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

// ---- fd records: lambda,E,ipr,fd,class ----

inline std::string fd_records_csv(const std::vector<FdRecord>& records) {
    std::string s = "lambda,E,ipr,fd,class\n";
    for (const auto& r : records) {
        s += fmt(r.lambda) + ',' + fmt(r.E) + ',' + fmt(r.ipr) + ',' + fmt(r.fd) + ',' +
             to_string(r.cls) + '\n';
    }
    return s;
}

inline std::vector<FdRecord> parse_fd_records(const std::filesystem::path& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0].size() != 5 || rows[0][0] != "lambda") {
        throw std::runtime_error("fd csv: bad header in " + path.string());
    }
    std::vector<FdRecord> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        FdRecord r;
        r.lambda = std::stod(f[0]);
        r.E = std::stod(f[1]);
        r.ipr = std::stod(f[2]);
        r.fd = std::stod(f[3]);
        if (f[4] == "localized") r.cls = LocalizationClass::localized;
        else if (f[4] == "extended") r.cls = LocalizationClass::extended;
        else r.cls = LocalizationClass::margin;
        out.push_back(r);
    }
    return out;
}

// ---- trajectory: t,pe ----

inline std::string trajectory_csv(const Trajectory& traj) {
    std::string s = "t,pe\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        s += fmt(traj.times[i]) + ',' + fmt(traj.pe[i]) + '\n';
    }
    return s;
}

inline Trajectory parse_trajectory(const std::filesystem::path& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0].size() != 2 || rows[0][0] != "t") {
        throw std::runtime_error("trajectory csv: bad header in " + path.string());
    }
    Trajectory t;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        t.times.push_back(std::stod(rows[i][0]));
        t.pe.push_back(std::stod(rows[i][1]));
    }
    return t;
}

// ---- pf scan: lambda,pf,pf_tail ----

inline std::string pf_scan_csv(const PfScan& scan) {
    std::string s = "lambda,pf,pf_tail\n";
    for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
        s += fmt(scan.lambdas[i]) + ',' + fmt(scan.pf[i]) + ',' + fmt(scan.pf_tail[i]) + '\n';
    }
    return s;
}

inline PfScan parse_pf_scan(const std::filesystem::path& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "lambda") {
        throw std::runtime_error("pf scan csv: bad header in " + path.string());
    }
    PfScan s;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        s.lambdas.push_back(std::stod(rows[i][0]));
        s.pf.push_back(std::stod(rows[i][1]));
        s.pf_tail.push_back(rows[i].size() > 2 ? std::stod(rows[i][2]) : std::stod(rows[i][1]));
    }
    return s;
}

// ---- bands: K,k,E_S,E_B_plus,E_B_minus ----

struct BandRow {
    double K{0}, k{0}, E_S{0}, E_B_plus{0}, E_B_minus{0};
};

inline std::string bands_csv(const std::vector<BandRow>& rows) {
    std::string s = "K,k,E_S,E_B_plus,E_B_minus\n";
    for (const auto& r : rows) {
        s += fmt(r.K) + ',' + fmt(r.k) + ',' + fmt(r.E_S) + ',' + fmt(r.E_B_plus) + ',' +
             fmt(r.E_B_minus) + '\n';
    }
    return s;
}

// ---- mobility-edge fit curve: two_omega_e,lambda_c_numeric,lambda_c_analytic ----

inline std::string me_curve_csv(const std::vector<MeFitPoint>& pts) {
    std::string s = "two_omega_e,lambda_c_numeric,lambda_c_analytic\n";
    for (const auto& p : pts) {
        s += fmt(p.two_omega_e) + ',';
        s += p.lambda_c_numeric ? fmt(*p.lambda_c_numeric) : std::string("nan");
        s += ',';
        s += p.lambda_c_analytic ? fmt(*p.lambda_c_analytic) : std::string("nan");
        s += '\n';
    }
    return s;
}

// ---- run manifest ----

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct RunManifest {
    std::uint64_t config_hash{0};
    std::string version{kVersion};
    double wall_seconds{0.0};
    std::vector<std::string> outputs;
};

inline std::string manifest_json(const RunManifest& m) {
    char hash[19];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(m.config_hash));
    std::string s = "{\n";
    s += "  \"config_hash\": \"" + std::string(hash) + "\",\n";
    s += "  \"version\": \"" + m.version + "\",\n";
    s += "  \"wall_seconds\": " + fmt(m.wall_seconds) + ",\n";
    s += "  \"outputs\": [";
    for (std::size_t i = 0; i < m.outputs.size(); ++i) {
        s += "\"" + m.outputs[i] + "\"";
        if (i + 1 < m.outputs.size()) s += ", ";
    }
    s += "]\n}\n";
    return s;
}

} // namespace doublon::io
