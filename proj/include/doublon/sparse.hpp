// sparse.hpp — CSR Hamiltonians for sector dimensions beyond the dense budget

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doublon/hamiltonian.hpp"

namespace doublon {

struct SparseHamiltonian {
    int dim{0};
    std::vector<std::int64_t> row_ptr;
    std::vector<int> col;
    std::vector<double> val;
    BasisTag basis_tag{BasisTag::two_photon};

    void multiply(const std::complex<double>* x, std::complex<double>* y) const {
        for (int i = 0; i < dim; ++i) {
            std::complex<double> acc{0.0, 0.0};
            for (std::int64_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
                acc += val[p] * x[col[p]];
            }
            y[i] = acc;
        }
    }

    Eigen::VectorXcd multiply(const Eigen::VectorXcd& x) const {
        Eigen::VectorXcd y(dim);
        multiply(x.data(), y.data());
        return y;
    }

    // Gershgorin interval, guaranteed to contain the spectrum
    std::pair<double, double> gershgorin() const {
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (int i = 0; i < dim; ++i) {
            double d = 0.0, r = 0.0;
            for (std::int64_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
                if (col[p] == i) d += val[p];
                else r += std::abs(val[p]);
            }
            if (first) { lo = d - r; hi = d + r; first = false; }
            else { lo = std::min(lo, d - r); hi = std::max(hi, d + r); }
        }
        return {lo, hi};
    }
};

namespace detail {

struct TripletSink {
    std::vector<std::pair<std::int64_t, double>> entries; // key = i * dim + j
    std::int64_t dim{0};

    void operator()(int i, int j, double v) {
        entries.emplace_back(static_cast<std::int64_t>(i) * dim + j, v);
    }
};

inline SparseHamiltonian compress(TripletSink&& sink, int dim, BasisTag tag) {
    std::sort(sink.entries.begin(), sink.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseHamiltonian h;
    h.dim = dim;
    h.basis_tag = tag;
    h.row_ptr.assign(static_cast<std::size_t>(dim) + 1, 0);
    h.col.reserve(sink.entries.size());
    h.val.reserve(sink.entries.size());
    std::size_t k = 0;
    while (k < sink.entries.size()) {
        const std::int64_t key = sink.entries[k].first;
        double v = 0.0;
        while (k < sink.entries.size() && sink.entries[k].first == key) {
            v += sink.entries[k].second;
            ++k;
        }
        h.col.push_back(static_cast<int>(key % dim));
        h.val.push_back(v);
        ++h.row_ptr[static_cast<std::size_t>(key / dim) + 1];
    }
    for (std::size_t i = 1; i < h.row_ptr.size(); ++i) h.row_ptr[i] += h.row_ptr[i - 1];
    return h;
}

} // namespace detail

inline SparseHamiltonian build_sparse_two_photon_h(const LatticeSpec& spec) {
    spec.validate();
    const TwoPhotonBasis basis = build_two_photon_basis(spec.L);
    const int dim = static_cast<int>(basis.size());
    detail::TripletSink sink;
    sink.dim = dim;
    sink.entries.reserve(static_cast<std::size_t>(dim) * 6);
    detail::enumerate_two_photon(spec, basis, sink);
    return detail::compress(std::move(sink), dim, BasisTag::two_photon);
}

inline SparseHamiltonian build_sparse_emitter_h(const LatticeSpec& spec, const EmitterSpec& em,
                                                Sector sector) {
    spec.validate();
    em.validate(spec);
    if (sector == Sector::one_excitation && em.N != 1) {
        throw std::invalid_argument("build_sparse_emitter_h: one-excitation sector requires N = 1");
    }
    if (sector == Sector::two_excitation && em.N != 2) {
        throw std::invalid_argument("build_sparse_emitter_h: two-excitation sector requires N = 2");
    }
    const TwoPhotonBasis basis =
        sector == Sector::two_excitation ? build_two_photon_basis(spec.L) : TwoPhotonBasis{};
    const int dim = sector_dimension(spec.L, sector);
    detail::TripletSink sink;
    sink.dim = dim;
    sink.entries.reserve(static_cast<std::size_t>(dim) * 7);
    detail::enumerate_emitter(spec, em, sector, basis, sink);
    return detail::compress(std::move(sink), dim,
                            sector == Sector::one_excitation ? BasisTag::one_excitation
                                                             : BasisTag::two_excitation);
}

} // namespace doublon
