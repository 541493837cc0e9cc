// chebyshev.hpp — Chebyshev expansion of exp(-i H t) for sparse Hamiltonians

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doublon/sparse.hpp"

#if defined(DOUBLON_USE_LAPACKE)
#include <lapacke.h>
#endif

namespace doublon {

namespace detail {

// J_0..J_m(x) by downward Miller recurrence with sum normalization
inline std::vector<double> bessel_j_table(int m, double x) {
    if (x <= 0.0) {
        std::vector<double> t(static_cast<std::size_t>(m) + 1, 0.0);
        t[0] = 1.0;
        return t;
    }
    const int start = m + 20 + static_cast<int>(std::sqrt(40.0 * m + 100.0));
    std::vector<double> t(static_cast<std::size_t>(start) + 2, 0.0);
    t[static_cast<std::size_t>(start) + 1] = 0.0;
    t[static_cast<std::size_t>(start)] = 1e-300;
    for (int k = start; k >= 1; --k) {
        t[static_cast<std::size_t>(k) - 1] =
            (2.0 * k / x) * t[static_cast<std::size_t>(k)] - t[static_cast<std::size_t>(k) + 1];
        if (std::abs(t[static_cast<std::size_t>(k) - 1]) > 1e250) {
            for (std::size_t i = static_cast<std::size_t>(k) - 1; i < t.size(); ++i) t[i] *= 1e-250;
        }
    }
    double norm = t[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * t[static_cast<std::size_t>(k)];
    t.resize(static_cast<std::size_t>(m) + 1);
    for (double& v : t) v /= norm;
    return t;
}

// spectral bounds by plain Lanczos (no reorthogonalization), padded; the pad
// keeps the scaled spectrum strictly inside [-1, 1]
inline std::pair<double, double> lanczos_bounds(const SparseHamiltonian& h, int iters = 80) {
    const int n = h.dim;
    if (iters > n) iters = n;
    Eigen::VectorXcd v(n), w(n), prev = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i) v(i) = std::complex<double>(std::sin(1.0 + i), 0.0);
    v.normalize();
    std::vector<double> alpha, beta;
    double b = 0.0;
    for (int k = 0; k < iters; ++k) {
        h.multiply(v.data(), w.data());
        if (k > 0) w -= b * prev;
        const double a = std::real(v.dot(w));
        w -= a * v;
        alpha.push_back(a);
        b = w.norm();
        if (b < 1e-13) break;
        beta.push_back(b);
        prev = v;
        v = w / b;
    }
    const int m = static_cast<int>(alpha.size());
    std::vector<double> d = alpha, e(beta.begin(), beta.end());
    e.resize(static_cast<std::size_t>(std::max(m - 1, 0)));
#if defined(DOUBLON_USE_LAPACKE)
    if (m > 1) {
        const lapack_int info = LAPACKE_dsterf(m, d.data(), e.data());
        if (info != 0) throw std::runtime_error("lanczos_bounds: dsterf failed");
    }
    double lo = d[0], hi = d[static_cast<std::size_t>(m) - 1];
#else
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) T(i, i) = d[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m; ++i) {
        T(i, i + 1) = e[static_cast<std::size_t>(i)];
        T(i + 1, i) = e[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues()(0), hi = es.eigenvalues()(m - 1);
#endif
    const auto [glo, ghi] = h.gershgorin();
    const double pad = 0.03 * (hi - lo) + 1e-9;
    lo = std::max(lo - pad, glo);
    hi = std::min(hi + pad, ghi);
    return {lo, hi};
}

} // namespace detail

// Propagates |psi> through exp(-i H dt) steps; spectral bounds are computed
// once per Hamiltonian. Exact to machine precision within the bounds.
class ChebyshevPropagator {
public:
    explicit ChebyshevPropagator(const SparseHamiltonian& h) : h_(h) {
        const auto [lo, hi] = detail::lanczos_bounds(h);
        half_span_ = 0.5 * (hi - lo);
        center_ = 0.5 * (hi + lo);
        if (half_span_ <= 0.0) half_span_ = 1e-12;
        t0_.resize(h.dim);
        t1_.resize(h.dim);
        t2_.resize(h.dim);
    }

    void step(Eigen::VectorXcd& psi, double dt) const {
        if (dt == 0.0) return;
        if (dt < 0.0) { step_signed(psi, -dt, true); return; }
        step_signed(psi, dt, false);
    }

    double half_span() const { return half_span_; }

private:
    // exp(-i H t) = e^{-i c t} sum_k (2 - d_k0) (-i)^k J_k(a t) T_k((H - c)/a)
    void step_signed(Eigen::VectorXcd& psi, double dt, bool reversed) const {
        const double x = half_span_ * dt;
        const int m = static_cast<int>(x + 45.0 * std::cbrt(x + 1.0) + 20.0);
        const std::vector<double> J = detail::bessel_j_table(m, x);
        const std::complex<double> unit = reversed ? std::complex<double>(0.0, 1.0)
                                                   : std::complex<double>(0.0, -1.0);
        // T_0 = psi, T_1 = Hs psi
        t0_ = psi;
        apply_scaled(t0_, t1_);
        Eigen::VectorXcd acc = J[0] * t0_;
        std::complex<double> ik = unit;
        acc += 2.0 * J[1] * ik * t1_;
        for (int k = 2; k <= m; ++k) {
            apply_scaled(t1_, t2_);
            t2_ = 2.0 * t2_ - t0_;
            ik *= unit;
            if (std::abs(J[static_cast<std::size_t>(k)]) > 0.0) {
                acc += 2.0 * J[static_cast<std::size_t>(k)] * ik * t2_;
            }
            std::swap(t0_, t1_);
            std::swap(t1_, t2_);
            if (k > x && std::abs(J[static_cast<std::size_t>(k)]) < 1e-17) break;
        }
        const double phase = center_ * dt * (reversed ? 1.0 : -1.0);
        psi = std::polar(1.0, phase) * acc;
    }

    void apply_scaled(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
        h_.multiply(in.data(), out.data());
        out = (out - center_ * in) / half_span_;
    }

    const SparseHamiltonian& h_;
    double half_span_{1.0};
    double center_{0.0};
    mutable Eigen::VectorXcd t0_, t1_, t2_;
};

} // namespace doublon
