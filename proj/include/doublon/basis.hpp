// basis.hpp — symmetric two-photon pair basis |m,n>, m <= n

#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace doublon {

// Lexicographic enumeration of unordered site pairs (m, n) with 0 <= m <= n < L.
// Row index of (m, n): m*L - m(m-1)/2 + (n - m).
struct TwoPhotonBasis {
    int L{0};
    std::vector<std::pair<int, int>> pairs;

    std::size_t size() const { return pairs.size(); }

    int index_of(int m, int n) const {
        if (m > n) std::swap(m, n);
        if (m < 0 || n >= L) throw std::out_of_range("TwoPhotonBasis: pair out of range");
        return m * L - (m * (m - 1)) / 2 + (n - m);
    }

    bool diagonal(int row) const { return pairs[static_cast<std::size_t>(row)].first ==
                                          pairs[static_cast<std::size_t>(row)].second; }
};

inline TwoPhotonBasis build_two_photon_basis(int L) {
    if (L < 2) throw std::invalid_argument("build_two_photon_basis: L must be >= 2");
    TwoPhotonBasis b;
    b.L = L;
    b.pairs.reserve(static_cast<std::size_t>(L) * (L + 1) / 2);
    for (int m = 0; m < L; ++m) {
        for (int n = m; n < L; ++n) {
            b.pairs.emplace_back(m, n);
        }
    }
    return b;
}

} // namespace doublon
