#pragma once

// Independent brute-force enumeration of resonance relations, used as the
// reference for find_resonances.

#include <algorithm>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

namespace qpgerm::testing {

struct OracleRelation {
    int s;
    std::vector<int> beta;
    bool operator<(const OracleRelation& o) const
    {
        const int da = std::accumulate(beta.begin(), beta.end(), 0);
        const int db = std::accumulate(o.beta.begin(), o.beta.end(), 0);
        if (da != db) return da < db;
        if (s != o.s) return s < o.s;
        return beta < o.beta;
    }
    bool operator==(const OracleRelation&) const = default;
};

// Odometer over the box [0, D]^n, testing |prod lambda_j^beta_j - lambda_s| in
// long double complex arithmetic.
inline std::vector<OracleRelation> oracle(const std::vector<long double>& theta, int D, long double tol)
{
    const auto n = theta.size();
    std::vector<std::complex<long double>> lam;
    for (auto t : theta) lam.push_back(std::polar(1.0L, 2.0L * std::numbers::pi_v<long double> * t));
    std::vector<OracleRelation> out;
    std::vector<int> beta(n, 0);
    for (;;) {
        std::size_t i = 0;
        while (i < n && beta[i] == D) beta[i++] = 0;
        if (i == n) break;
        ++beta[i];
        const int deg = std::accumulate(beta.begin(), beta.end(), 0);
        if (deg < 2 || deg > D) continue;
        std::complex<long double> p = 1.0L;
        for (std::size_t j = 0; j < n; ++j)
            for (int e = 0; e < beta[j]; ++e) p *= lam[j];
        for (std::size_t s = 0; s < n; ++s)
            if (std::abs(p - lam[s]) < tol) out.push_back({static_cast<int>(s) + 1, beta});
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace qpgerm::testing
