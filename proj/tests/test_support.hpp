#pragma once

#include <cmath>
#include <random>

#include "qpgerm/series.hpp"

namespace qpgerm::testing {

inline MultiIndex random_index(std::mt19937_64& rng, int n, int max_degree)
{
    std::uniform_int_distribution<int> deg(0, max_degree);
    const int d = deg(rng);
    MultiIndex m = MultiIndex::zero(n);
    std::uniform_int_distribution<int> var(0, n);
    for (int i = 0; i < d; ++i) {
        const int v = var(rng);
        if (v == 0) ++m.z;
        else ++m.w[static_cast<std::size_t>(v - 1)];
    }
    return m;
}

inline cplx random_coeff(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng)};
}

// terms of degree in [min_degree, cap]
inline Series random_series(std::mt19937_64& rng, int n, int cap, int terms, int min_degree = 0)
{
    Series s(n, cap);
    for (int i = 0; i < terms; ++i) {
        auto m = random_index(rng, n, cap);
        if (m.degree() < min_degree) continue;
        s.add_term(m, random_coeff(rng));
    }
    s.prune();
    return s;
}

inline std::vector<cplx> random_point(std::mt19937_64& rng, int dim, double radius)
{
    std::vector<cplx> p;
    for (int i = 0; i < dim; ++i) p.push_back(radius * random_coeff(rng));
    return p;
}

} // namespace qpgerm::testing
