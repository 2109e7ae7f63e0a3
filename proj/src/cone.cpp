#include "hypercone/cone.hpp"

#include <algorithm>
#include <cmath>

namespace hypercone {

Scalar rho_h(Scalar base_distance, Scalar s, Scalar t) {
    // grouped so the result is bitwise symmetric in (s, t)
    return 2 * std::log(base_distance + std::max(s, t)) - (std::log(s) + std::log(t));
}

Scalar rho_h(const FiniteMetricSpace& S, const ConePoint& p, const ConePoint& q) {
    return rho_h(S.d(p.base, q.base), p.height, q.height);
}

Scalar d_h(Scalar base_distance, Scalar s, Scalar t) {
    const Scalar num = base_distance * base_distance + (s - t) * (s - t);
    return std::acosh(1 + num / (2 * s * t));
}

Scalar d_h(const FiniteMetricSpace& S, const ConePoint& p, const ConePoint& q) {
    return d_h(S.d(p.base, q.base), p.height, q.height);
}

ConeSample build_cone_sample(const FiniteMetricSpace& S, int h_lo, int h_hi, bool cap_at_diam) {
    if (h_lo > h_hi)
        throw std::invalid_argument("build_cone_sample: h_lo must not exceed h_hi");

    const Scalar diam = S.diameter();
    ConeSample sample;
    sample.space_hash = space_hash(S);
    for (int k = h_lo; k <= h_hi; ++k) {
        const Scalar h = std::ldexp(1.0, k);
        if (cap_at_diam && h > diam) continue;
        sample.height_grid.push_back(h);
    }
    if (sample.height_grid.empty())
        throw EmptyConeSampleError("height cap at diameter removed every grid height");

    sample.points.reserve(static_cast<std::size_t>(S.n()) * sample.height_grid.size());
    for (Index x = 0; x < S.n(); ++x)
        for (Scalar h : sample.height_grid)
            sample.points.emplace_back(x, h);
    return sample;
}

Matrix cone_distance_matrix(const FiniteMetricSpace& S, const ConeSample& sample) {
    const Index m = static_cast<Index>(sample.points.size());
    Matrix D(m, m);
    for (Index i = 0; i < m; ++i) {
        D(i, i) = 0;
        const ConePoint& p = sample.points[static_cast<std::size_t>(i)];
        for (Index j = i + 1; j < m; ++j) {
            const ConePoint& q = sample.points[static_cast<std::size_t>(j)];
            D(i, j) = D(j, i) = rho_h(S, p, q);
        }
    }
    return D;
}

} // namespace hypercone
