#include "hypercone/extension.hpp"

#include <algorithm>
#include <cmath>

namespace hypercone {

int annulus_index(Scalar d) {
    if (!(d > 0) || !std::isfinite(d))
        throw std::domain_error("annulus_index needs a positive finite distance");
    int e;
    const Scalar m = std::frexp(d, &e); // d = m * 2^e, m in [0.5, 1)
    return m == 0.5 ? 1 - e : -e;
}

Scalar log2_inverse(Scalar t) {
    if (!(t > 0) || !std::isfinite(t))
        throw std::domain_error("log2_inverse needs a positive finite height");
    int e;
    const Scalar m = std::frexp(t, &e);
    if (m == 0.5) return static_cast<Scalar>(1 - e);
    return -std::log2(t);
}

ScaleSpectrum scale_spectrum(const FiniteMetricSpace& S, Index x) {
    if (x < 0 || x >= S.n())
        throw std::out_of_range("scale_spectrum: point index out of range");
    std::vector<int> levels;
    levels.reserve(static_cast<std::size_t>(S.n()) - 1);
    for (Index y = 0; y < S.n(); ++y)
        if (y != x) levels.push_back(annulus_index(S.d(y, x)));
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    ScaleSpectrum spec;
    spec.base = x;
    spec.levels = std::move(levels);
    spec.m = spec.levels.front();
    spec.M = spec.levels.back();
    return spec;
}

namespace {

// Largest image level over the points past the annulus floor of `level`.
int image_level_unchecked(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                          const PointMap& f, Index x, int level) {
    const Scalar floor = std::ldexp(1.0, -level - 1);
    bool found = false;
    int best = 0;
    for (Index y = 0; y < Z.n(); ++y) {
        if (y == x || !(Z.d(y, x) > floor)) continue;
        const int cand = annulus_index(W.d(f[y], f[x]));
        if (!found || cand > best) best = cand;
        found = true;
    }
    if (!found)
        throw LevelNotInSpectrumError(x, level); // cannot happen for level in S_x
    return best;
}

} // namespace

int image_level(const FiniteMetricSpace& Z, const FiniteMetricSpace& W, const PointMap& f,
                Index x, int level) {
    validate_map(Z, W, f);
    const ScaleSpectrum spec = scale_spectrum(Z, x);
    if (!std::binary_search(spec.levels.begin(), spec.levels.end(), level))
        throw LevelNotInSpectrumError(x, level);
    return image_level_unchecked(Z, W, f, x, level);
}

PiecewiseLinearMap build_level_map(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                                   const PointMap& f, Index x) {
    ScaleSpectrum spec = scale_spectrum(Z, x);
    spec.phi.reserve(spec.levels.size());
    for (int l : spec.levels)
        spec.phi.push_back(image_level_unchecked(Z, W, f, x, l));

    PiecewiseLinearMap map;
    map.knots.reserve(spec.levels.size());
    map.values.reserve(spec.levels.size());
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
        map.knots.push_back(static_cast<Scalar>(spec.levels[i]));
        map.values.push_back(static_cast<Scalar>(spec.phi[i]));
    }
    return map;
}

Scalar eval_piecewise(const PiecewiseLinearMap& map, Scalar t) {
    const auto& ks = map.knots;
    const auto& vs = map.values;
    if (ks.empty())
        throw std::invalid_argument("piecewise map has no breakpoints");
    if (t <= ks.front())
        return vs.front() + (t - ks.front()) * map.left_slope;
    if (t >= ks.back())
        return vs.back() + (t - ks.back()) * map.right_slope;

    const auto it = std::upper_bound(ks.begin(), ks.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - ks.begin());
    const std::size_t lo = hi - 1;
    if (t == ks[lo]) return vs[lo];
    const Scalar mu = (t - ks[lo]) / (ks[hi] - ks[lo]);
    return (1 - mu) * vs[lo] + mu * vs[hi];
}

ConeMapExtension extend_map(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                            const PointMap& f) {
    validate_map(Z, W, f);
    ConeMapExtension ext;
    ext.map = f;
    ext.per_point.reserve(static_cast<std::size_t>(Z.n()));
    for (Index x = 0; x < Z.n(); ++x)
        ext.per_point.push_back(build_level_map(Z, W, f, x));
    return ext;
}

ConePoint apply_extension(const ConeMapExtension& ext, const ConePoint& p) {
    const Scalar u = log2_inverse(p.height);
    const Scalar v = eval_piecewise(ext.per_point[static_cast<std::size_t>(p.base)], u);
    return ConePoint(ext.map[p.base], std::exp2(-v));
}

} // namespace hypercone
