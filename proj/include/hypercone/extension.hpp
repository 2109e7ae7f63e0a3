#pragma once

#include "hypercone/cone.hpp"
#include "hypercone/quasisym.hpp"

namespace hypercone {

/// The unique integer l with 2^(-l-1) < d <= 2^(-l). Exponent extraction, not
/// log-and-round, so dyadic boundaries land deterministically: d = 2^(-k)
/// belongs to level k.
int annulus_index(Scalar d);

/// log2(1/t); exact integer when t is a power of two.
Scalar log2_inverse(Scalar t);

/// The set of occupied dyadic levels around a base point, with the largest
/// image level per own level once filled in.
struct ScaleSpectrum {
    Index base = 0;
    std::vector<int> levels; // ascending; level l occupied <=> some y lies in annulus l
    int m = 0;               // levels.front()
    int M = 0;               // levels.back()
    std::vector<int> phi;    // parallel to levels; empty until computed
};

/// Occupied levels only (phi left empty). Nonempty for every valid space.
ScaleSpectrum scale_spectrum(const FiniteMetricSpace& S, Index x);

class LevelNotInSpectrumError : public std::domain_error {
public:
    Index x;
    int level;
    LevelNotInSpectrumError(Index x_, int level_)
        : std::domain_error("level " + std::to_string(level_) +
                            " is not in the spectrum at point " + std::to_string(x_)),
          x(x_), level(level_) {}
};

/// Largest image level over all y with d_Z(y,x) > 2^(-l-1); the supremum is
/// attained because any point of annulus l qualifies. Requires l in S_x.
int image_level(const FiniteMetricSpace& Z, const FiniteMetricSpace& W, const PointMap& f,
                Index x, int level);

/// Continuous non-decreasing piecewise-linear map with unit-slope tails; maps
/// the reals onto the reals.
struct PiecewiseLinearMap {
    std::vector<Scalar> knots;  // strictly increasing
    std::vector<Scalar> values; // non-decreasing
    Scalar left_slope = 1;
    Scalar right_slope = 1;
};

/// Breakpoints at every occupied level with the image-level values; linear
/// interpolation across gaps; slope-1 tails. A single-level spectrum yields
/// the slope-1 line through its one breakpoint.
PiecewiseLinearMap build_level_map(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                                   const PointMap& f, Index x);

/// Exact stored value at a knot; between knots the convex combination
/// (1-mu) v1 + mu v2; slope-1 extrapolation outside.
Scalar eval_piecewise(const PiecewiseLinearMap& map, Scalar t);

/// The cone extension: a level map per source point. Heights transform by
/// (x, t) -> (f(x), 2^(-levelmap_x(log2(1/t)))), sweeping the whole target ray.
struct ConeMapExtension {
    PointMap map;
    std::vector<PiecewiseLinearMap> per_point;
};

ConeMapExtension extend_map(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                            const PointMap& f);

ConePoint apply_extension(const ConeMapExtension& ext, const ConePoint& p);

} // namespace hypercone
