#pragma once

#include "hypercone/metric_space.hpp"

namespace hypercone {

/// A point (x, t) of the infinite cone Z x (0, inf) over a base space.
struct ConePoint {
    Index base;
    Scalar height;

    ConePoint(Index base_, Scalar height_) : base(base_), height(height_) {
        if (!(height_ > 0))
            throw std::domain_error("cone point height must be positive");
    }
};

/// rho((x,s),(y,t)) = 2 log((d(x,y) + max(s,t)) / sqrt(s t)).
/// Evaluated as 2 log(d + max) - log s - log t so that rho(p,p) == 0 exactly.
Scalar rho_h(Scalar base_distance, Scalar s, Scalar t);
Scalar rho_h(const FiniteMetricSpace& S, const ConePoint& p, const ConePoint& q);

/// d_h((x,s),(y,t)) = acosh(1 + (d(x,y)^2 + (s-t)^2) / (2 s t)).
Scalar d_h(Scalar base_distance, Scalar s, Scalar t);
Scalar d_h(const FiniteMetricSpace& S, const ConePoint& p, const ConePoint& q);

class EmptyConeSampleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite stand-in for the cone: every base point at every grid height.
struct ConeSample {
    std::uint64_t space_hash = 0;
    std::vector<Scalar> height_grid; // retained heights, ascending
    std::vector<ConePoint> points;   // base-major order
};

/// Heights 2^k for k in [h_lo, h_hi], optionally filtered to <= diam(S).
/// Throws EmptyConeSampleError when the cap removes every height.
ConeSample build_cone_sample(const FiniteMetricSpace& S, int h_lo, int h_hi,
                             bool cap_at_diam = false);

/// Pairwise rho_h matrix of a sample; itself a valid metric, so it can be fed
/// back through delta_hyperbolicity.
Matrix cone_distance_matrix(const FiniteMetricSpace& S, const ConeSample& sample);

} // namespace hypercone
