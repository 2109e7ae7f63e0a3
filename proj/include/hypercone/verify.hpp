#pragma once

#include "hypercone/extension.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace hypercone {

/// Loose bag of witness coordinates; unused slots stay NaN / -1.
struct Witness {
    Index x = -1;
    Index y = -1;
    Scalar a = std::numeric_limits<Scalar>::quiet_NaN(); // level / height / t slot
    Scalar b = std::numeric_limits<Scalar>::quiet_NaN();
    Scalar value = 0; // deviation the witness re-evaluates to
};

struct CheckEntry {
    std::string id;
    Scalar constant = 0;
    bool exhaustive = true;
    std::uint64_t samples = 0;
    Witness worst;
};

class MonotonicityViolationError : public std::runtime_error {
public:
    Index x;
    Scalar t1, t2;
    MonotonicityViolationError(Index x_, Scalar t1_, Scalar t2_)
        : std::runtime_error("ray heights not monotone at point " + std::to_string(x_)),
          x(x_), t1(t1_), t2(t2_) {}
};

/// Max over ordered pairs (x,y) of |levelvalue_x(level of y) - image level of y|.
CheckEntry check_lemma_annulus(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                               const ConeMapExtension& ext);

struct PairBoundOptions {
    std::uint64_t real_pairs_per_point = 256;
    Scalar pad = 5; // sample window [m - pad, M + pad]
    std::uint64_t seed = 0;
};

struct PhiPairBounds {
    CheckEntry levels; // over occupied level pairs, exhaustive
    CheckEntry reals;  // over sampled real pairs
};

/// Smallest C with |dl|/theta - C <= |dv| <= theta |dl| + C over level pairs,
/// and the same for the interpolated map over sampled real pairs.
PhiPairBounds check_phi_pair_bounds(const ConeMapExtension& ext, Scalar theta,
                                    const PairBoundOptions& opts = {});

struct TwoPointOptions {
    std::uint64_t t_samples_per_pair = 8;
    Scalar span = 12; // octaves above the pair distance to sample
    std::uint64_t seed = 0;
};

struct TwoPointChecks {
    CheckEntry image_vs_levelmap;     // log2(1/d_image) vs levelmap at log2(1/d)
    CheckEntry cross_at_distance;     // levelmap_x vs levelmap_y at log2(1/d)
    CheckEntry cross_below_distance;  // at occupied levels l < log2(1/d)
    CheckEntry cross_above_distance;  // at sampled t >= d
};

TwoPointChecks check_two_point_lemmas(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                                      const ConeMapExtension& ext,
                                      const TwoPointOptions& opts = {});

struct RayChecks {
    CheckEntry ray_rough_qi;        // additive constant at the supplied theta
    CheckEntry height_vs_distance;  // max ratio of image height at t = d to d_image
    CheckEntry cross_ray;           // rho between the two images at equal heights t >= d
    bool monotone = true;
};

/// Per-ray distortion constants over the height grid; throws
/// MonotonicityViolationError if image heights ever decrease along a ray.
RayChecks check_ray_properties(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                               const ConeMapExtension& ext, std::span<const Scalar> heights,
                               Scalar theta);

enum class RoughMode { quasi_isometry, similarity };

/// Minimal additive k for the chosen two-sided inequality over supplied
/// (rho_source, rho_image) pairs. Empty input gives 0.
Scalar fit_rough_map(std::span<const std::pair<Scalar, Scalar>> dist_pairs, RoughMode mode,
                     Scalar alpha);

struct TheoremOptions {
    std::uint64_t pair_budget = 10'000'000; // exhaustive when total pairs fit
    std::uint64_t seed = 0;
    RoughMode mode = RoughMode::quasi_isometry;
    Scalar alpha = 1;          // theta in qi mode, the similarity factor otherwise
    bool collect_pairs = false;
};

struct TheoremResult {
    Scalar k = 0;
    Scalar cobounded_radius = 0;
    Scalar slack_min = 0; // range of rho(q1,q2) - rho(q1,p1) - rho(q2,p2)
    Scalar slack_max = 0; // over all checked pairs, p_i at the common height
    std::uint64_t pairs = 0;
    bool exhaustive = true;
    Witness worst; // cone-sample indices of the k-witness pair
    std::vector<std::pair<Scalar, Scalar>> dist_pairs; // when collected
};

/// Fits the additive constant of the extension over cone-sample pairs, the
/// coboundedness radius against a matching target grid, and the splitting
/// slack through the common-height comparison points.
TheoremResult check_theorem(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                            const ConeMapExtension& ext, const ConeSample& sample,
                            const TheoremOptions& opts = {});

} // namespace hypercone
