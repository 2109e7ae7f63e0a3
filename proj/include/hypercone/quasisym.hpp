#pragma once

#include "hypercone/metric_space.hpp"

#include <array>
#include <optional>
#include <span>
#include <utility>

namespace hypercone {

/// Bijection between two equally sized point sets; pairing[i] is the target
/// index of source point i.
struct PointMap {
    std::vector<Index> pairing;

    Index n() const { return static_cast<Index>(pairing.size()); }
    Index operator[](Index i) const { return pairing[static_cast<std::size_t>(i)]; }
};

PointMap identity_map(Index n);
PointMap invert_map(const PointMap& f);

/// x -> g[f[x]].
PointMap compose_maps(const PointMap& f, const PointMap& g);

/// Throws std::invalid_argument unless f is a bijection matching both sizes.
void validate_map(const FiniteMetricSpace& source, const FiniteMetricSpace& target,
                  const PointMap& f);

/// Fitted control parameters of a map.
struct QsParams {
    Scalar theta = 1;
    Scalar lambda = 1;
    std::optional<Scalar> alpha;  // snowflake exponent, when fitted
    std::optional<Scalar> c_snow; // snowflake constant, when fitted
};

/// Two-branch power gauge: lambda * t^(1/theta) below 1, lambda * t^theta above.
Scalar eta_power(Scalar theta, Scalar lambda, Scalar t);

struct TripleScanOptions {
    Index exhaustive_cutoff = 150; // full O(n^3) scan up to this size
    std::uint64_t sample_triples = 2'000'000;
    std::uint64_t seed = 0;
};

struct PowerQsFit {
    Scalar lambda = 1;                 // max(lambda*, 1)
    std::array<Index, 3> witness{0, 0, 0}; // argmax triple (x, y, z)
    bool exhaustive = true;
    std::uint64_t triples = 0;
};

/// Smallest lambda such that the distance-ratio bound with gauge eta_{theta,lambda}
/// holds over all ordered triples (x,y,z) with z != x and z != y.
PowerQsFit fit_power_qs(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                        const PointMap& f, Scalar theta, const TripleScanOptions& opts = {});

/// Same scan evaluated for several theta values at once.
std::vector<PowerQsFit> fit_power_qs_batch(const FiniteMetricSpace& Z,
                                           const FiniteMetricSpace& W, const PointMap& f,
                                           std::span<const Scalar> thetas,
                                           const TripleScanOptions& opts = {});

class NoFeasibleThetaError : public std::runtime_error {
public:
    Scalar lambda_at_max;
    explicit NoFeasibleThetaError(Scalar lam)
        : std::runtime_error("no theta on the grid fits under the lambda cap"),
          lambda_at_max(lam) {}
};

struct EnvelopeOptions {
    Scalar theta_min = 1;
    Scalar theta_max = 8;
    Scalar theta_step = 0.05;
    Scalar lambda_cap = 1.5;
    Scalar cap_slack = 1e-9; // relative slack absorbing round-off in lambda*
    TripleScanOptions scan;
};

struct ThetaEnvelope {
    Scalar theta = 1;
    Scalar lambda = 1;
    PowerQsFit fit;                                // fit at the selected theta
    std::vector<std::pair<Scalar, Scalar>> curve;  // (theta, lambda*) on the grid
};

/// Smallest grid theta whose lambda* stays under the cap; throws
/// NoFeasibleThetaError when even theta_max does not fit.
ThetaEnvelope fit_theta_envelope(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                                 const PointMap& f, const EnvelopeOptions& opts = {});

struct SnowflakeFit {
    Scalar c = 1;
    std::array<Index, 2> witness{0, 0};
};

/// Smallest C with C^-1 d^alpha <= d_image <= C d^alpha over all pairs.
SnowflakeFit fit_snowflake(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                           const PointMap& f, Scalar alpha);

} // namespace hypercone
