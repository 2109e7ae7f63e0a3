#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypercone {

using Scalar = double;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A validated finite metric space: opaque point labels plus a symmetric
/// distance matrix with zero diagonal and positive off-diagonal entries.
struct FiniteMetricSpace {
    std::vector<std::string> labels;
    Matrix dist;

    Index n() const { return dist.rows(); }
    Scalar d(Index i, Index j) const { return dist(i, j); }
    Scalar diameter() const { return dist.maxCoeff(); }
};

// --- validation errors ---------------------------------------------------

class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TooFewPointsError : public MetricError {
public:
    Index n;
    explicit TooFewPointsError(Index n_)
        : MetricError("metric space needs at least 3 points, got " + std::to_string(n_)), n(n_) {}
};

class NonPositiveError : public MetricError {
public:
    Index i, j;
    NonPositiveError(Index i_, Index j_)
        : MetricError("entry (" + std::to_string(i_) + "," + std::to_string(j_) +
                      ") violates positivity/zero-diagonal"),
          i(i_), j(j_) {}
};

class AsymmetryError : public MetricError {
public:
    Index i, j;
    AsymmetryError(Index i_, Index j_)
        : MetricError("dist(" + std::to_string(i_) + "," + std::to_string(j_) + ") != dist(" +
                      std::to_string(j_) + "," + std::to_string(i_) + ")"),
          i(i_), j(j_) {}
};

/// Witness (i,j,k) means d(i,k) > d(i,j) + d(j,k) beyond tolerance.
class TriangleError : public MetricError {
public:
    Index i, j, k;
    TriangleError(Index i_, Index j_, Index k_)
        : MetricError("triangle inequality fails for (" + std::to_string(i_) + "," +
                      std::to_string(j_) + "," + std::to_string(k_) + ")"),
          i(i_), j(j_), k(k_) {}
};

class AlphaOutOfRangeError : public std::domain_error {
public:
    Scalar alpha;
    explicit AlphaOutOfRangeError(Scalar a)
        : std::domain_error("snowflake exponent must lie in (0,1], got " + std::to_string(a)),
          alpha(a) {}
};

// --- operations -----------------------------------------------------------

/// Checks symmetry, zero diagonal, positivity and the triangle inequality
/// (with relative slack tol) and wraps the matrix into a space.
FiniteMetricSpace validate_metric(const Matrix& matrix, Scalar tol = 1e-9,
                                  std::vector<std::string> labels = {});

/// (x|y)_o = (d(x,o) + d(y,o) - d(x,y)) / 2.
Scalar gromov_product(const FiniteMetricSpace& S, Index x, Index y, Index o);

struct DeltaOptions {
    Index exhaustive_cutoff = 60;          // full O(n^4) scan up to this size
    std::uint64_t sample_quadruples = 2'000'000;
    std::uint64_t seed = 0;
};

struct DeltaEstimate {
    Scalar delta = 0;
    bool exhaustive = true;                // false => lower estimate from sampling
    std::uint64_t quadruples = 0;
};

/// Smallest delta such that (x|y)_o >= min((x|z)_o, (z|y)_o) - delta over all
/// ordered quadruples (repeats allowed). Sampled above the cutoff.
DeltaEstimate delta_hyperbolicity(const Matrix& dist, const DeltaOptions& opts = {});
DeltaEstimate delta_hyperbolicity(const FiniteMetricSpace& S, const DeltaOptions& opts = {});

/// Entrywise d^alpha for alpha in (0,1]; result is revalidated.
FiniteMetricSpace snowflake_space(const FiniteMetricSpace& S, Scalar alpha);

enum class SpaceKind { euclidean_cloud, tree_metric, circle, grid };

struct GenParams {
    int dim = 2;                // euclidean_cloud
    Scalar circumference = 1.0; // circle
};

/// Deterministic generator for the test corpus; output passes validate_metric.
FiniteMetricSpace generate_space(SpaceKind kind, Index n, std::uint64_t seed,
                                 const GenParams& params = {});

SpaceKind parse_space_kind(const std::string& name);
std::string to_string(SpaceKind kind);

/// FNV-1a over point count, labels and the raw distance bits.
std::uint64_t space_hash(const FiniteMetricSpace& S);

} // namespace hypercone
