#include "hypercone/metric_space.hpp"

#include "hypercone/parallel.hpp"
#include "hypercone/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <vector>

namespace hypercone {

FiniteMetricSpace validate_metric(const Matrix& matrix, Scalar tol,
                                  std::vector<std::string> labels) {
    const Index n = matrix.rows();
    if (n < 1 || matrix.cols() != n)
        throw std::invalid_argument("distance matrix must be square and nonempty");
    if (n < 3)
        throw TooFewPointsError(n);
    if (!labels.empty() && static_cast<Index>(labels.size()) != n)
        throw std::invalid_argument("label count does not match matrix size");

    const Scalar scale = matrix.cwiseAbs().maxCoeff();
    for (Index i = 0; i < n; ++i) {
        if (std::abs(matrix(i, i)) > tol * scale)
            throw NonPositiveError(i, i);
        for (Index j = 0; j < n; ++j) {
            if (i != j && !(matrix(i, j) > 0))
                throw NonPositiveError(i, j);
        }
    }
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const Scalar a = matrix(i, j), b = matrix(j, i);
            if (std::abs(a - b) > tol * std::max(a, b))
                throw AsymmetryError(i, j);
        }
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            for (Index k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const Scalar direct = matrix(i, k);
                const Scalar via = matrix(i, j) + matrix(j, k);
                if (direct > via + tol * std::max(direct, via))
                    throw TriangleError(i, j, k);
            }
        }

    FiniteMetricSpace S;
    S.labels = std::move(labels);
    S.dist = matrix;
    return S;
}

Scalar gromov_product(const FiniteMetricSpace& S, Index x, Index y, Index o) {
    const Index n = S.n();
    if (x < 0 || x >= n || y < 0 || y >= n || o < 0 || o >= n)
        throw std::out_of_range("gromov_product: point index out of range");
    return (S.d(x, o) + S.d(y, o) - S.d(x, y)) / 2;
}

namespace {

// Exhaustive max over ordered quadruples, partitioned by basepoint.
Scalar delta_exhaustive(const Matrix& D) {
    const Index n = D.rows();
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    std::vector<Scalar> chunk_max(static_cast<std::size_t>(worker_count()), 0);

    parallel_chunks(un, [&](int chunk, std::uint64_t ob, std::uint64_t oe) {
        std::vector<Scalar> g(un * un);
        Scalar best = 0;
        for (std::uint64_t o = ob; o < oe; ++o) {
            for (std::uint64_t i = 0; i < un; ++i)
                for (std::uint64_t j = 0; j < un; ++j)
                    g[i * un + j] = (D(static_cast<Index>(i), static_cast<Index>(o)) +
                                     D(static_cast<Index>(j), static_cast<Index>(o)) -
                                     D(static_cast<Index>(i), static_cast<Index>(j))) / 2;
            for (std::uint64_t x = 0; x < un; ++x) {
                const Scalar* gx = g.data() + x * un;
                for (std::uint64_t z = 0; z < un; ++z) {
                    const Scalar gxz = gx[z];
                    const Scalar* gz = g.data() + z * un;
                    for (std::uint64_t y = 0; y < un; ++y) {
                        const Scalar v = std::min(gxz, gz[y]) - gx[y];
                        if (v > best) best = v;
                    }
                }
            }
        }
        chunk_max[static_cast<std::size_t>(chunk)] =
            std::max(chunk_max[static_cast<std::size_t>(chunk)], best);
    });

    Scalar best = 0;
    for (Scalar v : chunk_max) best = std::max(best, v);
    return best;
}

Scalar delta_sampled(const Matrix& D, std::uint64_t samples, std::uint64_t seed) {
    const std::uint64_t n = static_cast<std::uint64_t>(D.rows());
    SeededRng rng(seed);
    Scalar best = 0;
    for (std::uint64_t q = 0; q < samples; ++q) {
        const Index x = static_cast<Index>(rng.below(n));
        const Index y = static_cast<Index>(rng.below(n));
        const Index z = static_cast<Index>(rng.below(n));
        const Index o = static_cast<Index>(rng.below(n));
        const Scalar xy = (D(x, o) + D(y, o) - D(x, y)) / 2;
        const Scalar xz = (D(x, o) + D(z, o) - D(x, z)) / 2;
        const Scalar zy = (D(z, o) + D(y, o) - D(z, y)) / 2;
        const Scalar v = std::min(xz, zy) - xy;
        if (v > best) best = v;
    }
    return best;
}

} // namespace

DeltaEstimate delta_hyperbolicity(const Matrix& dist, const DeltaOptions& opts) {
    const Index n = dist.rows();
    if (n < 1 || dist.cols() != n)
        throw std::invalid_argument("delta_hyperbolicity: matrix must be square");

    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t total = un * un * un * un;

    DeltaEstimate est;
    if (n <= opts.exhaustive_cutoff || opts.sample_quadruples >= total) {
        est.delta = std::max<Scalar>(0, delta_exhaustive(dist));
        est.exhaustive = true;
        est.quadruples = total;
    } else {
        est.delta = std::max<Scalar>(0, delta_sampled(dist, opts.sample_quadruples, opts.seed));
        est.exhaustive = false;
        est.quadruples = opts.sample_quadruples;
    }
    return est;
}

DeltaEstimate delta_hyperbolicity(const FiniteMetricSpace& S, const DeltaOptions& opts) {
    return delta_hyperbolicity(S.dist, opts);
}

FiniteMetricSpace snowflake_space(const FiniteMetricSpace& S, Scalar alpha) {
    if (!(alpha > 0) || alpha > 1)
        throw AlphaOutOfRangeError(alpha);
    if (alpha == 1)
        return validate_metric(S.dist, 1e-9, S.labels);

    const Index n = S.n();
    Matrix out(n, n);
    for (Index i = 0; i < n; ++i) {
        out(i, i) = 0;
        for (Index j = 0; j < n; ++j)
            if (j != i) out(i, j) = std::pow(S.d(i, j), alpha);
    }
    return validate_metric(out, 1e-9, S.labels);
}

namespace {

std::vector<std::string> index_labels(Index n) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    // non-numeric so a CSV header row stays distinguishable from data
    for (Index i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    return labels;
}

Matrix gen_euclidean_cloud(Index n, std::uint64_t seed, int dim) {
    if (dim < 1) throw std::invalid_argument("euclidean_cloud needs dim >= 1");
    SeededRng rng(seed);
    std::vector<std::vector<Scalar>> pts(static_cast<std::size_t>(n),
                                         std::vector<Scalar>(static_cast<std::size_t>(dim)));
    for (auto& p : pts)
        for (auto& c : p) c = rng.unit();
    Matrix D(n, n);
    for (Index i = 0; i < n; ++i) {
        D(i, i) = 0;
        for (Index j = i + 1; j < n; ++j) {
            Scalar s = 0;
            for (int k = 0; k < dim; ++k) {
                const Scalar d = pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -
                                 pts[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                s += d * d;
            }
            D(i, j) = D(j, i) = std::sqrt(s);
        }
    }
    return D;
}

// Random tree with dyadic edge weights (k/4, k in 2..8); path sums stay exact
// in doubles, so the four-point scan of a tree comes out at exactly zero.
Matrix gen_tree_metric(Index n, std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<Index> parent(static_cast<std::size_t>(n), -1);
    std::vector<Scalar> up(static_cast<std::size_t>(n), 0);
    for (Index i = 1; i < n; ++i) {
        parent[static_cast<std::size_t>(i)] = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i)));
        up[static_cast<std::size_t>(i)] = static_cast<Scalar>(2 + rng.below(7)) / 4;
    }
    std::vector<Scalar> depth(static_cast<std::size_t>(n), 0);
    for (Index i = 1; i < n; ++i)
        depth[static_cast<std::size_t>(i)] =
            depth[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])] +
            up[static_cast<std::size_t>(i)];

    std::vector<Index> anc_mark(static_cast<std::size_t>(n), -1);
    Matrix D(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index a = i; a != -1; a = parent[static_cast<std::size_t>(a)])
            anc_mark[static_cast<std::size_t>(a)] = i;
        D(i, i) = 0;
        for (Index j = i + 1; j < n; ++j) {
            Index lca = j;
            while (anc_mark[static_cast<std::size_t>(lca)] != i)
                lca = parent[static_cast<std::size_t>(lca)];
            D(i, j) = D(j, i) = depth[static_cast<std::size_t>(i)] +
                                depth[static_cast<std::size_t>(j)] -
                                2 * depth[static_cast<std::size_t>(lca)];
        }
    }
    return D;
}

Matrix gen_circle(Index n, Scalar circumference) {
    if (!(circumference > 0)) throw std::invalid_argument("circle needs circumference > 0");
    Matrix D(n, n);
    for (Index i = 0; i < n; ++i) {
        D(i, i) = 0;
        for (Index j = i + 1; j < n; ++j) {
            const Index steps = std::min(j - i, n - (j - i));
            D(i, j) = D(j, i) = static_cast<Scalar>(steps) * circumference / static_cast<Scalar>(n);
        }
    }
    return D;
}

Matrix gen_grid(Index n) {
    const Index cols = static_cast<Index>(std::ceil(std::sqrt(static_cast<Scalar>(n))));
    Matrix D(n, n);
    for (Index i = 0; i < n; ++i) {
        const Scalar xi = static_cast<Scalar>(i % cols), yi = static_cast<Scalar>(i / cols);
        D(i, i) = 0;
        for (Index j = i + 1; j < n; ++j) {
            const Scalar xj = static_cast<Scalar>(j % cols), yj = static_cast<Scalar>(j / cols);
            D(i, j) = D(j, i) = std::hypot(xi - xj, yi - yj);
        }
    }
    return D;
}

} // namespace

FiniteMetricSpace generate_space(SpaceKind kind, Index n, std::uint64_t seed,
                                 const GenParams& params) {
    if (n < 3)
        throw TooFewPointsError(n);
    Matrix D;
    switch (kind) {
    case SpaceKind::euclidean_cloud: D = gen_euclidean_cloud(n, seed, params.dim); break;
    case SpaceKind::tree_metric: D = gen_tree_metric(n, seed); break;
    case SpaceKind::circle: D = gen_circle(n, params.circumference); break;
    case SpaceKind::grid: D = gen_grid(n); break;
    }
    return validate_metric(D, 1e-9, index_labels(n));
}

SpaceKind parse_space_kind(const std::string& name) {
    if (name == "euclidean_cloud") return SpaceKind::euclidean_cloud;
    if (name == "tree_metric") return SpaceKind::tree_metric;
    if (name == "circle") return SpaceKind::circle;
    if (name == "grid") return SpaceKind::grid;
    throw std::invalid_argument("unknown space kind: " + name);
}

std::string to_string(SpaceKind kind) {
    switch (kind) {
    case SpaceKind::euclidean_cloud: return "euclidean_cloud";
    case SpaceKind::tree_metric: return "tree_metric";
    case SpaceKind::circle: return "circle";
    case SpaceKind::grid: return "grid";
    }
    return "?";
}

std::uint64_t space_hash(const FiniteMetricSpace& S) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* bytes, std::size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(bytes);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x00000100000001b3ULL;
        }
    };
    const std::uint64_t n = static_cast<std::uint64_t>(S.n());
    mix(&n, sizeof n);
    for (const auto& label : S.labels) mix(label.data(), label.size());
    mix(S.dist.data(), sizeof(Scalar) * static_cast<std::size_t>(S.dist.size()));
    return h;
}

} // namespace hypercone
