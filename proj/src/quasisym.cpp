#include "hypercone/quasisym.hpp"

#include "hypercone/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hypercone {

PointMap identity_map(Index n) {
    PointMap f;
    f.pairing.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) f.pairing[static_cast<std::size_t>(i)] = i;
    return f;
}

PointMap invert_map(const PointMap& f) {
    PointMap inv;
    inv.pairing.assign(f.pairing.size(), -1);
    for (Index i = 0; i < f.n(); ++i)
        inv.pairing[static_cast<std::size_t>(f[i])] = i;
    return inv;
}

PointMap compose_maps(const PointMap& f, const PointMap& g) {
    PointMap out;
    out.pairing.resize(f.pairing.size());
    for (Index i = 0; i < f.n(); ++i)
        out.pairing[static_cast<std::size_t>(i)] = g[f[i]];
    return out;
}

void validate_map(const FiniteMetricSpace& source, const FiniteMetricSpace& target,
                  const PointMap& f) {
    if (f.n() != source.n() || source.n() != target.n())
        throw std::invalid_argument("point map must match both space sizes");
    std::vector<bool> seen(f.pairing.size(), false);
    for (Index i = 0; i < f.n(); ++i) {
        const Index j = f[i];
        if (j < 0 || j >= target.n() || seen[static_cast<std::size_t>(j)])
            throw std::invalid_argument("point map is not a bijection");
        seen[static_cast<std::size_t>(j)] = true;
    }
}

Scalar eta_power(Scalar theta, Scalar lambda, Scalar t) {
    if (!(theta >= 1) || !(lambda >= 1))
        throw std::domain_error("eta_power needs theta >= 1 and lambda >= 1");
    if (!(t >= 0))
        throw std::domain_error("eta_power needs t >= 0");
    return t < 1 ? lambda * std::pow(t, 1 / theta) : lambda * std::pow(t, theta);
}

namespace {

struct BatchBest {
    std::vector<Scalar> log_lambda;
    std::vector<std::uint64_t> index;
};

// One triple's contribution at each theta: log R - log r / theta when r < 1,
// log R - theta log r otherwise. Both branches decrease in theta.
inline void update_batch(BatchBest& best, std::span<const Scalar> thetas,
                         std::span<const Scalar> inv_thetas, Scalar a, Scalar b,
                         std::uint64_t idx) {
    const std::size_t K = thetas.size();
    if (a < 0) {
        for (std::size_t k = 0; k < K; ++k) {
            const Scalar cand = b - a * inv_thetas[k];
            if (cand > best.log_lambda[k]) {
                best.log_lambda[k] = cand;
                best.index[k] = idx;
            }
        }
    } else {
        for (std::size_t k = 0; k < K; ++k) {
            const Scalar cand = b - a * thetas[k];
            if (cand > best.log_lambda[k]) {
                best.log_lambda[k] = cand;
                best.index[k] = idx;
            }
        }
    }
}

} // namespace

std::vector<PowerQsFit> fit_power_qs_batch(const FiniteMetricSpace& Z,
                                           const FiniteMetricSpace& W, const PointMap& f,
                                           std::span<const Scalar> thetas,
                                           const TripleScanOptions& opts) {
    validate_map(Z, W, f);
    for (Scalar th : thetas)
        if (!(th >= 1)) throw std::domain_error("fit_power_qs needs theta >= 1");

    const Index n = Z.n();
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t total = un * un * un - 2 * un * un + un; // ordered, z != x, z != y

    const std::size_t K = thetas.size();
    std::vector<Scalar> inv_thetas(K);
    for (std::size_t k = 0; k < K; ++k) inv_thetas[k] = 1 / thetas[k];

    BatchBest best;
    best.log_lambda.assign(K, -std::numeric_limits<Scalar>::infinity());
    best.index.assign(K, 0);

    const bool exhaustive = n <= opts.exhaustive_cutoff || opts.sample_triples >= total;
    std::uint64_t triples = 0;

    auto visit = [&](Index x, Index y, Index z) {
        // log of the distance ratios; quotient first so that power-of-two
        // rescalings of either space reproduce the exact same bits.
        const Scalar a = std::log(Z.d(x, z) / Z.d(y, z));
        const Scalar b = std::log(W.d(f[x], f[z]) / W.d(f[y], f[z]));
        const std::uint64_t idx =
            (static_cast<std::uint64_t>(x) * un + static_cast<std::uint64_t>(y)) * un +
            static_cast<std::uint64_t>(z);
        update_batch(best, thetas, inv_thetas, a, b, idx);
    };

    if (exhaustive) {
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
                for (Index z = 0; z < n; ++z) {
                    if (z == x || z == y) continue;
                    visit(x, y, z);
                }
        triples = total;
    } else {
        SeededRng rng(opts.seed);
        while (triples < opts.sample_triples) {
            const Index x = static_cast<Index>(rng.below(un));
            const Index y = static_cast<Index>(rng.below(un));
            const Index z = static_cast<Index>(rng.below(un));
            if (z == x || z == y) continue;
            visit(x, y, z);
            ++triples;
        }
    }

    std::vector<PowerQsFit> fits(K);
    for (std::size_t k = 0; k < K; ++k) {
        PowerQsFit& fit = fits[k];
        fit.lambda = std::max<Scalar>(1, std::exp(best.log_lambda[k]));
        const std::uint64_t idx = best.index[k];
        fit.witness = {static_cast<Index>(idx / (un * un)),
                       static_cast<Index>((idx / un) % un),
                       static_cast<Index>(idx % un)};
        fit.exhaustive = exhaustive;
        fit.triples = triples;
    }
    return fits;
}

PowerQsFit fit_power_qs(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                        const PointMap& f, Scalar theta, const TripleScanOptions& opts) {
    const Scalar thetas[1] = {theta};
    return fit_power_qs_batch(Z, W, f, thetas, opts)[0];
}

ThetaEnvelope fit_theta_envelope(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                                 const PointMap& f, const EnvelopeOptions& opts) {
    if (!(opts.lambda_cap >= 1))
        throw std::domain_error("fit_theta_envelope needs lambda_cap >= 1");
    if (!(opts.theta_step > 0) || !(opts.theta_min >= 1) || opts.theta_max < opts.theta_min)
        throw std::domain_error("fit_theta_envelope needs a valid theta grid");
    std::vector<Scalar> grid;
    for (int i = 0;; ++i) {
        const Scalar theta = opts.theta_min + i * opts.theta_step;
        if (theta > opts.theta_max + opts.theta_step / 2) break;
        grid.push_back(std::min(theta, opts.theta_max));
    }

    const std::vector<PowerQsFit> fits = fit_power_qs_batch(Z, W, f, grid, opts.scan);

    ThetaEnvelope env;
    env.curve.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        env.curve.emplace_back(grid[k], fits[k].lambda);

    const Scalar cap = opts.lambda_cap * (1 + opts.cap_slack);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (fits[k].lambda <= cap) {
            env.theta = grid[k];
            env.lambda = fits[k].lambda;
            env.fit = fits[k];
            return env;
        }
    }
    throw NoFeasibleThetaError(fits.back().lambda);
}

SnowflakeFit fit_snowflake(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                           const PointMap& f, Scalar alpha) {
    validate_map(Z, W, f);
    if (!(alpha > 0))
        throw std::domain_error("fit_snowflake needs alpha > 0");

    SnowflakeFit fit;
    const Index n = Z.n();
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const Scalar dz = Z.d(i, j);
            const Scalar base = alpha == 1 ? dz : std::pow(dz, alpha);
            const Scalar q = W.d(f[i], f[j]) / base;
            const Scalar c = std::max(q, 1 / q);
            if (c > fit.c) {
                fit.c = c;
                fit.witness = {i, j};
            }
        }
    return fit;
}

} // namespace hypercone
