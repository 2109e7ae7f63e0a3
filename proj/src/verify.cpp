#include "hypercone/verify.hpp"

#include "hypercone/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hypercone {

namespace {

// Stored breakpoint value at an integer knot; the knot must exist.
Scalar knot_value(const PiecewiseLinearMap& map, Scalar knot) {
    const auto it = std::lower_bound(map.knots.begin(), map.knots.end(), knot);
    return map.values[static_cast<std::size_t>(it - map.knots.begin())];
}

void raise(CheckEntry& entry, Scalar value, const Witness& w) {
    if (value > entry.constant) {
        entry.constant = value;
        entry.worst = w;
    }
}

// Deviation from the two-sided band |dl|/theta - C <= dv <= theta |dl| + C.
Scalar band_deviation(Scalar dl, Scalar dv, Scalar theta) {
    return std::max(dv - theta * dl, dl / theta - dv);
}

} // namespace

CheckEntry check_lemma_annulus(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                               const ConeMapExtension& ext) {
    CheckEntry entry;
    entry.id = "annulus_image_deviation";
    const Index n = Z.n();
    for (Index x = 0; x < n; ++x) {
        const PiecewiseLinearMap& map = ext.per_point[static_cast<std::size_t>(x)];
        for (Index y = 0; y < n; ++y) {
            if (y == x) continue;
            const int l = annulus_index(Z.d(y, x));
            const int limg = annulus_index(W.d(ext.map[y], ext.map[x]));
            const Scalar phi = knot_value(map, static_cast<Scalar>(l));
            const Scalar dev = std::abs(phi - static_cast<Scalar>(limg));
            raise(entry, dev, {x, y, static_cast<Scalar>(l), static_cast<Scalar>(limg), dev});
            ++entry.samples;
        }
    }
    return entry;
}

PhiPairBounds check_phi_pair_bounds(const ConeMapExtension& ext, Scalar theta,
                                    const PairBoundOptions& opts) {
    PhiPairBounds out;
    out.levels.id = "level_pair_distortion";
    out.reals.id = "levelmap_pair_distortion";

    SeededRng rng(opts.seed);
    for (Index x = 0; x < static_cast<Index>(ext.per_point.size()); ++x) {
        const PiecewiseLinearMap& map = ext.per_point[static_cast<std::size_t>(x)];
        const std::size_t L = map.knots.size();
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = i + 1; j < L; ++j) {
                const Scalar dl = map.knots[j] - map.knots[i];
                const Scalar dv = map.values[j] - map.values[i];
                const Scalar dev = band_deviation(dl, dv, theta);
                raise(out.levels, dev, {x, -1, map.knots[i], map.knots[j], dev});
                ++out.levels.samples;
            }

        const Scalar lo = map.knots.front() - opts.pad;
        const Scalar hi = map.knots.back() + opts.pad;
        for (std::uint64_t s = 0; s < opts.real_pairs_per_point; ++s) {
            Scalar t1 = lo + rng.unit() * (hi - lo);
            Scalar t2 = lo + rng.unit() * (hi - lo);
            if (t2 < t1) std::swap(t1, t2);
            const Scalar dv = eval_piecewise(map, t2) - eval_piecewise(map, t1);
            const Scalar dev = band_deviation(t2 - t1, dv, theta);
            raise(out.reals, dev, {x, -1, t1, t2, dev});
            ++out.reals.samples;
        }
    }
    out.levels.constant = std::max<Scalar>(0, out.levels.constant);
    out.reals.constant = std::max<Scalar>(0, out.reals.constant);
    out.reals.exhaustive = false;
    return out;
}

TwoPointChecks check_two_point_lemmas(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                                      const ConeMapExtension& ext,
                                      const TwoPointOptions& opts) {
    TwoPointChecks out;
    out.image_vs_levelmap.id = "image_distance_vs_levelmap";
    out.cross_at_distance.id = "levelmap_cross_at_distance";
    out.cross_below_distance.id = "levelmap_cross_below_distance";
    out.cross_above_distance.id = "levelmap_cross_above_distance";
    out.cross_above_distance.exhaustive = false;

    const Index n = Z.n();
    SeededRng rng(opts.seed);
    std::vector<Scalar> union_levels;
    for (Index x = 0; x < n; ++x) {
        const PiecewiseLinearMap& mx = ext.per_point[static_cast<std::size_t>(x)];
        for (Index y = 0; y < n; ++y) {
            if (y == x) continue;
            const PiecewiseLinearMap& my = ext.per_point[static_cast<std::size_t>(y)];
            const Scalar u = log2_inverse(Z.d(x, y));
            const Scalar uimg = log2_inverse(W.d(ext.map[x], ext.map[y]));
            const Scalar at_x = eval_piecewise(mx, u);

            const Scalar dev_img = std::abs(uimg - at_x);
            raise(out.image_vs_levelmap, dev_img, {x, y, u, uimg, dev_img});
            ++out.image_vs_levelmap.samples;

            if (y < x) continue; // the remaining checks are symmetric in (x,y)

            const Scalar dev_at = std::abs(at_x - eval_piecewise(my, u));
            raise(out.cross_at_distance, dev_at, {x, y, u, u, dev_at});
            ++out.cross_at_distance.samples;

            union_levels.clear();
            union_levels.insert(union_levels.end(), mx.knots.begin(), mx.knots.end());
            union_levels.insert(union_levels.end(), my.knots.begin(), my.knots.end());
            std::sort(union_levels.begin(), union_levels.end());
            union_levels.erase(std::unique(union_levels.begin(), union_levels.end()),
                               union_levels.end());
            for (Scalar l : union_levels) {
                if (!(l < u)) break;
                const Scalar dev = std::abs(eval_piecewise(mx, l) - eval_piecewise(my, l));
                raise(out.cross_below_distance, dev, {x, y, l, u, dev});
                ++out.cross_below_distance.samples;
            }

            for (std::uint64_t s = 0; s <= opts.t_samples_per_pair; ++s) {
                // s == 0 hits t = d exactly; the rest sample t in [d, 2^span d).
                const Scalar us = s == 0 ? u : u - opts.span * rng.unit();
                const Scalar dev = std::abs(eval_piecewise(mx, us) - eval_piecewise(my, us));
                raise(out.cross_above_distance, dev, {x, y, us, u, dev});
                ++out.cross_above_distance.samples;
            }
        }
    }
    return out;
}

RayChecks check_ray_properties(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                               const ConeMapExtension& ext, std::span<const Scalar> heights,
                               Scalar theta) {
    RayChecks out;
    out.ray_rough_qi.id = "ray_rough_qi";
    out.height_vs_distance.id = "ray_height_vs_image_distance";
    out.cross_ray.id = "cross_ray_bound";

    const Index n = Z.n();
    std::vector<Scalar> asc(heights.begin(), heights.end());
    std::sort(asc.begin(), asc.end());

    for (Index x = 0; x < n; ++x) {
        Scalar prev = 0;
        bool first = true;
        for (Scalar t : asc) {
            const Scalar timg = apply_extension(ext, ConePoint(x, t)).height;
            if (!first && timg < prev)
                throw MonotonicityViolationError(x, prev, timg);
            prev = timg;
            first = false;
        }
        for (std::size_t i = 0; i < asc.size(); ++i) {
            const Scalar ti = apply_extension(ext, ConePoint(x, asc[i])).height;
            for (std::size_t j = i + 1; j < asc.size(); ++j) {
                const Scalar tj = apply_extension(ext, ConePoint(x, asc[j])).height;
                const Scalar src = rho_h(0, asc[i], asc[j]);
                const Scalar img = rho_h(0, ti, tj);
                const Scalar dev = band_deviation(src, img, theta);
                raise(out.ray_rough_qi, dev, {x, -1, asc[i], asc[j], dev});
                ++out.ray_rough_qi.samples;
            }
        }
    }

    for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y) {
            if (y == x) continue;
            const Scalar d = Z.d(x, y);
            const Scalar dimg = W.d(ext.map[x], ext.map[y]);
            const Scalar timg = apply_extension(ext, ConePoint(x, d)).height;
            const Scalar ratio = std::max(timg / dimg, dimg / timg);
            raise(out.height_vs_distance, ratio, {x, y, d, timg, ratio});
            ++out.height_vs_distance.samples;

            if (y < x) continue; // rho is symmetric; scan unordered pairs
            const Scalar tyimg = apply_extension(ext, ConePoint(y, d)).height;
            Scalar rho = rho_h(dimg, timg, tyimg);
            raise(out.cross_ray, rho, {x, y, d, d, rho});
            ++out.cross_ray.samples;
            for (Scalar t : asc) {
                if (!(t >= d)) continue;
                const Scalar tx = apply_extension(ext, ConePoint(x, t)).height;
                const Scalar ty = apply_extension(ext, ConePoint(y, t)).height;
                rho = rho_h(dimg, tx, ty);
                raise(out.cross_ray, rho, {x, y, t, d, rho});
                ++out.cross_ray.samples;
            }
        }

    return out;
}

Scalar fit_rough_map(std::span<const std::pair<Scalar, Scalar>> dist_pairs, RoughMode mode,
                     Scalar alpha) {
    Scalar k = 0;
    for (const auto& [src, img] : dist_pairs) {
        const Scalar lower = mode == RoughMode::similarity ? alpha * src : src / alpha;
        k = std::max(k, std::max(img - alpha * src, lower - img));
    }
    return k;
}

TheoremResult check_theorem(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                            const ConeMapExtension& ext, const ConeSample& sample,
                            const TheoremOptions& opts) {
    const std::size_t N = sample.points.size();
    TheoremResult res;
    if (N < 2) return res;

    std::vector<Index> base(N), base_img(N);
    std::vector<Scalar> t(N), logt(N), timg(N), logtimg(N);
    for (std::size_t i = 0; i < N; ++i) {
        const ConePoint& p = sample.points[i];
        base[i] = p.base;
        t[i] = p.height;
        logt[i] = std::log(p.height);
        const ConePoint q = apply_extension(ext, p);
        base_img[i] = q.base;
        timg[i] = q.height;
        logtimg[i] = std::log(q.height);
    }

    const Scalar alpha = opts.alpha;
    bool slack_seen = false;
    auto visit = [&](std::size_t i, std::size_t j) {
        const Scalar dz = Z.d(base[i], base[j]);
        const Scalar rho = 2 * std::log(dz + std::max(t[i], t[j])) - (logt[i] + logt[j]);
        const Scalar dw = W.d(base_img[i], base_img[j]);
        const Scalar rho_img =
            2 * std::log(dw + std::max(timg[i], timg[j])) - (logtimg[i] + logtimg[j]);

        const Scalar lower = opts.mode == RoughMode::similarity ? alpha * rho : rho / alpha;
        const Scalar dev = std::max(rho_img - alpha * rho, lower - rho_img);
        if (dev > res.k) {
            res.k = dev;
            res.worst = {static_cast<Index>(i), static_cast<Index>(j), rho, rho_img, dev};
        }

        // Split through the comparison points at the common height
        // max(d, t_i, t_j); the slack stays within [0, log 4].
        const Scalar tt = std::max(dz, std::max(t[i], t[j]));
        const Scalar slack = rho - (2 * std::log(tt) - (logt[i] + logt[j]));
        if (!slack_seen || slack < res.slack_min) res.slack_min = slack;
        if (!slack_seen || slack > res.slack_max) res.slack_max = slack;
        slack_seen = true;

        if (opts.collect_pairs) res.dist_pairs.emplace_back(rho, rho_img);
        ++res.pairs;
    };

    const std::uint64_t total = static_cast<std::uint64_t>(N) * (N - 1) / 2;
    res.exhaustive = total <= opts.pair_budget;
    if (res.exhaustive) {
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j) visit(i, j);
    } else {
        SeededRng rng(opts.seed);
        while (res.pairs < opts.pair_budget) {
            std::size_t i = static_cast<std::size_t>(rng.below(N));
            std::size_t j = static_cast<std::size_t>(rng.below(N));
            if (i == j) continue;
            visit(std::min(i, j), std::max(i, j));
        }
    }
    res.k = std::max<Scalar>(0, res.k);

    // Coboundedness against a dyadic target grid spanning the image heights.
    const auto [tmin, tmax] = std::minmax_element(timg.begin(), timg.end());
    const int klo = static_cast<int>(std::floor(std::log2(*tmin)));
    const int khi = static_cast<int>(std::ceil(std::log2(*tmax)));
    for (Index w = 0; w < W.n(); ++w)
        for (int k = klo; k <= khi; ++k) {
            const Scalar h = std::ldexp(1.0, k);
            Scalar nearest = std::numeric_limits<Scalar>::infinity();
            for (std::size_t i = 0; i < N; ++i)
                nearest = std::min(nearest, rho_h(W.d(w, base_img[i]), h, timg[i]));
            res.cobounded_radius = std::max(res.cobounded_radius, nearest);
        }

    return res;
}

} // namespace hypercone
