#include "hypercone/pipeline.hpp"

#include "hypercone/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hypercone {

namespace {

using nlohmann::ordered_json;

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct GenSpec {
    SpaceKind kind;
    Index n;
    std::uint64_t seed;
    GenParams params;
};

GenSpec parse_gen_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream ss(spec);
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() < 3)
        throw ParseError("generator spec must be kind:n:seed[:dim], got " + spec);
    GenSpec g;
    g.kind = parse_space_kind(parts[0]);
    g.n = std::stoll(parts[1]);
    g.seed = std::stoull(parts[2]);
    if (parts.size() > 3) g.params.dim = std::stoi(parts[3]);
    return g;
}

ordered_json witness_json(const Witness& w) {
    ordered_json j;
    j["x"] = w.x;
    j["y"] = w.y;
    j["a"] = w.a;
    j["b"] = w.b;
    j["value"] = w.value;
    return j;
}

ordered_json check_json(const CheckEntry& e) {
    ordered_json j;
    j["id"] = e.id;
    j["constant"] = e.constant;
    j["exhaustive"] = e.exhaustive;
    j["samples"] = e.samples;
    j["witness"] = witness_json(e.worst);
    return j;
}

ordered_json space_json(const FiniteMetricSpace& S) {
    ordered_json j;
    j["hash"] = hex64(space_hash(S));
    j["n"] = S.n();
    j["diameter"] = S.diameter();
    return j;
}

} // namespace

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["space_z"] = cfg.space_z_path;
    j["space_w"] = cfg.space_w_path;
    j["map"] = cfg.map_path;
    j["gen"] = cfg.gen_spec;
    j["alpha"] = cfg.alpha;
    j["scale"] = cfg.scale;
    j["theta_min"] = cfg.theta_min;
    j["theta_max"] = cfg.theta_max;
    j["theta_step"] = cfg.theta_step;
    j["lambda_cap"] = cfg.lambda_cap;
    j["h_lo"] = cfg.h_lo;
    j["h_hi"] = cfg.h_hi;
    j["pair_budget"] = cfg.pair_budget;
    j["seed"] = cfg.seed;
    j["format"] = cfg.format;
    return j;
}

std::string config_hash_hex(const RunConfig& cfg) {
    return hex64(fnv1a64(config_json(cfg).dump()));
}

VerifyOutcome run_verify(const RunConfig& cfg) {
    if (cfg.pair_budget == 0)
        throw ParseError("verify needs a positive cone pair budget");
    if (cfg.h_lo > cfg.h_hi)
        throw ParseError("verify needs h_lo <= h_hi");

    FiniteMetricSpace Z;
    if (!cfg.gen_spec.empty()) {
        const GenSpec g = parse_gen_spec(cfg.gen_spec);
        Z = generate_space(g.kind, g.n, g.seed, g.params);
    } else if (!cfg.space_z_path.empty()) {
        Z = load_space(cfg.space_z_path);
    } else {
        throw ParseError("verify needs either a source space file or a generator spec");
    }

    FiniteMetricSpace W;
    if (!cfg.space_w_path.empty()) {
        W = load_space(cfg.space_w_path);
    } else if (cfg.alpha > 0) {
        W = snowflake_space(Z, cfg.alpha);
    } else if (cfg.scale > 0) {
        W = validate_metric(Matrix(cfg.scale * Z.dist), 1e-9, Z.labels);
    } else {
        W = Z;
    }
    const PointMap f = cfg.map_path.empty() ? identity_map(Z.n()) : load_map_json(cfg.map_path);
    validate_map(Z, W, f);

    EnvelopeOptions env_opts;
    env_opts.theta_min = cfg.theta_min;
    env_opts.theta_max = cfg.theta_max;
    env_opts.theta_step = cfg.theta_step;
    env_opts.lambda_cap = cfg.lambda_cap;
    env_opts.scan.seed = cfg.seed;
    const ThetaEnvelope env = fit_theta_envelope(Z, W, f, env_opts);

    const ConeMapExtension ext = extend_map(Z, W, f);

    std::vector<Scalar> heights;
    for (int k = cfg.h_lo; k <= cfg.h_hi; ++k) heights.push_back(std::ldexp(1.0, k));

    VerifyOutcome out;
    const CheckEntry annulus = check_lemma_annulus(Z, W, ext);

    PairBoundOptions pair_opts;
    pair_opts.seed = cfg.seed;
    const PhiPairBounds bounds = check_phi_pair_bounds(ext, env.theta, pair_opts);

    TwoPointOptions two_opts;
    two_opts.seed = cfg.seed;
    const TwoPointChecks two = check_two_point_lemmas(Z, W, ext, two_opts);

    bool monotone = true;
    Witness mono_witness;
    RayChecks ray;
    try {
        ray = check_ray_properties(Z, W, ext, heights, env.theta);
    } catch (const MonotonicityViolationError& e) {
        monotone = false;
        mono_witness = {e.x, -1, e.t1, e.t2, 0};
    }

    TheoremOptions th_opts;
    th_opts.pair_budget = cfg.pair_budget;
    th_opts.seed = cfg.seed;
    th_opts.collect_pairs = cfg.format == "csv";
    if (cfg.alpha > 0) {
        th_opts.mode = RoughMode::similarity;
        th_opts.alpha = cfg.alpha;
    } else {
        th_opts.mode = RoughMode::quasi_isometry;
        th_opts.alpha = env.theta;
    }
    const ConeSample sample = build_cone_sample(Z, cfg.h_lo, cfg.h_hi, false);
    TheoremResult theorem = check_theorem(Z, W, ext, sample, th_opts);
    out.dist_pairs = std::move(theorem.dist_pairs);

    // Hard gates; everything else is reported as fitted constants.
    const Scalar annulus_bound = 2 + env.theta + std::log2(env.lambda);
    if (!monotone) out.failed_gates.push_back("ray_monotone");
    if (!(theorem.slack_min >= -1e-9 && theorem.slack_max <= std::log(4.0) + 1e-9))
        out.failed_gates.push_back("splitting_slack");
    if (!(annulus.constant <= annulus_bound))
        out.failed_gates.push_back("annulus_bound");
    out.gates_pass = out.failed_gates.empty();

    ordered_json& rep = out.report;
    rep["config"] = config_json(cfg);
    rep["config_hash"] = config_hash_hex(cfg);
    rep["source"] = space_json(Z);
    rep["target"] = space_json(W);

    QsParams params;
    params.theta = env.theta;
    params.lambda = env.lambda;
    if (cfg.alpha > 0) {
        params.alpha = cfg.alpha;
        params.c_snow = fit_snowflake(Z, W, f, cfg.alpha).c;
    }

    ordered_json fit;
    fit["theta"] = params.theta;
    fit["lambda"] = params.lambda;
    fit["triples"] = env.fit.triples;
    fit["exhaustive"] = env.fit.exhaustive;
    if (params.alpha) {
        fit["alpha"] = *params.alpha;
        fit["c_snow"] = *params.c_snow;
    }
    ordered_json curve = ordered_json::array();
    for (const auto& [th, lam] : env.curve) curve.push_back({th, lam});
    fit["curve"] = std::move(curve);
    rep["fit"] = std::move(fit);

    ordered_json checks = ordered_json::array();
    checks.push_back(check_json(annulus));
    checks.push_back(check_json(bounds.levels));
    checks.push_back(check_json(bounds.reals));
    checks.push_back(check_json(two.image_vs_levelmap));
    checks.push_back(check_json(two.cross_at_distance));
    checks.push_back(check_json(two.cross_below_distance));
    checks.push_back(check_json(two.cross_above_distance));
    if (monotone) {
        checks.push_back(check_json(ray.ray_rough_qi));
        checks.push_back(check_json(ray.height_vs_distance));
        checks.push_back(check_json(ray.cross_ray));
    }
    rep["checks"] = std::move(checks);

    ordered_json th;
    th["mode"] = th_opts.mode == RoughMode::similarity ? "similarity" : "quasi_isometry";
    th["factor"] = th_opts.alpha;
    th["k"] = theorem.k;
    th["cobounded_radius"] = theorem.cobounded_radius;
    th["slack_min"] = theorem.slack_min;
    th["slack_max"] = theorem.slack_max;
    th["pairs"] = theorem.pairs;
    th["exhaustive"] = theorem.exhaustive;
    th["seed"] = cfg.seed;
    th["witness"] = witness_json(theorem.worst);
    rep["theorem"] = std::move(th);

    ordered_json gates;
    gates["monotone"] = monotone;
    if (!monotone) gates["monotone_witness"] = witness_json(mono_witness);
    gates["annulus_bound"] = annulus_bound;
    gates["pass"] = out.gates_pass;
    gates["failed"] = out.failed_gates;
    rep["gates"] = std::move(gates);

    return out;
}

ordered_json run_fit_qs(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                        const PointMap& f, Scalar theta_max, Scalar lambda_cap, Scalar alpha) {
    EnvelopeOptions opts;
    opts.theta_max = theta_max;
    opts.lambda_cap = lambda_cap;
    const ThetaEnvelope env = fit_theta_envelope(Z, W, f, opts);

    ordered_json j;
    j["theta"] = env.theta;
    j["lambda"] = env.lambda;
    j["triples"] = env.fit.triples;
    j["exhaustive"] = env.fit.exhaustive;
    if (alpha > 0) {
        const SnowflakeFit sf = fit_snowflake(Z, W, f, alpha);
        j["alpha"] = alpha;
        j["c_snow"] = sf.c;
    }
    ordered_json curve = ordered_json::array();
    for (const auto& [th, lam] : env.curve) curve.push_back({th, lam});
    j["curve"] = std::move(curve);
    return j;
}

std::string write_report(const RunConfig& cfg, const VerifyOutcome& outcome) {
    namespace fs = std::filesystem;
    const fs::path dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
    fs::create_directories(dir);
    const std::string hash = config_hash_hex(cfg);

    const fs::path report_path = dir / ("report-" + hash + ".json");
    if (!fs::exists(report_path)) { // reports are append-only, keyed by config
        std::ofstream out(report_path, std::ios::binary);
        out << outcome.report.dump(2) << "\n";
    }
    if (cfg.format == "csv") {
        const fs::path pairs_path = dir / ("pairs-" + hash + ".csv");
        if (!fs::exists(pairs_path)) {
            std::ofstream out(pairs_path, std::ios::binary);
            out << "rho_source,rho_image\n";
            char buf[80];
            for (const auto& [src, img] : outcome.dist_pairs) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", src, img);
                out << buf;
            }
        }
    }
    return report_path.string();
}

} // namespace hypercone
