#pragma once

#include "hypercone/verify.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hypercone {

/// One full verification run: inputs, fitting knobs, sampling budgets.
struct RunConfig {
    std::string space_z_path;
    std::string space_w_path;
    std::string map_path;
    std::string gen_spec;   // "kind:n:seed[:dim]" when generating the source
    Scalar alpha = 0;       // > 0 => target is the alpha-snowflake of the source
    Scalar scale = 0;       // > 0 => target is scale * source
    Scalar theta_min = 1;
    Scalar theta_max = 8;
    Scalar theta_step = 0.05;
    Scalar lambda_cap = 1.5;
    int h_lo = -10;
    int h_hi = 10;
    std::uint64_t pair_budget = 10'000'000;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string format = "json"; // "json" or "csv" (csv adds the pair dump)
};

nlohmann::ordered_json config_json(const RunConfig& cfg);
std::string config_hash_hex(const RunConfig& cfg);

struct VerifyOutcome {
    nlohmann::ordered_json report;
    bool gates_pass = true;
    std::vector<std::string> failed_gates;
    std::vector<std::pair<Scalar, Scalar>> dist_pairs;
};

/// Resolve inputs (files or generator), fit, extend, run every check, collect
/// the report. Deterministic for a fixed config.
VerifyOutcome run_verify(const RunConfig& cfg);

/// Fit-only fragment: the theta envelope and snowflake constant when alpha set.
nlohmann::ordered_json run_fit_qs(const FiniteMetricSpace& Z, const FiniteMetricSpace& W,
                                  const PointMap& f, Scalar theta_max, Scalar lambda_cap,
                                  Scalar alpha = 0);

/// Writes report-<hash>.json (and pairs-<hash>.csv for csv format) into
/// cfg.out_dir; existing files are left untouched. Returns the report path.
std::string write_report(const RunConfig& cfg, const VerifyOutcome& outcome);

} // namespace hypercone
