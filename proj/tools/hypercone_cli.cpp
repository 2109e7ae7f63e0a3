// Command-line front end: validate distance matrices, fit quasi-symmetry
// parameters, and run the full cone-extension verification pipeline.
//
// Exit codes: 0 ok, 2 metric violation, 3 parse/file error,
//             4 no feasible theta under the lambda cap, 5 gate failure.

#include "hypercone/io.hpp"
#include "hypercone/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace hypercone;

int cmd_validate(const std::string& path, double tol) {
    try {
        const FiniteMetricSpace S = load_space(path, tol);
        std::printf("ok: %lld points, diameter %.17g\n",
                    static_cast<long long>(S.n()), S.diameter());
        return 0;
    } catch (const MetricError& e) {
        std::printf("metric violation: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::printf("parse error: %s\n", e.what());
        return 3;
    }
}

int cmd_fit_qs(const std::string& zpath, const std::string& wpath, const std::string& mpath,
               double theta_max, double lambda_cap, double alpha, const std::string& out) {
    FiniteMetricSpace Z, W;
    PointMap f;
    try {
        Z = load_space(zpath);
        W = load_space(wpath);
        f = mpath.empty() ? identity_map(Z.n()) : load_map_json(mpath);
        validate_map(Z, W, f);
    } catch (const MetricError& e) {
        std::printf("metric violation: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::printf("parse error: %s\n", e.what());
        return 3;
    }
    try {
        const auto fragment = run_fit_qs(Z, W, f, theta_max, lambda_cap, alpha);
        const std::string text = fragment.dump(2);
        if (out.empty()) {
            std::printf("%s\n", text.c_str());
        } else {
            std::FILE* fp = std::fopen(out.c_str(), "wb");
            if (!fp) {
                std::printf("cannot write %s\n", out.c_str());
                return 3;
            }
            std::fprintf(fp, "%s\n", text.c_str());
            std::fclose(fp);
        }
        return 0;
    } catch (const NoFeasibleThetaError& e) {
        std::printf("no feasible theta: lambda stays at %.17g at the grid maximum\n",
                    e.lambda_at_max);
        return 4;
    }
}

int cmd_verify(const RunConfig& cfg) {
    try {
        const VerifyOutcome outcome = run_verify(cfg);
        const std::string path = write_report(cfg, outcome);
        std::printf("report: %s\n", path.c_str());
        if (!outcome.gates_pass) {
            for (const auto& gate : outcome.failed_gates)
                std::printf("gate failed: %s\n", gate.c_str());
            return 5;
        }
        return 0;
    } catch (const NoFeasibleThetaError& e) {
        std::printf("no feasible theta: lambda stays at %.17g at the grid maximum\n",
                    e.lambda_at_max);
        return 4;
    } catch (const MetricError& e) {
        std::printf("metric violation: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::printf("parse error: %s\n", e.what());
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic cone extension toolkit"};
    app.require_subcommand(1);

    // validate
    std::string v_path;
    double v_tol = 1e-9;
    auto* validate = app.add_subcommand("validate", "check a distance matrix file");
    validate->add_option("path", v_path, "CSV or JSON distance matrix")->required();
    validate->add_option("--tol", v_tol, "relative validation tolerance");

    // fit-qs
    std::string f_z, f_w, f_map, f_out;
    double f_theta_max = 8, f_cap = 1.5, f_alpha = 0;
    auto* fitqs = app.add_subcommand("fit-qs", "fit power quasi-symmetry parameters");
    fitqs->add_option("--space-z", f_z, "source space file")->required();
    fitqs->add_option("--space-w", f_w, "target space file")->required();
    fitqs->add_option("--map", f_map, "pairing JSON (identity when omitted)");
    fitqs->add_option("--theta-max", f_theta_max, "theta grid maximum");
    fitqs->add_option("--lambda-cap", f_cap, "lambda cap for the envelope");
    fitqs->add_option("--alpha", f_alpha, "also fit the snowflake constant at this exponent");
    fitqs->add_option("--out", f_out, "write the JSON fragment here instead of stdout");

    // verify
    hypercone::RunConfig cfg;
    std::string heights = "-10:10";
    auto* verify = app.add_subcommand("verify", "run the full verification pipeline");
    verify->add_option("--space-z", cfg.space_z_path, "source space file");
    verify->add_option("--space-w", cfg.space_w_path, "target space file");
    verify->add_option("--map", cfg.map_path, "pairing JSON");
    verify->add_option("--gen", cfg.gen_spec, "generate the source: kind:n:seed[:dim]");
    verify->add_option("--alpha", cfg.alpha, "snowflake target exponent (identity pairing)");
    verify->add_option("--scale", cfg.scale, "uniform-scaling target factor");
    verify->add_option("--theta-max", cfg.theta_max, "theta grid maximum");
    verify->add_option("--lambda-cap", cfg.lambda_cap, "lambda cap for the envelope");
    verify->add_option("--heights", heights, "height grid exponents LO:HI");
    verify->add_option("--pairs", cfg.pair_budget, "cone pair budget");
    verify->add_option("--seed", cfg.seed, "sampling seed");
    verify->add_option("--out", cfg.out_dir, "report directory")->required();
    verify->add_option("--format", cfg.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    if (validate->parsed())
        return cmd_validate(v_path, v_tol);
    if (fitqs->parsed())
        return cmd_fit_qs(f_z, f_w, f_map, f_theta_max, f_cap, f_alpha, f_out);

    const auto colon = heights.find(':');
    if (colon == std::string::npos) {
        std::printf("parse error: --heights wants LO:HI\n");
        return 3;
    }
    try {
        cfg.h_lo = std::stoi(heights.substr(0, colon));
        cfg.h_hi = std::stoi(heights.substr(colon + 1));
    } catch (const std::exception&) {
        std::printf("parse error: --heights wants LO:HI\n");
        return 3;
    }
    return cmd_verify(cfg);
}
