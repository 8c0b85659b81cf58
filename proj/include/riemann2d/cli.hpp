#pragma once

#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riemann2d/charts.hpp"
#include "riemann2d/csv.hpp"
#include "riemann2d/distortion.hpp"
#include "riemann2d/verify.hpp"

namespace riemann2d {

namespace detail {

struct CliOptions {
    std::string spec_path;
    int steps = 2000;
    int grid = 100;
    std::string out_path;
    std::string format = "csv";
};

inline void add_common_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--spec", opt.spec_path, "manifold spec JSON file")
        ->required();
    cmd->add_option("--steps", opt.steps,
                    "ODE step count (per unit arc length for geodesics)");
    cmd->add_option("--grid", opt.grid, "output grid size / check grid size");
    cmd->add_option("--out", opt.out_path, "output file (default: stdout)");
    cmd->add_option("--format", opt.format, "csv | json | text")
        ->check(CLI::IsMember({"csv", "json", "text"}));
}

inline void emit_table(const NumericTable& table, const CliOptions& opt,
                       std::ostream& out) {
    std::ofstream file;
    std::ostream* os = &out;
    if (!opt.out_path.empty()) {
        file.open(opt.out_path);
        if (!file) throw ConfigError("cannot open output file: " + opt.out_path);
        os = &file;
    }
    if (opt.format == "csv") table.write_csv(*os);
    else if (opt.format == "json") table.write_json(*os);
    else table.write_text(*os);
}

inline void validate_resolution(const CliOptions& opt) {
    if (opt.steps < 2 || opt.grid < 2)
        throw ConfigError("resolution values must be >= 2");
}

// (r', r_hat) rows of the length-preserving radial solve.
inline NumericTable solve_exp_table(const CliOptions& opt) {
    const MetricField m = metric_from_spec_file(opt.spec_path);
    if (!m.radial_symmetry)
        throw ConfigError(m.name + ": spec is not radially symmetric");
    const auto& rs = *m.radial_symmetry;
    double limit = std::numeric_limits<double>::infinity();
    if (!std::isfinite(rs.chart_radius_max)) limit = 4.0;
    const LengthProfile lp = solve_length_preserving(
        rs.radial_component, rs.chart_radius_max, opt.steps, limit);
    NumericTable t;
    t.headers = {"r_prime", "r_hat"};
    for (int i = 0; i <= opt.grid; ++i) {
        const double rp = lp.r_prime_end() * i / opt.grid;
        t.push({rp, lp.r_hat(rp)});
    }
    return t;
}

inline RadialProfile profile_for(const CliOptions& opt, const MetricField& m) {
    return build_radial_profile(m, opt.steps,
                                std::numeric_limits<double>::infinity());
}

// (r, r', r_hat, slip) rows of the volume-preserving radial solve.
inline NumericTable solve_distortion_table(const CliOptions& opt) {
    const MetricField m = metric_from_spec_file(opt.spec_path);
    if (!m.radial_symmetry)
        throw ConfigError(m.name + ": spec is not radially symmetric");
    const RadialProfile p = profile_for(opt, m);
    NumericTable t;
    t.headers = {"r", "r_prime", "r_hat", "slip"};
    for (int i = 0; i <= opt.grid; ++i) {
        const double r = p.r_solved() * i / opt.grid;
        t.push({r, p.r_prime(r), p.r_hat(r), i == 0 ? 1.0 : p.slip(r)});
    }
    return t;
}

// Full profile dump: r, r_prime, r_hat, slip, g.
inline NumericTable full_profile_table(const CliOptions& opt) {
    const MetricField m = metric_from_spec_file(opt.spec_path);
    if (!m.radial_symmetry)
        throw ConfigError(m.name + ": spec is not radially symmetric");
    const RadialProfile p = profile_for(opt, m);
    NumericTable t;
    t.headers = {"r", "r_prime", "r_hat", "slip", "g"};
    for (int i = 0; i <= opt.grid; ++i) {
        const double r = p.r_solved() * i / opt.grid;
        const double rp = p.r_prime(r);
        t.push({r, rp, p.r_hat(r), i == 0 ? 1.0 : p.slip(r),
                p.g_of_r_prime(rp)});
    }
    return t;
}

} // namespace detail

// Runs the command line. Exit codes: 0 success, 1 verification check
// failures, 2 configuration or spec errors.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    CLI::App app{"numerical radial geometry of 2D Riemannian charts"};
    app.require_subcommand(1);

    detail::CliOptions exp_opt, dist_opt, verify_opt, table_opt;
    CLI::App* cmd_exp = app.add_subcommand(
        "solve-exp", "radially length-preserving map r' -> r_hat");
    detail::add_common_flags(cmd_exp, exp_opt);
    CLI::App* cmd_dist = app.add_subcommand(
        "solve-distortion", "radially volume-preserving map r -> (r', r_hat, slip)");
    detail::add_common_flags(cmd_dist, dist_opt);
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "run the identity-check suite");
    detail::add_common_flags(cmd_verify, verify_opt);
    CLI::App* cmd_table =
        app.add_subcommand("table", "full radial profile dump (r, r', r_hat, slip, g)");
    detail::add_common_flags(cmd_table, table_opt);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_exp->parsed()) {
            detail::validate_resolution(exp_opt);
            detail::emit_table(detail::solve_exp_table(exp_opt), exp_opt, out);
            return 0;
        }
        if (cmd_dist->parsed()) {
            detail::validate_resolution(dist_opt);
            detail::emit_table(detail::solve_distortion_table(dist_opt), dist_opt,
                               out);
            return 0;
        }
        if (cmd_table->parsed()) {
            detail::validate_resolution(table_opt);
            detail::emit_table(detail::full_profile_table(table_opt), table_opt,
                               out);
            return 0;
        }
        if (cmd_verify->parsed()) {
            detail::validate_resolution(verify_opt);
            const MetricField m = metric_from_spec_file(verify_opt.spec_path);
            Resolution res;
            res.steps = verify_opt.steps;
            res.grid = verify_opt.grid;
            const VerificationReport report = run_suite(m, res);

            std::ofstream file;
            std::ostream* os = &out;
            if (!verify_opt.out_path.empty()) {
                file.open(verify_opt.out_path);
                if (!file)
                    throw ConfigError("cannot open output file: " +
                                      verify_opt.out_path);
                os = &file;
            }
            if (verify_opt.format == "json") write_report_json(*os, report);
            else if (verify_opt.format == "text") write_report_text(*os, report);
            else write_report_csv(*os, report);
            return report.passed_all() ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace riemann2d
