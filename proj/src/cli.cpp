#include "kcsp/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kcsp/boolean.hpp"
#include "kcsp/driver.hpp"
#include "kcsp/gauss.hpp"
#include "kcsp/instance.hpp"
#include "kcsp/linalg.hpp"
#include "kcsp/rounding.hpp"
#include "kcsp/sdp.hpp"
#include "kcsp/verify.hpp"

namespace kcsp {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

// write-then-rename so readers never observe a partial file
void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file_atomic(path, content);
}

std::string probes_to_csv(const std::vector<ProbeResult>& probes,
                          const std::vector<ClauseStats>& stats) {
    std::ostringstream out;
    out << "clause,length,r,z_norm_sq,trials,successes,p_hat,std_err,bound,claimed,margin,pass\n";
    char buf[256];
    for (const auto& p : probes) {
        const auto& cs = stats[static_cast<std::size_t>(p.clause_id)];
        const double margin = p.p_hat + 3.0 * p.std_err - p.bound;
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%lld,%lld,%.17g,%.17g,%.17g,%d,%.17g,%d\n",
                      p.clause_id, cs.length, cs.r, cs.z_norm_sq, p.trials, p.successes, p.p_hat,
                      p.std_err, p.bound, p.bound_claimed ? 1 : 0, margin, p.pass ? 1 : 0);
        out << buf;
    }
    return out.str();
}

json probes_to_json(const std::vector<ProbeResult>& probes,
                    const std::vector<ClauseStats>& stats) {
    json arr = json::array();
    for (const auto& p : probes) {
        const auto& cs = stats[static_cast<std::size_t>(p.clause_id)];
        arr.push_back({{"clause", p.clause_id},
                       {"length", cs.length},
                       {"r", cs.r},
                       {"z_norm_sq", cs.z_norm_sq},
                       {"trials", p.trials},
                       {"successes", p.successes},
                       {"p_hat", p.p_hat},
                       {"std_err", p.std_err},
                       {"bound", p.bound},
                       {"claimed", p.bound_claimed},
                       {"margin", p.p_hat + 3.0 * p.std_err - p.bound},
                       {"pass", p.pass}});
    }
    return arr;
}

SdpSolution obtain_solution(const Instance& inst, const std::string& sdp_in, std::uint64_t seed) {
    if (!sdp_in.empty()) return read_solution_file(sdp_in);
    SolverConfig cfg;
    cfg.seed = mix64(seed ^ 0x5D9);
    return solve_sdp(inst, cfg).solution;
}

int cmd_gen(int n, int d, int k, int m, std::uint64_t seed, const std::string& out_path) {
    Rng rng = Rng(seed).substream(0x9E4, 0);
    const Instance inst = generate_random_instance(n, d, k, m, rng);
    std::ostringstream text;
    text << "# generated: n=" << n << " d=" << d << " k=" << k << " m=" << m << " seed=" << seed
         << "\n"
         << serialize_instance(inst);
    emit(out_path, text.str());
    return kExitOk;
}

int cmd_solve(const std::string& instance_path, std::uint64_t seed, long long max_rounds,
              double tol, const std::string& report_path, const std::string& dump_sdp,
              bool boolean_mode) {
    std::vector<std::string> warnings;
    const Instance inst = parse_instance_file(instance_path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    DriverConfig cfg;
    cfg.seed = seed;
    cfg.max_rounds = max_rounds;
    cfg.sdp.tol = tol;

    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    if (boolean_mode) {
        rep = boolean_solve(inst, cfg);
    } else {
        if (!dump_sdp.empty()) {
            SolverConfig scfg = cfg.sdp;
            scfg.seed = mix64(seed ^ 0x5D9);
            const SolveSdpResult sdp = solve_sdp(inst, scfg);
            write_solution_file(dump_sdp, sdp.solution);
            rep = solve_with_solution(inst, sdp.solution, cfg);
            rep.solver_converged = sdp.converged;
            rep.max_residual = sdp.report.max_residual();
        } else {
            rep = solve(inst, cfg);
        }
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::cout << "best_value " << rep.best_value << "\n"
              << "sdp_objective " << rep.sdp_objective << "\n"
              << "iterations " << rep.iterations_run << "\n"
              << "alpha " << rep.alpha << (rep.alpha_claimed ? "" : " (not claimed for this d)")
              << "\n";
    if (boolean_mode) std::cout << "beta0 " << rep.beta0 << "\nalpha0 " << rep.alpha0 << "\n";

    if (!report_path.empty()) {
        json j{{"instance", instance_path},
               {"seed", seed},
               {"max_rounds", max_rounds},
               {"tol", tol},
               {"boolean", boolean_mode},
               {"best_value", rep.best_value},
               {"sdp_objective", rep.sdp_objective},
               {"iterations_run", rep.iterations_run},
               {"alpha", rep.alpha},
               {"alpha_claimed", rep.alpha_claimed},
               {"assignment", rep.best_assignment.values},
               {"per_iteration_values", rep.per_iteration_values},
               {"solver_converged", rep.solver_converged},
               {"max_residual", rep.max_residual},
               {"wall_time_s", wall}};
        if (boolean_mode) {
            j["beta0"] = rep.beta0;
            j["alpha0"] = rep.alpha0;
        }
        write_file_atomic(report_path, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_probe(const std::string& instance_path, const std::string& scheme_str, long long trials,
              std::uint64_t seed, const std::string& sdp_in, const std::string& out_path,
              const std::string& format, double p_mix, bool fail_on_nonpass) {
    std::vector<std::string> warnings;
    const Instance inst = parse_instance_file(instance_path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    const Scheme scheme = scheme_from_name(scheme_str);
    const SdpSolution sol = obtain_solution(inst, sdp_in, seed);

    const std::vector<ProbeResult> probes = probe_all_clauses(inst, sol, scheme, trials, seed, p_mix);
    const RoundContext ctx(inst, sol);

    if (format == "json") {
        json j{{"instance", instance_path},
               {"scheme", scheme_str},
               {"trials", trials},
               {"seed", seed},
               {"probes", probes_to_json(probes, ctx.stats)}};
        emit(out_path, j.dump(2) + "\n");
    } else {
        emit(out_path, probes_to_csv(probes, ctx.stats));
    }

    if (fail_on_nonpass)
        for (const auto& p : probes)
            if (!p.pass) return kExitVerifyFail;
    return kExitOk;
}

int cmd_constants(bool check_gauss, bool boolean_mode, const std::string& out_path) {
    int rc = kExitOk;
    if (check_gauss) {
        // scaling inequality on a 400 x 20 grid, tail sandwich on 400 points
        int scaling_fail = 0, sandwich_fail = 0, comp_fail = 0, roundtrip_fail = 0;
        for (int i = 0; i < 400; ++i) {
            const double t = 0.05 + (20.0 - 0.05) * i / 399.0;
            for (int j = 0; j < 20; ++j) {
                const double beta = 0.05 + (1.0 - 0.05) * j / 19.0;
                if (!check_scaling_inequality(t, beta)) ++scaling_fail;
            }
            if (!check_tail_sandwich(t)) ++sandwich_fail;
            if (std::abs(phi(t) + phi_bar(t) - 1.0) > 1e-12) ++comp_fail;
        }
        for (int i = 0; i < 80; ++i) {
            const double t = 0.1 + (8.0 - 0.1) * i / 79.0;
            if (std::abs(phi_bar_inverse(phi_bar(t)) - t) > 1e-6) ++roundtrip_fail;
        }
        const int grid_fail = tail_grid_valid(make_tail_grid(0.05, 20.0, 400)) ? 0 : 1;
        auto line = [&](const char* name, int fails, int total) {
            std::cout << (fails == 0 ? "PASS" : "FAIL") << "  " << name << "  (" << (total - fails)
                      << "/" << total << ")\n";
            if (fails != 0) rc = kExitVerifyFail;
        };
        line("scaling inequality grid", scaling_fail, 400 * 20);
        line("tail sandwich grid", sandwich_fail, 400);
        line("phi/phi_bar complementarity", comp_fail, 400);
        line("tail inverse round-trip", roundtrip_fail, 80);
        line("tail grid monotone", grid_fail, 1);
    }
    if (boolean_mode || !check_gauss) {
        const BooleanConstants bc = find_beta0();
        char buf[128];
        std::snprintf(buf, sizeof buf, "beta0 %.9f\nalpha0 %.9f\n", bc.beta0, bc.alpha0);
        std::cout << buf;
        if (boolean_mode) {
            std::ostringstream csv;
            csv << "beta,g\n";
            for (const auto& [beta, g] : bc.g_samples) {
                std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", beta, g);
                csv << buf;
            }
            emit(out_path, csv.str());
        }
    }
    return rc;
}

}  // namespace

int cli_run(int argc, const char* const* argv) {
    CLI::App app{"SDP-rounding approximation toolkit for MAX k-CSP over [d] alphabets"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    int g_n = 5, g_d = 3, g_k = 2, g_m = 10;
    std::uint64_t g_seed = 1;
    std::string g_out;
    gen->add_option("--n", g_n, "number of variables")->required();
    gen->add_option("--d", g_d, "alphabet size")->required();
    gen->add_option("--k", g_k, "clause length")->required();
    gen->add_option("--m", g_m, "number of clauses")->required();
    gen->add_option("--seed", g_seed, "random seed");
    gen->add_option("--out", g_out, "output path (default stdout)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve an instance end to end");
    std::string s_instance, s_report, s_dump;
    std::uint64_t s_seed = 1;
    long long s_max_rounds = 0;
    double s_tol = 1e-6;
    bool s_boolean = false;
    solve_cmd->add_option("instance", s_instance, "instance file")->required();
    solve_cmd->add_option("--seed", s_seed, "random seed");
    solve_cmd->add_option("--max-rounds", s_max_rounds, "cap on rounding trials (0 = auto)");
    solve_cmd->add_option("--tol", s_tol, "SDP feasibility tolerance");
    solve_cmd->add_option("--report", s_report, "write JSON report here");
    solve_cmd->add_option("--dump-sdp", s_dump, "write the SDP solution here");
    solve_cmd->add_flag("--boolean", s_boolean, "use the boolean (d=2) pipeline");

    // round / verify share options
    std::string r_instance, r_scheme = "general", r_sdp_in, r_out, r_format = "csv";
    std::uint64_t r_seed = 1;
    long long r_trials = 100000;
    double r_pmix = 1.0;
    auto add_probe_options = [&](CLI::App* cmd) {
        cmd->add_option("instance", r_instance, "instance file")->required();
        cmd->add_option("--scheme", r_scheme, "uniform|survival|smallr|general|boolean");
        cmd->add_option("--trials", r_trials, "Monte Carlo trials per clause");
        cmd->add_option("--seed", r_seed, "random seed");
        cmd->add_option("--sdp-in", r_sdp_in, "read the SDP solution from this file");
        cmd->add_option("--out", r_out, "output path (default stdout)");
        cmd->add_option("--format", r_format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--p-mix", r_pmix, "projection-branch probability (boolean scheme)");
    };
    auto* round_cmd = app.add_subcommand("round", "per-clause rounding probability report");
    add_probe_options(round_cmd);
    auto* verify_cmd =
        app.add_subcommand("verify", "probe clause bounds; nonzero exit on any failure");
    add_probe_options(verify_cmd);

    // constants
    auto* constants_cmd = app.add_subcommand("constants", "numeric constants and grid checks");
    bool c_gauss = false, c_boolean = false;
    std::string c_out;
    constants_cmd->add_flag("--check-gauss", c_gauss, "run the Gaussian inequality grid checks");
    constants_cmd->add_flag("--boolean", c_boolean, "print beta0/alpha0 and the g(beta) table");
    constants_cmd->add_option("--out", c_out, "output path for the g table (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(g_n, g_d, g_k, g_m, g_seed, g_out);
        if (solve_cmd->parsed())
            return cmd_solve(s_instance, s_seed, s_max_rounds, s_tol, s_report, s_dump, s_boolean);
        if (round_cmd->parsed())
            return cmd_probe(r_instance, r_scheme, r_trials, r_seed, r_sdp_in, r_out, r_format,
                             r_pmix, false);
        if (verify_cmd->parsed())
            return cmd_probe(r_instance, r_scheme, r_trials, r_seed, r_sdp_in, r_out, r_format,
                             r_pmix, true);
        if (constants_cmd->parsed()) return cmd_constants(c_gauss, c_boolean, c_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace kcsp
