// Command-line front end: runs the named experiment, prints one summary line
// per report, and optionally writes each report as CSV.  Exit codes: 0 when
// every flagged row passes, 1 on usage errors, 2 when a run fails an
// invariant or a flagged row.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tauberian/experiments.hpp"

namespace {

std::string ordinal_name(std::size_t i, const std::string& title) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02zu", i);
    return std::string(buf) + "_" + title + ".csv";
}

void print_report(const tauberian::ValueReport& rep) {
    std::printf("report %-28s rows=%zu failures=%zu %s\n", rep.title().c_str(),
                rep.rows().size(), rep.flagged_failures(), rep.all_pass() ? "ok" : "FAIL");
    for (const auto& row : rep.rows()) {
        if (!row.pass.has_value() || *row.pass) continue;
        std::string line = "  fail " + row.label;
        for (std::size_t c = 0; c < row.values.size(); ++c)
            line += " " + rep.columns()[c] + "=" + tauberian::format_double(row.values[c]);
        std::printf("%s\n", line.c_str());
    }
}

void dump_witness(const tauberian::control::ControlProblem& p,
                  const tauberian::control::SearchConfig& cfg, double t, double h,
                  const std::string& path) {
    const tauberian::control::State origin{0.0, 0.0};
    auto est = tauberian::control::estimate_Vt(p, origin, t, cfg);
    tauberian::plays::Trajectory x =
        tauberian::control::simulate(p, origin, est.witness, t, h);
    x.write_csv_file(path);
    std::printf("wrote %s (payoff %s)\n", path.c_str(),
                tauberian::format_double(est.value).c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tauberian laboratory for long-run averages in optimal control"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list available experiments");

    auto* run = app.add_subcommand("run", "run one experiment (or 'all')");
    std::string name;
    tauberian::experiments::RunOptions opts;
    std::string out_dir, export_graph;
    bool dump_traj = false;
    run->add_option("experiment", name, "experiment name, or 'all'")->required();
    run->add_option("--t-grid", opts.t_grid, "horizon grid override")->delimiter(',');
    run->add_option("--lambda-grid", opts.lambda_grid, "discount grid override")->delimiter(',');
    run->add_option("--n-grid", opts.n_grid, "stage-count grid override")->delimiter(',');
    run->add_option("--seed", opts.seed, "RNG seed for randomized audits");
    run->add_option("--step", opts.step, "integration step for quadrature payoffs");
    run->add_option("--graph", opts.graph_path, "successor-graph file for 'discrete'");
    run->add_option("--preset", opts.preset, "built-in graph for 'discrete'");
    run->add_option("--out", out_dir, "directory for CSV reports");
    run->add_option("--export-graph", export_graph,
                    "write the instance graph ('discrete' or 'bridge') to this path");
    run->add_flag("--dump-trajectories", dump_traj,
                  "write witness trajectories (needs --out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (list->parsed()) {
        for (const auto& n : tauberian::experiments::experiment_names())
            std::printf("%s\n", n.c_str());
        return 0;
    }

    try {
        const auto reports = tauberian::experiments::run_experiment(name, opts);

        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            for (std::size_t i = 0; i < reports.size(); ++i)
                reports[i].write_csv_file(
                    (std::filesystem::path(out_dir) / ordinal_name(i, reports[i].title()))
                        .string());
        }

        if (!export_graph.empty()) {
            if (name == "discrete") {
                auto p = opts.graph_path.empty()
                             ? tauberian::experiments::preset_graph(opts.preset)
                             : tauberian::discrete::DiscreteProblem::parse_file(opts.graph_path);
                p.write_file(export_graph);
            } else if (name == "bridge") {
                tauberian::experiments::bridged_counterexample(opts.step)
                    .graph.write_file(export_graph);
            } else {
                std::fprintf(stderr, "--export-graph applies to 'discrete' or 'bridge'\n");
                return 1;
            }
            std::printf("wrote %s\n", export_graph.c_str());
        }

        if (dump_traj) {
            if (out_dir.empty()) {
                std::fprintf(stderr, "--dump-trajectories needs --out\n");
                return 1;
            }
            const auto dir = std::filesystem::path(out_dir);
            if (name == "counterexample" || name == "all")
                dump_witness(tauberian::control::counterexample(),
                             tauberian::experiments::detail_exp::with_step(opts), 20.0,
                             opts.step, (dir / "witness_counterexample_t20.csv").string());
            if (name == "smooth" || name == "all")
                dump_witness(tauberian::control::smooth_variant(),
                             tauberian::experiments::smooth_search(opts), 20.0, opts.step,
                             (dir / "witness_smooth_t20.csv").string());
        }

        bool ok = true;
        for (const auto& rep : reports) {
            print_report(rep);
            ok = ok && rep.all_pass();
        }
        std::printf("%s\n", ok ? "ALL OK" : "FAILURES PRESENT");
        return ok ? 0 : 2;
    } catch (const tauberian::domain_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run failed: %s\n", e.what());
        return 2;
    }
}
