// Copyright 2026 The vecop Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// vecop: scenario tooling, solver and experiment harness.
//
// Exit codes: 0 ok, 1 usage, 2 validation, 3 infeasible, 4 limits.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vecop/experiment.hpp"

namespace {

using namespace vecop;

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kInfeasible = 3, kLimits = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_out(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageError("cannot write " + path);
    out << text;
}

Scenario load(const std::string& path)
{
    Scenario s = parse_scenario(read_file(path));
    validate(s);
    return s;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep))
        if (!cur.empty())
            out.push_back(cur);
    return out;
}

struct SolveOpts {
    int threads = 0;
    std::size_t max_nodes = 12;
    bool force = false;

    void attach(CLI::App* app)
    {
        app->add_option("--threads", threads, "Solver threads (0: all)")->check(CLI::NonNegativeNumber);
        app->add_option("--max-nodes", max_nodes, "Instance size guard")->capture_default_str();
        app->add_flag("--force", force, "Ignore the size guard");
    }

    SolverLimits limits() const
    {
        SolverLimits l;
        l.threads = threads;
        l.max_nodes = max_nodes;
        l.force = force;
        return l;
    }
};

ObjectiveChoice objective_or_default(const std::string& text, const Scenario& s)
{
    if (!text.empty())
        return parse_objective(text);
    const ObjectiveWeights& w = s.settings.objective;
    return {w.preset, w.w_power, w.w_delay};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"vecop: power/delay-optimal placement of vehicular processing demands"};
    app.require_subcommand(1);

    std::string scenario_path, setting, objective, out_path, csv_path, json_path, plot_path;

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario document");
    validate_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();

    // gen
    std::uint64_t seed = 42;
    auto* gen = app.add_subcommand("gen", "Generate the default parking-lot scenario");
    gen->add_option("--seed", seed, "Vehicle placement seed")->capture_default_str();
    gen->add_option("-o,--output", out_path, "Output file (default stdout)");

    // links
    auto* links_cmd = app.add_subcommand("links", "List feasible links");
    links_cmd->add_option("--scenario", scenario_path)->required();
    links_cmd->add_option("--setting", setting, "Processing setting override");
    links_cmd->add_option("--csv", csv_path, "Output file (default stdout)");

    // table
    double mu = 0, rho_max = 0.95;
    int bins = 64;
    std::string link_id;
    auto* table_cmd = app.add_subcommand("table", "Print a queueing delay lookup table");
    table_cmd->add_option("--mu", mu, "Service rate, packets/s");
    table_cmd->add_option("--rho-max", rho_max)->capture_default_str();
    table_cmd->add_option("--bins", bins)->capture_default_str();
    table_cmd->add_option("--scenario", scenario_path, "Take mu, rho_max, bins from a link");
    table_cmd->add_option("--link", link_id, "Link as TX->RX (with --scenario)");
    table_cmd->add_option("--csv", csv_path, "Output file (default stdout)");

    // export
    bool stats = false;
    SolveOpts export_opts;
    auto* export_cmd = app.add_subcommand("export", "Write the MILP in CPLEX LP format");
    export_cmd->add_option("--scenario", scenario_path)->required();
    export_cmd->add_option("--setting", setting);
    export_cmd->add_option("--objective", objective, "power | joint | custom:WP,WD");
    export_cmd->add_option("-o,--output", out_path, "LP file (default stdout)");
    export_cmd->add_flag("--stats", stats, "Print variable/constraint counts per family");
    export_opts.attach(export_cmd);

    // solve
    SolveOpts solve_opts;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario exactly");
    solve_cmd->add_option("--scenario", scenario_path)->required();
    solve_cmd->add_option("--setting", setting);
    solve_cmd->add_option("--objective", objective, "power | joint | custom:WP,WD");
    solve_cmd->add_option("-o,--output,--json", out_path, "Result JSON (default stdout)");
    solve_opts.attach(solve_cmd);

    // sweep
    std::string demands = "1000,2000,3000,4000,5000,6000";
    std::string settings = "vehicles_only,vehicles_and_edge,cloud_only";
    std::string objectives = "power,joint";
    SolveOpts sweep_opts;
    auto* sweep_cmd = app.add_subcommand("sweep", "Demand sweep over settings and objectives");
    sweep_cmd->add_option("--scenario", scenario_path)->required();
    sweep_cmd->add_option("--demands", demands, "kbit/s, comma separated")->capture_default_str();
    sweep_cmd->add_option("--settings", settings)->capture_default_str();
    sweep_cmd->add_option("--objectives", objectives, "Objectives separated by ';' or ','")
        ->capture_default_str();
    sweep_cmd->add_option("--csv", csv_path, "Result table CSV");
    sweep_cmd->add_option("--json", json_path, "Result table JSON, with solver statistics");
    sweep_cmd->add_option("--plotdata", plot_path, "Long-format plot data CSV");
    sweep_opts.attach(sweep_cmd);

    // report
    std::string table_path;
    auto* report_cmd = app.add_subcommand("report", "Comparison metrics from a sweep table");
    report_cmd->add_option("--table", table_path, "Sweep CSV")->required();
    report_cmd->add_option("--csv", csv_path, "Report CSV");
    report_cmd->add_option("--json", json_path, "Report JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*validate_cmd) {
            const Scenario s = load(scenario_path);
            std::cout << "ok " << scenario_hash(s) << " nodes=" << s.nodes.size()
                      << " demands=" << s.demands.size() << "\n";
            return kOk;
        }
        if (*gen) {
            write_out(out_path, emit_scenario(generate_default(seed)));
            return kOk;
        }
        if (*table_cmd) {
            QueueSpec q{mu, rho_max};
            if (!scenario_path.empty()) {
                const Scenario s = load(scenario_path);
                const LinkSet ls = build_links(s);
                const auto arrow = link_id.find("->");
                if (arrow == std::string::npos)
                    throw UsageError("--link expects TX->RX");
                const auto tx = s.find_node(link_id.substr(0, arrow));
                const auto rx = s.find_node(link_id.substr(arrow + 2));
                const Link* found = nullptr;
                for (const Link& l : ls.links)
                    if (tx && rx && l.tx_node == *tx && l.rx_node == *rx)
                        found = &l;
                if (!found)
                    throw ValidationError("link " + link_id + ": not in the link graph");
                q = {found->capacity_bps / (8.0 * s.settings.packet_size_bytes), s.settings.rho_max};
                bins = s.settings.bins;
            } else if (!(mu > 0)) {
                throw UsageError("table needs --mu or --scenario with --link");
            }
            const DelayTable t = build_table(q, bins);
            std::string out = "k,lambda_pps,delay_us\n";
            char buf[96];
            for (std::size_t k = 0; k < t.bins(); ++k) {
                std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g\n", k + 1, t.upper_pps[k], t.delay_s[k] * 1e6);
                out += buf;
            }
            write_out(csv_path, out);
            return kOk;
        }
        if (*report_cmd) {
            const Report r = report(read_table_csv(read_file(table_path)));
            if (csv_path.empty() && json_path.empty())
                std::cout << report_csv(r);
            if (!csv_path.empty())
                write_out(csv_path, report_csv(r));
            if (!json_path.empty())
                write_out(json_path, report_json(r));
            return kOk;
        }

        Scenario s = load(scenario_path);
        if (!setting.empty()) {
            s.settings.processing_setting = parse_processing_setting(setting);
            validate(s);
        }

        if (*links_cmd) {
            write_out(csv_path, links_csv(s, build_links(s)));
            return kOk;
        }
        if (*export_cmd) {
            const LinkSet ls = build_links(s);
            const auto tables = build_tables(s, ls);
            const ObjectiveWeights w = resolve_weights(s, ls, tables, objective_or_default(objective, s),
                                                       export_opts.limits());
            const MilpModel m = formulate(s, ls, tables, w);
            if (stats) {
                const ModelCensus c = census(m);
                std::string text = "family,variables,constraints\n";
                std::map<std::string, std::pair<std::size_t, std::size_t>> rows;
                for (const auto& [f, n] : c.variables)
                    rows[f].first = n;
                for (const auto& [f, n] : c.constraints)
                    rows[f].second = n;
                for (const auto& [f, p] : rows)
                    text += f + "," + std::to_string(p.first) + "," + std::to_string(p.second) + "\n";
                text += "total," + std::to_string(c.total_variables) + "," +
                        std::to_string(c.total_constraints) + "\n";
                (out_path.empty() ? std::cerr : std::cout) << text;
            }
            if (!out_path.empty() || !stats)
                write_out(out_path, export_lp(m));
            return kOk;
        }
        if (*solve_cmd) {
            LinkSet ls;
            try {
                ls = build_links(s);
            } catch (const IsolatedSourceError& e) {
                std::cerr << "infeasible: C4: " << e.what() << "\n";
                return kInfeasible;
            }
            const auto tables = build_tables(s, ls);
            const SolveResult r =
                solve_with(s, ls, tables, objective_or_default(objective, s), solve_opts.limits());
            write_out(out_path, result_json(s, ls, r));
            if (!r.feasible()) {
                std::cerr << "infeasible: " << r.infeasible_reason << "\n";
                return kInfeasible;
            }
            return kOk;
        }
        if (*sweep_cmd) {
            SweepSpec spec;
            spec.limits = sweep_opts.limits();
            spec.demands_kbps.clear();
            for (const auto& d : split(demands, ',')) {
                std::size_t used = 0;
                double v = 0;
                try {
                    v = std::stod(d, &used);
                } catch (const std::logic_error&) {
                }
                if (used != d.size() || !(v > 0))
                    throw ValidationError("demands: '" + d + "' is not a positive number");
                spec.demands_kbps.push_back(v);
            }
            spec.settings.clear();
            for (const auto& st : split(settings, ','))
                spec.settings.push_back(parse_processing_setting(st));
            spec.objectives.clear();
            // custom:WP,WD contains a comma, so ';' separates when present.
            const char sep = objectives.find(';') != std::string::npos ? ';' : ',';
            for (const auto& o : split(objectives, sep))
                spec.objectives.push_back(parse_objective(o));

            const ResultTable t = sweep(s, spec);
            if (csv_path.empty() && json_path.empty() && plot_path.empty())
                std::cout << table_csv(t);
            if (!csv_path.empty())
                write_out(csv_path, table_csv(t));
            if (!json_path.empty())
                write_out(json_path, table_json(t));
            if (!plot_path.empty())
                write_out(plot_path, plotdata_csv(t));
            return kOk;
        }
    } catch (const ParseError& e) {
        std::cerr << scenario_path << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
        return kValidation;
    } catch (const LimitError& e) {
        std::cerr << "limits: " << e.what() << "\n";
        return kLimits;
    } catch (const IsolatedSourceError& e) {
        std::cerr << "infeasible: C4: " << e.what() << "\n";
        return kInfeasible;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        // ValidationError, FormulationError, ReportError, QueueError, ...
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kUsage;
}
