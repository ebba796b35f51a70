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

// Serial reference vs the search at 1 and N threads.
//
//   bench_solver [--repeat R] [--threads N]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include "CLI11.hpp"
#include "vecop/solver.hpp"

using namespace vecop;

namespace {

struct Case {
    const char* name;
    int vehicles;
    int edges;
    bool cloud;
    ProcessingSetting setting;
    double kbps;
    bool reference;  // small enough for brute_force
};

Scenario make(const Case& c)
{
    const Scenario base = generate_default(7);
    Scenario s;
    s.lot = base.lot;
    s.settings = base.settings;
    s.settings.processing_setting = c.setting;
    for (const NodeSpec& n : base.nodes) {
        if (n.kind == NodeKind::Vehicle && n.id <= "v" + std::to_string(c.vehicles))
            s.nodes.push_back(n);
        else if (n.kind == NodeKind::Edge && n.id <= "e" + std::to_string(c.edges))
            s.nodes.push_back(n);
        else if (n.kind == NodeKind::Cloud && c.cloud)
            s.nodes.push_back(n);
    }
    s.demands.push_back({"d1", "v1", c.kbps, std::nullopt});
    validate(s);
    return s;
}

template <class F>
double best_of(int repeat, F&& f)
{
    double best = 1e300;
    for (int i = 0; i < repeat; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Solver benchmark"};
    int repeat = 3;
    int threads = omp_get_max_threads();
    app.add_option("--repeat", repeat)->check(CLI::PositiveNumber);
    app.add_option("--threads", threads)->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    const std::vector<Case> cases = {
        {"4v+edge VE", 4, 1, false, ProcessingSetting::VehiclesAndEdge, 2000, true},
        {"4v+edge+cloud VE", 4, 1, true, ProcessingSetting::VehiclesAndEdge, 4000, true},
        {"8v+2e+cloud VE", 8, 2, true, ProcessingSetting::VehiclesAndEdge, 6000, false},
        {"8v VO", 8, 0, false, ProcessingSetting::VehiclesOnly, 6000, false},
    };
    const ObjectiveWeights w{0.05, 300.0, ObjectivePreset::Custom};
    std::printf("%-20s %12s %12s %12s %8s\n", "case", "reference_s", "solve_1t_s", "solve_Nt_s",
                "N");
    for (const Case& c : cases) {
        const Scenario s = make(c);
        const LinkSet ls = build_links(s);
        const auto tables = build_tables(s, ls);
        SolverLimits one, many;
        one.threads = 1;
        many.threads = threads;
        double ref = -1;
        if (c.reference)
            ref = best_of(repeat, [&] { brute_force(s, ls, tables, w); });
        const double t1 = best_of(repeat, [&] { solve(s, ls, tables, w, one); });
        const double tn = best_of(repeat, [&] { solve(s, ls, tables, w, many); });
        if (ref >= 0)
            std::printf("%-20s %12.6f %12.6f %12.6f %8d\n", c.name, ref, t1, tn, threads);
        else
            std::printf("%-20s %12s %12.6f %12.6f %8d\n", c.name, "-", t1, tn, threads);
    }
    return 0;
}
